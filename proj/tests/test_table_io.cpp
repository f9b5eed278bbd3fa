#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <limits>

#include "invreg/montecarlo.hpp"
#include "invreg/table_io.hpp"

using namespace invreg;

namespace {

RiskTable sample_table() {
    RiskTable t;
    double v = 0.1;
    for (double sigma : {0.5, 1.0 / 3.0, 1e-300}) {
        RiskRow r;
        r.sigma = sigma;
        for (int j = 0; j < 3; ++j) {
            r.per_rep.push_back({v, v * 1.7, v * 2.9});
            v = v * 1.1 + 1e-17;
        }
        aggregate_row(r, r.per_rep);
        t.rows.push_back(r);
    }
    return t;
}

}  // namespace

TEST_CASE("number formatting", "[io]") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e-300) == "1e-300");
    CHECK(format_double(2.0) == "2");
    for (double x : {1.0 / 3.0, 2.0 / 7.0 * 1e-200, std::numeric_limits<double>::denorm_min(), -0.0, 6.02214076e23})
        CHECK(parse_double(format_double(x)) == x);
    CHECK_THROWS_AS(parse_double("1.0x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_double(""), std::invalid_argument);
}

TEST_CASE("risk table round trip", "[io]") {
    const auto t = sample_table();
    const std::string csv = to_csv(t);
    CHECK(csv.substr(0, csv.find('\n')) == "sigma,R_or,se_or,R_pred,se_pred,R_LEP,se_lep");
    const auto back = parse_risk_table(csv);
    REQUIRE(back.rows.size() == t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        CHECK(back.rows[i].sigma == t.rows[i].sigma);
        CHECK(back.rows[i].r_or == t.rows[i].r_or);
        CHECK(back.rows[i].se_lep == t.rows[i].se_lep);
    }
    CHECK(to_csv(back) == csv);
}

TEST_CASE("per-replication errors round trip", "[io]") {
    const auto t = sample_table();
    const std::string csv = per_rep_errors_csv(t);
    const auto back = parse_per_rep_errors(csv);
    REQUIRE(back.rows.size() == 3);
    CHECK(to_csv(back) == to_csv(t));
    CHECK(per_rep_errors_csv(back) == csv);

    std::string swapped = csv;
    swapped.replace(swapped.find(",0,"), 3, ",1,");
    CHECK_THROWS_AS(parse_per_rep_errors(swapped), std::invalid_argument);
}

TEST_CASE("efficiency and score tables round trip", "[io]") {
    EfficiencyTable e;
    e.rows = {{0.1, 0.9, 0.8}, {0.01, 0.95, 1.0 / 3.0}};
    CHECK(to_csv(parse_efficiency_table(to_csv(e))) == to_csv(e));
    CHECK(to_csv(e).rfind("sigma,eff_pred,eff_lep\n", 0) == 0);

    ScoreCurve c;
    c.points = {{0.1, 0.01, -3.5}, {0.1, 0.012, -3.25}};
    CHECK(to_csv(parse_score_curve(to_csv(c))) == to_csv(c));
}

TEST_CASE("malformed and empty tables", "[io]") {
    CHECK_THROWS_AS(to_csv(RiskTable{}), std::invalid_argument);
    CHECK_THROWS_AS(to_csv(EfficiencyTable{}), std::invalid_argument);
    CHECK_THROWS_AS(parse_risk_table("sigma,R_or\n1,2\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_risk_table("sigma,R_or,se_or,R_pred,se_pred,R_LEP,se_lep\n1,2,3\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_risk_table(""), std::invalid_argument);

    RiskTable no_errors = sample_table();
    for (auto& r : no_errors.rows) r.per_rep.clear();
    CHECK_THROWS_AS(per_rep_errors_csv(no_errors), std::invalid_argument);
}

TEST_CASE("file writes are byte identical", "[io]") {
    const auto dir = std::filesystem::temp_directory_path() / "invreg_io_test";
    std::filesystem::create_directories(dir);
    const std::string csv = to_csv(sample_table());
    write_file(dir / "a.csv", csv);
    write_file(dir / "b.csv", to_csv(parse_risk_table(read_file(dir / "a.csv"))));
    CHECK(read_file(dir / "a.csv") == read_file(dir / "b.csv"));
    CHECK_THROWS_AS(read_file(dir / "missing.csv"), io_error);
    CHECK_THROWS_AS(write_file(dir / "no_such_dir" / "x.csv", csv), io_error);
    std::filesystem::remove_all(dir);
}
