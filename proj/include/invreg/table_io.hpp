#pragma once

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "errors.hpp"
#include "montecarlo.hpp"

namespace invreg {

/// r_hat(alpha, Y) along the grid for one draw at one noise level per block.
struct ScoreCurvePoint {
    double sigma = 0.0;
    double alpha = 0.0;
    double score = 0.0;
};

struct ScoreCurve {
    std::vector<ScoreCurvePoint> points;
};

/// Filesystem write or read failure.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kRiskTableHeader = "sigma,R_or,se_or,R_pred,se_pred,R_LEP,se_lep";
inline constexpr std::string_view kPerRepHeader = "sigma,replication,err_or,err_pred,err_lep";
inline constexpr std::string_view kEfficiencyHeader = "sigma,eff_pred,eff_lep";
inline constexpr std::string_view kScoreCurveHeader = "sigma,alpha,score";

/// Shortest decimal that reads back to the same double; '.' separator, no locale.
inline std::string format_double(double x) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return {buf, end};
}

inline double parse_double(std::string_view text) {
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size())
        throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    return value;
}

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

/// Data rows of a CSV whose first line must equal `header`; every row has `width` numeric fields.
inline std::vector<std::vector<double>> parse_numeric_csv(std::string_view csv, std::string_view header,
                                                          std::size_t width) {
    std::vector<std::vector<double>> rows;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < csv.size()) {
        std::size_t eol = csv.find('\n', pos);
        if (eol == std::string_view::npos) eol = csv.size();
        std::string_view line = csv.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line_no == 1) {
            if (line != header)
                throw std::invalid_argument("unexpected CSV header '" + std::string(line) + "', expected '" +
                                            std::string(header) + "'");
            continue;
        }
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != width)
            throw std::invalid_argument("CSV line " + std::to_string(line_no) + " has " +
                                        std::to_string(fields.size()) + " fields, expected " + std::to_string(width));
        std::vector<double> row;
        row.reserve(width);
        for (auto f : fields) row.push_back(parse_double(f));
        rows.push_back(std::move(row));
    }
    if (line_no == 0) throw std::invalid_argument("empty CSV input");
    return rows;
}

template <class Row, class Emit>
std::string emit_rows(std::string_view header, const std::vector<Row>& rows, Emit&& emit) {
    require(!rows.empty(), "refusing to write an empty table");
    std::string out(header);
    out += '\n';
    for (const auto& row : rows) {
        emit(out, row);
        out += '\n';
    }
    return out;
}

inline void append_fields(std::string& out, std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        if (!first) out += ',';
        out += format_double(v);
        first = false;
    }
}

}  // namespace detail

inline std::string to_csv(const RiskTable& table) {
    return detail::emit_rows(kRiskTableHeader, table.rows, [](std::string& out, const RiskRow& r) {
        detail::append_fields(out, {r.sigma, r.r_or, r.se_or, r.r_pred, r.se_pred, r.r_lep, r.se_lep});
    });
}

/// Per-replication errors of every row, in row then replication order.
inline std::string per_rep_errors_csv(const RiskTable& table) {
    detail::require(!table.rows.empty(), "refusing to write an empty table");
    std::string out(kPerRepHeader);
    out += '\n';
    for (const auto& r : table.rows) {
        detail::require(!r.per_rep.empty(), "risk table has no retained per-replication errors");
        for (std::size_t j = 0; j < r.per_rep.size(); ++j) {
            const auto& e = r.per_rep[j];
            detail::append_fields(out, {r.sigma, static_cast<double>(j), e.err_or, e.err_pred, e.err_lep});
            out += '\n';
        }
    }
    return out;
}

inline std::string to_csv(const EfficiencyTable& table) {
    return detail::emit_rows(kEfficiencyHeader, table.rows, [](std::string& out, const EfficiencyRow& r) {
        detail::append_fields(out, {r.sigma, r.eff_pred, r.eff_lep});
    });
}

inline std::string to_csv(const ScoreCurve& curve) {
    return detail::emit_rows(kScoreCurveHeader, curve.points, [](std::string& out, const ScoreCurvePoint& p) {
        detail::append_fields(out, {p.sigma, p.alpha, p.score});
    });
}

inline RiskTable parse_risk_table(std::string_view csv) {
    RiskTable table;
    for (const auto& f : detail::parse_numeric_csv(csv, kRiskTableHeader, 7)) {
        RiskRow r;
        r.sigma = f[0];
        r.r_or = f[1];
        r.se_or = f[2];
        r.r_pred = f[3];
        r.se_pred = f[4];
        r.r_lep = f[5];
        r.se_lep = f[6];
        table.rows.push_back(std::move(r));
    }
    return table;
}

/**
 * Rebuilds a risk table from a per-replication error CSV. Rows are grouped by
 * consecutive sigma values; means and standard errors are recomputed with
 * aggregate_row.
 */
inline RiskTable parse_per_rep_errors(std::string_view csv) {
    RiskTable table;
    for (const auto& f : detail::parse_numeric_csv(csv, kPerRepHeader, 5)) {
        if (table.rows.empty() || table.rows.back().sigma != f[0]) {
            table.rows.emplace_back();
            table.rows.back().sigma = f[0];
        }
        auto& row = table.rows.back();
        if (f[1] != static_cast<double>(row.per_rep.size()))
            throw std::invalid_argument("per-replication errors out of order at sigma " + format_double(f[0]));
        row.per_rep.push_back({f[2], f[3], f[4]});
    }
    detail::require(!table.rows.empty(), "per-replication error file has no rows");
    for (auto& row : table.rows) aggregate_row(row, row.per_rep);
    return table;
}

inline EfficiencyTable parse_efficiency_table(std::string_view csv) {
    EfficiencyTable table;
    for (const auto& f : detail::parse_numeric_csv(csv, kEfficiencyHeader, 3)) table.rows.push_back({f[0], f[1], f[2]});
    return table;
}

inline ScoreCurve parse_score_curve(std::string_view csv) {
    ScoreCurve curve;
    for (const auto& f : detail::parse_numeric_csv(csv, kScoreCurveHeader, 3)) curve.points.push_back({f[0], f[1], f[2]});
    return curve;
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open '" + path.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw io_error("write to '" + path.string() + "' failed");
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path.string() + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace invreg
