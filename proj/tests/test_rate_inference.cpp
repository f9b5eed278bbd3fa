#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "invreg/rate_inference.hpp"

using namespace invreg;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Phi(x) = 1/2 + erf(x / sqrt 2) / 2 with erf from its Maclaurin series in long double.
long double series_cdf(long double x) {
    const long double z = x / std::sqrt(2.0L);
    long double term = z, sum = z;
    for (int n = 1; n < 80; ++n) {
        term *= -z * z / n;
        sum += term / (2 * n + 1);
    }
    return 0.5L + sum / std::sqrt(std::numbers::pi_v<long double>);
}

// Samples whose mean errors lie exactly on log mean = theta log sigma + rho.
std::vector<RateSample> on_line(double theta, double rho, const std::vector<double>& sigmas,
                                const std::vector<double>& deltas) {
    std::vector<RateSample> out;
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        RateSample s;
        s.sigma = sigmas[i];
        s.mean = std::exp(theta * std::log(sigmas[i]) + rho);
        s.delta = deltas[i];
        out.push_back(s);
    }
    return out;
}

}  // namespace

TEST_CASE("normal_cdf", "[rates]") {
    CHECK(normal_cdf(0.0) == 0.5);
    CHECK_THAT(normal_cdf(1.6448536), WithinAbs(0.95, 1e-6));
    for (double x : {-3.0, -1.6448536, -0.3, 0.7, 2.2}) CHECK_THAT(normal_cdf(x), WithinAbs(static_cast<double>(series_cdf(x)), 1e-12));
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-8.0, 8.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng);
        CHECK_THAT(normal_cdf(x) + normal_cdf(-x), WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("estimate_delta", "[rates]") {
    CHECK_THROWS_AS(estimate_delta(std::vector<double>{1.0, 1.0, 1.0}), degenerate_variance_error);
    CHECK_THAT(estimate_delta(std::vector<double>{1.0, 3.0}), WithinRel(0.5, 1e-15));
    CHECK_THROWS_AS(estimate_delta(std::vector<double>{1.0}), std::invalid_argument);
    const std::vector<double> e{0.3, 1.1, 0.7, 2.0};
    std::vector<double> scaled;
    for (double x : e) scaled.push_back(x * 4.0);
    CHECK(estimate_delta(scaled) == estimate_delta(e));
}

TEST_CASE("weighted_slope_fit", "[rates]") {
    const std::vector<double> x{std::log(0.1), std::log(0.01)};
    const std::vector<double> y{std::log(2.0), std::log(0.5)};
    const auto two = weighted_slope_fit(x, y, std::vector<double>{0.2, 0.2});
    CHECK_THAT(two.theta_hat, WithinRel((y[1] - y[0]) / (x[1] - x[0]), 1e-13));

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 3 + static_cast<std::size_t>(trial % 6);
        std::vector<double> xs, ys, ds;
        for (std::size_t i = 0; i < n; ++i) {
            xs.push_back(-static_cast<double>(i) * 0.7 - 3.0);
            ds.push_back(u(rng));
        }
        for (double xi : xs) ys.push_back(0.75 * xi - 1.3);
        CHECK_THAT(weighted_slope_fit(xs, ys, ds).theta_hat, WithinAbs(0.75, 1e-12));

        // Naive normal equations solved by Cramer's rule in long double.
        for (auto& yi : ys) yi += u(rng) - 0.5;
        long double a = 0, b = 0, c = 0, d = 0, e = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const long double w = 1.0L / (static_cast<long double>(ds[i]) * ds[i]);
            a += w;
            b += w * xs[i];
            c += w * xs[i] * xs[i];
            d += w * ys[i];
            e += w * xs[i] * ys[i];
        }
        const long double det = a * c - b * b;
        const auto fit = weighted_slope_fit(xs, ys, ds);
        CHECK_THAT(fit.theta_hat, WithinRel(static_cast<double>((a * e - b * d) / det), 1e-10));
        CHECK_THAT(fit.rho_hat, WithinRel(static_cast<double>((c * d - b * e) / det), 1e-10));
    }
    CHECK_THROWS_AS(weighted_slope_fit(std::vector<double>{1.0, 1.0}, std::vector<double>{0.0, 1.0},
                                       std::vector<double>{1.0, 1.0}),
                    singular_design_error);
}

TEST_CASE("rate_test", "[rates]") {
    const std::vector<double> sigmas{1e-2, 5e-3, 2.5e-3, 1.25e-3};
    const auto exact = rate_test(on_line(0.75, 0.4, sigmas, {0.1, 0.1, 0.1, 0.1}), 0.75);
    CHECK_THAT(exact.theta_hat, WithinAbs(0.75, 1e-12));
    CHECK_THAT(exact.statistic, WithinAbs(0.0, 1e-10));
    CHECK_THAT(exact.p_value, WithinAbs(0.5, 1e-10));
    CHECK_FALSE(exact.reject_at.at(0.10));

    const auto steep = rate_test(on_line(2.0, 0.0, sigmas, {0.01, 0.01, 0.01, 0.01}), 0.75);
    CHECK(steep.p_value > 0.999999);
    for (const auto& [level, rejected] : steep.reject_at) CHECK_FALSE(rejected);

    const auto shallow = rate_test(on_line(0.2, 0.0, sigmas, {0.01, 0.01, 0.01, 0.01}), 0.75);
    CHECK(shallow.p_value < 1e-6);
    CHECK(shallow.reject_at.at(0.01));

    // Common rescaling of sigma shifts rho only.
    std::vector<double> scaled;
    for (double s : sigmas) scaled.push_back(s * 7.0);
    auto samples = on_line(0.6, 0.1, sigmas, {0.05, 0.1, 0.2, 0.3});
    for (auto& s : samples) s.mean *= std::exp(0.01 * s.sigma * 1e3);
    auto moved = samples;
    for (std::size_t i = 0; i < moved.size(); ++i) moved[i].sigma = scaled[i];
    const auto r1 = rate_test(samples, 0.75);
    const auto r2 = rate_test(moved, 0.75);
    CHECK_THAT(r2.theta_hat, WithinAbs(r1.theta_hat, 1e-10));
    CHECK(std::abs(r2.rho_hat - r1.rho_hat) > 0.1);

    // T increases with theta_hat when the design is held fixed.
    double previous = -std::numeric_limits<double>::infinity();
    for (double theta : {0.1, 0.3, 0.5, 0.9}) {
        const double t = rate_test(on_line(theta, 0.0, sigmas, {0.1, 0.2, 0.1, 0.3}), 0.5).statistic;
        CHECK(t > previous);
        previous = t;
    }

    CHECK_THROWS_AS(rate_test(on_line(0.75, 0.0, {1e-2, 1e-3}, {0.1, 0.1}), 0.75), std::invalid_argument);
}

TEST_CASE("rate samples from a risk table", "[rates]") {
    RiskTable t;
    for (double sigma : {1e-2, 1e-3, 1e-4}) {
        RiskRow r;
        r.sigma = sigma;
        for (int j = 0; j < 4; ++j) r.per_rep.push_back({sigma * (1 + j), sigma * (2 + j), sigma * (3 + j)});
        aggregate_row(r, r.per_rep);
        t.rows.push_back(r);
    }
    const auto lep = rate_samples(t, SelectionRule::Lepskii);
    REQUIRE(lep.size() == 3);
    CHECK_THAT(lep[0].mean, WithinRel(t.rows[0].r_lep, 1e-15));
    const auto res = rate_test(rate_samples(t, SelectionRule::Pred), 1.0);
    CHECK_THAT(res.theta_hat, WithinAbs(1.0, 1e-12));
    CHECK_THROWS_AS(rate_samples(t, SelectionRule::APriori), std::invalid_argument);
}
