#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <set>

#include "invreg/random.hpp"

using namespace invreg;

TEST_CASE("splitmix64 matches the reference generator", "[random]") {
    // First output of the reference SplitMix64 seeded with 0.
    CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
}

TEST_CASE("mix_seed separates substreams", "[random]") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t master = 0; master < 4; ++master)
        for (std::uint64_t i = 0; i < 256; ++i) seen.insert(mix_seed(master, i));
    CHECK(seen.size() == 4 * 256);
    CHECK(mix_seed(7, 3) == mix_seed(7, 3));
}

TEST_CASE("NormalStream is reproducible", "[random]") {
    NormalStream a(42), b(42), c(43);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const double x = a();
        CHECK(x == b());
        if (x != c()) differs = true;
    }
    CHECK(differs);
}

TEST_CASE("NormalStream moments", "[random]") {
    NormalStream z(2024);
    constexpr int n = 200000;
    double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = z();
        sum += x;
        sum2 += x * x;
        sum4 += x * x * x * x;
    }
    CHECK(std::abs(sum / n) < 4.0 / std::sqrt(n));
    CHECK(std::abs(sum2 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
    CHECK(std::abs(sum4 / n - 3.0) < 4.0 * std::sqrt(96.0 / n));
}

TEST_CASE("sign is fair", "[random]") {
    NormalStream z(5);
    int plus = 0;
    constexpr int n = 100000;
    for (int i = 0; i < n; ++i) plus += z.sign() > 0 ? 1 : 0;
    CHECK(std::abs(plus - n / 2) < 4.0 * std::sqrt(n / 4.0));
}
