#include "doctest.h"

#include <algorithm>
#include <set>

#include "cadclust/rng.hpp"

using namespace cadclust;

namespace {

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

// Reference xoshiro256** step.
std::uint64_t xoshiro_next(std::uint64_t s[4]) {
    const std::uint64_t result = rotl(s[1] * 5, 7) * 9;
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
}

}  // namespace

TEST_CASE("splitmix64 reference vector") {
    std::uint64_t state = 1234567;
    CHECK(splitmix64(state) == 6457827717110365317ULL);
    CHECK(splitmix64(state) == 3203168211198807973ULL);
    CHECK(splitmix64(state) == 9817491932198370423ULL);
    CHECK(splitmix64(state) == 4593380528125082431ULL);
    CHECK(splitmix64(state) == 16408922859458223821ULL);
}

TEST_CASE("Rng is xoshiro256** seeded by splitmix64") {
    std::uint64_t sm = 42;
    std::uint64_t s[4];
    for (auto& w : s) {
        w = splitmix64(sm);
    }
    Rng rng(42);
    for (int i = 0; i < 100; ++i) {
        REQUIRE(rng.next() == xoshiro_next(s));
    }
}

TEST_CASE("uniform uses the top 53 bits") {
    Rng a(9), b(9);
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform();
        CHECK(u == static_cast<double>(b.next() >> 11) * 0x1.0p-53);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("below stays in range and covers it") {
    Rng rng(5);
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 7000; ++i) {
        const auto v = rng.below(7);
        REQUIRE(v < 7);
        ++hits[v];
    }
    for (int h : hits) {
        CHECK(h > 800);
        CHECK(h < 1200);
    }
    CHECK(rng.below(0) == 0);
    CHECK(rng.below(1) == 0);
}

TEST_CASE("normal has unit moments") {
    Rng rng(11);
    const int n = 200000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        s += z;
        s2 += z * z;
    }
    CHECK(std::abs(s / n) < 0.01);
    CHECK(std::abs(s2 / n - 1.0) < 0.02);
}

TEST_CASE("sample_without_replacement") {
    for (auto [pop, count] : std::vector<std::pair<std::size_t, std::size_t>>{{1000, 10}, {20, 15}, {5, 5}, {3, 9}}) {
        Rng a(3), b(3);
        const auto x = a.sample_without_replacement(pop, count);
        CHECK(x == b.sample_without_replacement(pop, count));
        CHECK(x.size() == std::min(pop, count));
        std::set<std::size_t> uniq(x.begin(), x.end());
        CHECK(uniq.size() == x.size());
        CHECK(*uniq.rbegin() < pop);
    }
}

TEST_CASE("derive_seed and stable_hash") {
    CHECK(derive_seed(1, 1) != derive_seed(1, 2));
    CHECK(derive_seed(1, 1) != derive_seed(2, 1));
    CHECK(derive_seed(77, 3) == derive_seed(77, 3));
    CHECK(stable_hash("abc") == stable_hash("abc"));
    CHECK(stable_hash("abc") != stable_hash("abd"));
    CHECK(stable_hash("abc", 1) != stable_hash("abc", 2));
}
