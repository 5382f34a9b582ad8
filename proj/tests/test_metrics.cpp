#include "doctest.h"

#include "cadclust/error.hpp"
#include "cadclust/metrics.hpp"
#include "support.hpp"

using namespace cadclust;
using namespace testsupport;

using L = std::vector<int>;

TEST_CASE("hand cases") {
    CHECK(nmi(L{0, 0, 1, 1}, L{0, 1, 0, 1}) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(nmi(L{0, 0, 1, 1}, L{1, 1, 0, 0}) == 1.0);
    CHECK(nmi(L{0, 1, 2, 0}, L{0, 1, 2, 0}) == 1.0);
    CHECK(ari(L{0, 0, 1, 1}, L{1, 1, 0, 0}) == 1.0);
    CHECK(ari(L{0, 0, 1, 1}, L{0, 1, 1, 1}) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(ari(L{2, 2, 5, 7}, L{2, 2, 5, 7}) == 1.0);
}

TEST_CASE("degenerate conventions") {
    CHECK(nmi(L{0, 0, 0}, L{1, 1, 1}) == 1.0);
    CHECK(nmi(L{0, 0, 0}, L{0, 1, 1}) == 0.0);
    CHECK(nmi(L{4}, L{2}) == 1.0);
    CHECK(ari(L{0, 0}, L{1, 1}) == 1.0);
    CHECK(ari(L{0, 1}, L{0, 1}) == 1.0);
    CHECK(ari(L{0, 1, 2}, L{0, 0, 0}) == 0.0);
}

TEST_CASE("shape errors") {
    CHECK_THROWS_AS(nmi(L{0, 1}, L{0}), Error);
    CHECK_THROWS_AS(nmi(L{}, L{}), Error);
    CHECK_THROWS_AS(ari(L{0}, L{0}), Error);
    CHECK_THROWS_AS(ari(L{0, 1}, L{0, 1, 1}), Error);
}

TEST_CASE("contingency") {
    const auto c = contingency(L{0, 0, 1, 1, 1}, L{5, 3, 3, 3, 5});
    CHECK(c.rows == 2);
    CHECK(c.cols == 2);
    CHECK(c.total == 5);
    std::size_t sum = 0;
    for (auto v : c.counts) sum += v;
    CHECK(sum == 5);
    CHECK(c.row_sums == std::vector<std::size_t>{2, 3});
    CHECK(same_partition(L{0, 0, 1}, L{7, 7, 2}));
    CHECK_FALSE(same_partition(L{0, 0, 1}, L{7, 2, 2}));
}

TEST_CASE("match the from-definition oracles") {
    Rng rng(1);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + rng.below(9);
        const auto u = random_raw_labels(rng, n, 1 + static_cast<int>(rng.below(5)));
        const auto v = random_raw_labels(rng, n, 1 + static_cast<int>(rng.below(5)));
        CHECK(std::abs(nmi(u, v) - nmi_oracle(u, v)) <= 1e-12);
        CHECK(std::abs(ari(u, v) - ari_oracle(u, v)) <= 1e-12);
    }
}

TEST_CASE("symmetry, relabeling and bounds") {
    Rng rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.below(40);
        const auto u = random_raw_labels(rng, n, 4);
        const auto v = random_raw_labels(rng, n, 6);
        auto w = v;
        for (auto& l : w) l = 10 - 3 * l;
        CHECK(nmi(u, v) == doctest::Approx(nmi(v, u)).epsilon(1e-12));
        CHECK(ari(u, v) == doctest::Approx(ari(v, u)).epsilon(1e-12));
        CHECK(nmi(u, w) == doctest::Approx(nmi(u, v)).epsilon(1e-12));
        CHECK(ari(u, w) == doctest::Approx(ari(u, v)).epsilon(1e-12));
        CHECK(nmi(u, v) >= 0.0);
        CHECK(nmi(u, v) <= 1.0);
        CHECK(ari(u, v) <= 1.0);
        CHECK(nmi(u, u) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(ari(u, u) == 1.0);
    }
}

TEST_CASE("ari of a random relabeling averages to zero") {
    Rng rng(3);
    const auto u = random_raw_labels(rng, 200, 4);
    double sum = 0.0;
    for (int s = 0; s < 1000; ++s) {
        auto v = u;
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
        sum += ari(u, v);
    }
    CHECK(std::abs(sum / 1000.0) < 0.05);
}
