#include "doctest.h"

#include "cadclust/error.hpp"
#include "cadclust/kmeans.hpp"
#include "cadclust/metrics.hpp"
#include "support.hpp"

using namespace cadclust;
using namespace testsupport;

TEST_CASE("k = 1 gives the mean") {
    Rng rng(1);
    const auto d = random_points(rng, 50, 3);
    KmeansParams p;
    p.k = 1;
    const auto r = kmeans_fit(d, p);
    double sse = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) mean += d.row(i)[j];
        mean /= static_cast<double>(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) sse += (d.row(i)[j] - mean) * (d.row(i)[j] - mean);
    }
    CHECK(-r.objective == doctest::Approx(sse).epsilon(1e-12));
    CHECK(r.labels.labels() == std::vector<int>(50, 0));
}

TEST_CASE("two points, two clusters") {
    const Dataset d("d", 2, {0, 0, 10, 10});
    KmeansParams p;
    p.k = 2;
    const auto r = kmeans_fit(d, p);
    CHECK(r.objective == 0.0);
    CHECK(r.labels[0] != r.labels[1]);
    CHECK(within_cluster_sse(d, r.labels) == 0.0);
}

TEST_CASE("parameter errors") {
    const Dataset d("d", 1, {0, 1, 2});
    KmeansParams p;
    p.k = 4;
    try {
        kmeans_fit(d, p);
        FAIL("expected invalid spec");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::invalid_spec);
    }
    p.k = 2;
    p.n_init = 0;
    CHECK_THROWS_AS(kmeans_fit(d, p), Error);
}

TEST_CASE("sse never increases within the kept restart") {
    Rng rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        const auto d = random_points(rng, 200, 2);
        KmeansParams p;
        p.k = 5;
        p.seed = rng.next();
        const auto r = kmeans_fit(d, p);
        for (std::size_t i = 1; i < r.objective_trace.size(); ++i) {
            CHECK(r.objective_trace[i] >= r.objective_trace[i - 1] - 1e-9);
        }
        CHECK(r.objective == doctest::Approx(-within_cluster_sse(d, r.labels)).epsilon(1e-12));
        CHECK(r.objective == kmeans_fit(d, p).objective);
    }
}

TEST_CASE("row order does not change the clustering") {
    const std::vector<BlobSpec> specs = {{{0, 0}, 1, 60}, {{10, 0}, 1, 60}, {{0, 10}, 1, 60}};
    const auto d = gen_blobs(specs, 3);
    Rng rng(4);
    std::vector<std::size_t> perm(d.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    const auto shuffled = d.subset(perm);
    KmeansParams p;
    p.k = 3;
    p.seed = 5;
    const auto a = kmeans_fit(d, p);
    const auto b = kmeans_fit(shuffled, p);
    std::vector<int> b_in_original(d.size());
    for (std::size_t i = 0; i < perm.size(); ++i) b_in_original[perm[i]] = b.labels[i];
    CHECK(ari(a.labels.labels(), b_in_original) == 1.0);
}

TEST_CASE("k-means on two crescents stays in the reported range") {
    const auto d = gen_two_crescents(1200, 0.08, 7);
    double total = 0.0;
    for (int r = 0; r < 10; ++r) {
        KmeansParams p;
        p.seed = 1000 + r;
        total += nmi(d.labels(), kmeans_fit(d, p).labels.labels());
    }
    const double mean = total / 10.0;
    CHECK(mean >= 0.25);
    CHECK(mean <= 0.60);
}
