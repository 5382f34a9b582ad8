#include "cadclust/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "cadclust/error.hpp"
#include "cadclust/rng.hpp"

namespace cadclust {

namespace {

double sq_dist(std::span<const double> a, const double* b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double diff = a[j] - b[j];
        s += diff * diff;
    }
    return s;
}

std::vector<double> cluster_means(const Dataset& data, const std::vector<int>& labels, std::size_t k) {
    const std::size_t d = data.dim();
    std::vector<double> sums(k * d, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto c = static_cast<std::size_t>(labels[i]);
        const auto r = data.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            sums[c * d + j] += r[j];
        }
        ++counts[c];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] == 0) {
            continue;
        }
        for (std::size_t j = 0; j < d; ++j) {
            sums[c * d + j] /= static_cast<double>(counts[c]);
        }
    }
    return sums;
}

std::vector<double> kmeanspp(const Dataset& data, std::size_t k, Rng& rng) {
    const std::size_t n = data.size();
    const std::size_t d = data.dim();
    std::vector<double> centers;
    centers.reserve(k * d);
    auto push = [&](std::size_t i) {
        const auto r = data.row(i);
        centers.insert(centers.end(), r.begin(), r.end());
    };
    push(static_cast<std::size_t>(rng.below(n)));
    std::vector<double> closest(n);
    for (std::size_t i = 0; i < n; ++i) {
        closest[i] = sq_dist(data.row(i), centers.data());
    }
    for (std::size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (double v : closest) {
            total += v;
        }
        std::size_t pick = n - 1;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += closest[i];
                if (acc > target) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = static_cast<std::size_t>(rng.below(n));
        }
        push(pick);
        const double* center = centers.data() + c * d;
        for (std::size_t i = 0; i < n; ++i) {
            closest[i] = std::min(closest[i], sq_dist(data.row(i), center));
        }
    }
    return centers;
}

/// Nearest centroid per point, lowest index on ties.
std::vector<int> nearest_centroids(const Dataset& data, const std::vector<double>& centers, std::size_t k) {
    const std::size_t d = data.dim();
    std::vector<int> labels(data.size(), 0);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto r = data.row(i);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c) {
            const double dist = sq_dist(r, centers.data() + c * d);
            if (dist < best) {
                best = dist;
                labels[i] = static_cast<int>(c);
            }
        }
    }
    return labels;
}

/// Moves, for every empty cluster, the point farthest from its own centroid into it
/// and recentres the empty cluster on that point.
void repair_empty(const Dataset& data, std::vector<int>& labels, std::vector<double>& centers, std::size_t k) {
    const std::size_t d = data.dim();
    std::vector<std::size_t> sizes(k, 0);
    for (int l : labels) {
        ++sizes[static_cast<std::size_t>(l)];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (sizes[c] != 0) {
            continue;
        }
        std::size_t far = 0;
        double far_dist = -1.0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            const auto own = static_cast<std::size_t>(labels[i]);
            if (sizes[own] < 2) {
                continue;
            }
            const double dist = sq_dist(data.row(i), centers.data() + own * d);
            if (dist > far_dist) {
                far_dist = dist;
                far = i;
            }
        }
        --sizes[static_cast<std::size_t>(labels[far])];
        labels[far] = static_cast<int>(c);
        ++sizes[c];
        const auto r = data.row(far);
        std::copy(r.begin(), r.end(), centers.begin() + static_cast<std::ptrdiff_t>(c * d));
    }
}

struct Restart {
    std::vector<int> labels;
    double sse = 0.0;
    int iters = 0;
    std::vector<double> trace;
};

Restart lloyd(const Dataset& data, const KmeansParams& params, std::uint64_t seed) {
    const auto k = static_cast<std::size_t>(params.k);
    const std::size_t d = data.dim();
    Rng rng(seed);
    std::vector<double> centers = kmeanspp(data, k, rng);

    Restart out;
    for (int iter = 0; iter < params.max_iters; ++iter) {
        out.labels = nearest_centroids(data, centers, k);
        repair_empty(data, out.labels, centers, k);
        std::vector<double> next = cluster_means(data, out.labels, k);
        out.trace.push_back(-within_cluster_sse(data, Partition(out.labels, params.k)));
        ++out.iters;
        double shift = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            shift = std::max(shift, std::sqrt(sq_dist({next.data() + c * d, d}, centers.data() + c * d)));
        }
        centers = std::move(next);
        if (shift < params.tol) {
            break;
        }
    }
    out.labels = nearest_centroids(data, centers, k);
    repair_empty(data, out.labels, centers, k);
    out.sse = within_cluster_sse(data, Partition(out.labels, params.k));
    return out;
}

}  // namespace

double within_cluster_sse(const Dataset& data, const Partition& part) {
    if (part.size() != data.size()) {
        throw Error(ErrorKind::shape, "partition size does not match the dataset");
    }
    const auto k = static_cast<std::size_t>(part.k());
    const std::vector<double> means = cluster_means(data, part.labels(), k);
    double sse = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        sse += sq_dist(data.row(i), means.data() + static_cast<std::size_t>(part[i]) * data.dim());
    }
    return sse;
}

ClusteringResult kmeans_fit(const Dataset& data, const KmeansParams& params) {
    if (params.k < 1) {
        throw Error(ErrorKind::invalid_spec, "k-means needs k >= 1");
    }
    if (static_cast<std::size_t>(params.k) > data.size()) {
        throw Error(ErrorKind::invalid_spec,
                    "k=" + std::to_string(params.k) + " exceeds n=" + std::to_string(data.size()));
    }
    if (params.n_init < 1 || params.max_iters < 1 || !(params.tol >= 0.0)) {
        throw Error(ErrorKind::invalid_spec, "k-means needs n_init >= 1, max_iters >= 1, tol >= 0");
    }
    std::optional<Restart> best;
    for (int r = 0; r < params.n_init; ++r) {
        Restart run = lloyd(data, params, derive_seed(params.seed, static_cast<std::uint64_t>(r)));
        if (!best || run.sse < best->sse) {
            best = std::move(run);
        }
    }
    ClusteringResult result;
    result.labels = Partition(std::move(best->labels), params.k);
    result.objective = -best->sse;
    result.params = params;
    result.seed = params.seed;
    result.n_refine_iters = best->iters;
    result.objective_trace = std::move(best->trace);
    return result;
}

}  // namespace cadclust
