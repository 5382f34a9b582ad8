#ifndef CADCLUST_CLUSTERING_RESULT_HPP
#define CADCLUST_CLUSTERING_RESULT_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "cadclust/distributional_kernel.hpp"

namespace cadclust {

struct KbcParams {
    int k = 2;
    /// Sample size for seeding; 0 selects min(n, 512).
    std::size_t s = 0;
    double tau = 0.5;
    std::size_t psi = 16;
    std::size_t t = 200;
    int max_refine_iters = 100;
    std::uint64_t seed = 0;

    bool operator==(const KbcParams&) const = default;
};

struct KmeansParams {
    int k = 2;
    int n_init = 10;
    int max_iters = 300;
    double tol = 1e-6;
    std::uint64_t seed = 0;

    bool operator==(const KmeansParams&) const = default;
};

using MethodParams = std::variant<KbcParams, KmeansParams>;

struct ClusteringResult {
    Partition labels;
    /// Higher is better: the distributional objective for KBC, negative SSE for k-means.
    double objective = 0.0;
    MethodParams params;
    std::uint64_t seed = 0;
    /// Accepted refinement passes (KBC) or Lloyd iterations of the kept restart (k-means).
    int n_refine_iters = 0;
    /// KBC seed groups as dataset row indices; empty for k-means.
    std::vector<std::vector<std::size_t>> seed_groups;
    /// Objective after assignment followed by the value after each accepted pass.
    std::vector<double> objective_trace;
    /// Set when refinement stopped because a pass would have emptied a cluster.
    bool refine_stopped_on_empty = false;
};

std::string method_name(const MethodParams& params);

void to_json(nlohmann::json& j, const KbcParams& p);
void from_json(const nlohmann::json& j, KbcParams& p);
void to_json(nlohmann::json& j, const KmeansParams& p);
void from_json(const nlohmann::json& j, KmeansParams& p);
nlohmann::json params_to_json(const MethodParams& params);

/// {method, labels, k, objective, params, seed, n_refine_iters, objective_trace, ...}
nlohmann::json result_to_json(const ClusteringResult& result);

/// Reads the `labels` array of a result document (or a bare array of ints).
std::vector<int> labels_from_json(const nlohmann::json& j);

}  // namespace cadclust

#endif  // CADCLUST_CLUSTERING_RESULT_HPP
