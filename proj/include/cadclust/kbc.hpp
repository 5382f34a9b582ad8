#ifndef CADCLUST_KBC_HPP
#define CADCLUST_KBC_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cadclust/clustering_result.hpp"
#include "cadclust/dataset.hpp"
#include "cadclust/distributional_kernel.hpp"
#include "cadclust/isolation_kernel.hpp"

namespace cadclust::kbc {

inline constexpr std::size_t default_sample_cap = 512;

/**
 * Seeding step: links every pair of sample points whose kappa exceeds `tau`
 * and returns the k largest connected components (dataset row indices,
 * ascending). Equal-size components are ordered by their smallest member.
 *
 * Throws Error(tau_too_small) when fewer than k components exist.
 */
std::vector<std::vector<std::size_t>> init_clusters(const Embedding& emb,
                                                    std::span<const std::size_t> sample, int k,
                                                    double tau);

/// Labels every point with argmax_j K(delta(x), P_j); ties go to the lowest j.
/// Throws Error(degenerate_assignment) naming the first cluster left empty.
Partition assign(const Embedding& emb, std::span<const MeanMap> maps);
Partition assign(const Embedding& emb, const std::vector<std::vector<std::size_t>>& groups);

struct RefineOutcome {
    Partition labels;
    int accepted_iters = 0;
    std::vector<double> objective_trace;
    bool stopped_on_empty = false;
};

/// Alternates mean-map recomputation and argmax reassignment, keeping a pass
/// only if it raises the objective by more than 1e-12.
RefineOutcome refine(const Embedding& emb, const Partition& part, int max_iters);

/// Full pipeline: isolation model, sample, seeding, assignment, refinement.
ClusteringResult fit(const Dataset& data, const KbcParams& params);

struct TuneFailure {
    std::size_t psi;
    double tau;
    std::string reason;
};

struct TuneOutcome {
    /// Selected parameters, with seed set to the first replicate seed.
    KbcParams best;
    /// One result per replicate seed, in the order given.
    std::vector<ClusteringResult> results;
    /// Mean over replicates of objective / (n K(P_D, P_D)) under each replicate's model.
    double score = 0.0;
    std::vector<TuneFailure> failures;
};

/**
 * Unsupervised grid search over (psi, tau). Every combination is fitted once
 * per replicate seed (just fixed.seed when none are given) and scored by its
 * objective relative to the one-cluster objective, averaged over replicates.
 * A combination fails if any replicate fails. Ties go to the smaller psi, then
 * the smaller tau. Never reads labels.
 */
TuneOutcome tune(const Dataset& data, std::span<const std::size_t> psi_grid,
                 std::span<const double> tau_grid, const KbcParams& fixed,
                 std::span<const std::uint64_t> replicate_seeds = {});

}  // namespace cadclust::kbc

#endif  // CADCLUST_KBC_HPP
