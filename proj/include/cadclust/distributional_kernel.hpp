#ifndef CADCLUST_DISTRIBUTIONAL_KERNEL_HPP
#define CADCLUST_DISTRIBUTIONAL_KERNEL_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cadclust/dataset.hpp"
#include "cadclust/isolation_kernel.hpp"

namespace cadclust {

/// Cell ids of every row of a dataset under one model, laid out [row][partition].
class Embedding {
public:
    Embedding(const IsolationModel& model, const Dataset& data);

    std::size_t size() const { return n_; }
    std::size_t partitions() const { return t_; }
    std::size_t psi() const { return psi_; }

    std::span<const std::uint32_t> cells(std::size_t i) const { return {cells_.data() + i * t_, t_}; }

private:
    std::size_t n_;
    std::size_t t_;
    std::size_t psi_;
    std::vector<std::uint32_t> cells_;
};

/**
 * Kernel mean embedding of a point set: the average of its members' feature
 * vectors. Stored as per-cell member counts; the real-valued weights are
 * count / (|C| * sqrt(t)).
 */
class MeanMap {
public:
    MeanMap(std::size_t t, std::size_t psi);

    void add(std::span<const std::uint32_t> cells);

    std::size_t member_count() const { return members_; }
    std::size_t partitions() const { return t_; }
    std::size_t psi() const { return psi_; }
    std::span<const std::uint32_t> counts() const { return counts_; }

    /// Dense weights, length t * psi.
    std::vector<double> weights() const;

    /// <phi_hat, phi_hat>, in (0, 1].
    double self_similarity() const;

private:
    std::size_t t_;
    std::size_t psi_;
    std::size_t members_ = 0;
    std::vector<std::uint32_t> counts_;
};

/// Cluster assignment of n points into k clusters, every cluster non-empty.
class Partition {
public:
    Partition() = default;
    /// Throws empty_cluster if some id in [0, k) has no member, shape if an id is out of range.
    Partition(std::vector<int> labels, int k);
    /// k inferred as max label + 1.
    explicit Partition(std::vector<int> labels);

    int k() const { return k_; }
    std::size_t size() const { return labels_.size(); }
    const std::vector<int>& labels() const { return labels_; }
    int operator[](std::size_t i) const { return labels_[i]; }

    /// Member indices of each cluster in ascending order.
    std::vector<std::vector<std::size_t>> members() const;

    bool operator==(const Partition&) const = default;

private:
    std::vector<int> labels_;
    int k_ = 0;
};

MeanMap mean_map(const Embedding& emb, std::span<const std::size_t> members);
MeanMap mean_map(const IsolationModel& model, const Dataset& points);

/// K(P_X, P_Y) = <phi_hat(P_X), phi_hat(P_Y)>.
double k_dist(const MeanMap& x, const MeanMap& y);

/// K(delta(x), P) = <phi(x), phi_hat(P)>.
double point_to_dist(std::span<const std::uint32_t> cells, const MeanMap& mm);
double point_to_dist(const IsolationModel& model, std::span<const double> x, const MeanMap& mm);

struct ObjectiveForms {
    /// sum_C sum_{x in C} K(delta(x), P_C)
    double pointwise = 0.0;
    /// sum_C |C| * K(P_C, P_C)
    double self_similarity = 0.0;
};

ObjectiveForms objective_forms(const Embedding& emb, const Partition& part);

/// Clustering objective in its pointwise form.
double objective(const IsolationModel& model, const Dataset& data, const Partition& part);
double objective(const Embedding& emb, const Partition& part);

/// W(X, Y) = |X| |Y| K(P_X, P_Y).
double total_weight(const IsolationModel& model, const Dataset& x, const Dataset& y);

struct CutDecomposition {
    double within_sum = 0.0;  ///< sum_k W(C_k, C_k), diagonal terms included
    double cut_sum = 0.0;     ///< sum_k W(C_k, complement of C_k)
    double total = 0.0;       ///< W(X, X)
};

CutDecomposition cut_association_decompose(const IsolationModel& model, const Dataset& data,
                                           const Partition& part);

}  // namespace cadclust

#endif  // CADCLUST_DISTRIBUTIONAL_KERNEL_HPP
