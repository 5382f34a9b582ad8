#ifndef CADCLUST_ISOLATION_KERNEL_HPP
#define CADCLUST_ISOLATION_KERNEL_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cadclust/dataset.hpp"

namespace cadclust {

/**
 * Sparse Isolation Kernel embedding of one point: for every partition p,
 * `cells[p]` is the index of the nearest anchor. The implied dense vector has
 * length t * psi with value 1/sqrt(t) at p * psi + cells[p] and zero elsewhere.
 */
struct FeatureVector {
    std::vector<std::uint32_t> cells;

    std::size_t partitions() const { return cells.size(); }

    /// Dense form, length t * psi.
    std::vector<double> to_dense(std::size_t psi) const;

    bool operator==(const FeatureVector&) const = default;
};

/// Fraction of partitions in which the two embeddings share a cell.
double inner_product(const FeatureVector& a, const FeatureVector& b);

/**
 * t independent Voronoi partitions of psi anchors each.
 *
 * kappa(x, y) is the fraction of partitions in which x and y have the same
 * nearest anchor. The model is immutable once built.
 */
class IsolationModel {
public:
    IsolationModel() = default;

    /// Builds a model from explicit anchors laid out as [partition][anchor][dim].
    /// Anchors within a partition must be distinct.
    IsolationModel(std::size_t psi, std::size_t t, std::size_t d, std::vector<double> anchors,
                   std::uint64_t seed = 0);

    /// Draws t anchor sets of psi rows each, uniformly without replacement from `data`.
    static IsolationModel fit(const Dataset& data, std::size_t psi, std::size_t t, std::uint64_t seed);

    std::size_t psi() const { return psi_; }
    std::size_t partitions() const { return t_; }
    std::size_t dim() const { return d_; }
    std::uint64_t seed() const { return seed_; }
    std::size_t feature_dim() const { return t_ * psi_; }

    std::span<const double> anchor(std::size_t partition, std::size_t index) const {
        return {anchors_.data() + (partition * psi_ + index) * d_, d_};
    }
    const std::vector<double>& anchors() const { return anchors_; }

    /// Nearest anchor per partition; ties go to the lowest anchor index.
    FeatureVector transform(std::span<const double> x) const;

    /// Cell ids for every row of `data`, laid out [row][partition].
    std::vector<std::uint32_t> transform_all(const Dataset& data) const;

    double kappa(std::span<const double> x, std::span<const double> y) const;

    /// Versioned JSON document {format, version, psi, t, d, seed, anchors}.
    std::string to_json() const;
    static IsolationModel from_json(const std::string& text);

    bool operator==(const IsolationModel&) const = default;

private:
    void check_dim(std::span<const double> x) const;
    std::uint32_t nearest(std::size_t partition, std::span<const double> x) const;

    std::size_t psi_ = 0;
    std::size_t t_ = 0;
    std::size_t d_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<double> anchors_;
};

}  // namespace cadclust

#endif  // CADCLUST_ISOLATION_KERNEL_HPP
