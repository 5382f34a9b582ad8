#ifndef CADCLUST_METRICS_HPP
#define CADCLUST_METRICS_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace cadclust {

/// Contingency table between two labelings; rows index `truth` ids, columns `pred` ids
/// (both densified in first-appearance order).
struct Contingency {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::size_t> counts;  // rows * cols, row-major
    std::vector<std::size_t> row_sums;
    std::vector<std::size_t> col_sums;
    std::size_t total = 0;

    std::size_t at(std::size_t i, std::size_t j) const { return counts[i * cols + j]; }
};

Contingency contingency(std::span<const int> truth, std::span<const int> pred);

/// True when the two labelings coincide up to a bijective relabeling.
bool same_partition(std::span<const int> a, std::span<const int> b);

/// Normalized mutual information, I(U;V) / sqrt(H(U) H(V)), natural logs.
double nmi(std::span<const int> truth, std::span<const int> pred);

/// Hubert-Arabie adjusted Rand index.
double ari(std::span<const int> truth, std::span<const int> pred);

}  // namespace cadclust

#endif  // CADCLUST_METRICS_HPP
