#include "cadclust/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "cadclust/dataset.hpp"
#include "cadclust/error.hpp"

namespace cadclust {

namespace {

void check_lengths(std::span<const int> a, std::span<const int> b, std::size_t min_len) {
    if (a.size() != b.size()) {
        throw Error(ErrorKind::shape, "label vectors have lengths " + std::to_string(a.size()) + " and " +
                                          std::to_string(b.size()));
    }
    if (a.size() < min_len) {
        throw Error(ErrorKind::shape, "need at least " + std::to_string(min_len) + " labels");
    }
}

double choose2(std::size_t x) {
    const auto v = static_cast<double>(x);
    return v * (v - 1.0) / 2.0;
}

double entropy(const std::vector<std::size_t>& sums, double n) {
    double h = 0.0;
    for (std::size_t s : sums) {
        if (s > 0) {
            const double p = static_cast<double>(s) / n;
            h -= p * std::log(p);
        }
    }
    return h;
}

}  // namespace

Contingency contingency(std::span<const int> truth, std::span<const int> pred) {
    check_lengths(truth, pred, 0);
    const auto u = densify_labels(truth);
    const auto v = densify_labels(pred);
    Contingency table;
    table.rows = u.empty() ? 0 : static_cast<std::size_t>(*std::max_element(u.begin(), u.end())) + 1;
    table.cols = v.empty() ? 0 : static_cast<std::size_t>(*std::max_element(v.begin(), v.end())) + 1;
    table.counts.assign(table.rows * table.cols, 0);
    table.row_sums.assign(table.rows, 0);
    table.col_sums.assign(table.cols, 0);
    table.total = u.size();
    for (std::size_t i = 0; i < u.size(); ++i) {
        const auto r = static_cast<std::size_t>(u[i]);
        const auto c = static_cast<std::size_t>(v[i]);
        ++table.counts[r * table.cols + c];
        ++table.row_sums[r];
        ++table.col_sums[c];
    }
    return table;
}

bool same_partition(std::span<const int> a, std::span<const int> b) {
    return a.size() == b.size() && densify_labels(a) == densify_labels(b);
}

double nmi(std::span<const int> truth, std::span<const int> pred) {
    check_lengths(truth, pred, 1);
    const Contingency table = contingency(truth, pred);
    const auto n = static_cast<double>(table.total);
    const double hu = entropy(table.row_sums, n);
    const double hv = entropy(table.col_sums, n);
    if (hu == 0.0 || hv == 0.0) {
        return same_partition(truth, pred) ? 1.0 : 0.0;
    }
    double mi = 0.0;
    for (std::size_t i = 0; i < table.rows; ++i) {
        for (std::size_t j = 0; j < table.cols; ++j) {
            const std::size_t nij = table.at(i, j);
            if (nij == 0) {
                continue;
            }
            const double pij = static_cast<double>(nij) / n;
            mi += pij * std::log(n * static_cast<double>(nij) /
                                 (static_cast<double>(table.row_sums[i]) * static_cast<double>(table.col_sums[j])));
        }
    }
    return std::clamp(mi / std::sqrt(hu * hv), 0.0, 1.0);
}

double ari(std::span<const int> truth, std::span<const int> pred) {
    check_lengths(truth, pred, 2);
    const Contingency table = contingency(truth, pred);
    double index = 0.0;
    for (std::size_t nij : table.counts) {
        index += choose2(nij);
    }
    double sum_a = 0.0;
    for (std::size_t a : table.row_sums) {
        sum_a += choose2(a);
    }
    double sum_b = 0.0;
    for (std::size_t b : table.col_sums) {
        sum_b += choose2(b);
    }
    const double expected = sum_a * sum_b / choose2(table.total);
    const double max_index = 0.5 * (sum_a + sum_b);
    const double denom = max_index - expected;
    if (denom == 0.0) {
        return same_partition(truth, pred) ? 1.0 : 0.0;
    }
    return (index - expected) / denom;
}

}  // namespace cadclust
