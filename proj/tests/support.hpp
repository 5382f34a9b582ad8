#ifndef CADCLUST_TESTS_SUPPORT_HPP
#define CADCLUST_TESTS_SUPPORT_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "cadclust/dataset.hpp"
#include "cadclust/isolation_kernel.hpp"
#include "cadclust/rng.hpp"

namespace testsupport {

using cadclust::Dataset;
using cadclust::IsolationModel;
using cadclust::Rng;

// Nearest anchor by a plain distance scan over the model's anchor table.
inline std::size_t nearest_anchor(const IsolationModel& m, std::size_t p, std::span<const double> x) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < m.psi(); ++a) {
        const auto anchor = m.anchor(p, a);
        double d = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            d += (x[j] - anchor[j]) * (x[j] - anchor[j]);
        }
        if (d < best_d) {
            best_d = d;
            best = a;
        }
    }
    return best;
}

inline double kappa_oracle(const IsolationModel& m, std::span<const double> x, std::span<const double> y) {
    std::size_t same = 0;
    for (std::size_t p = 0; p < m.partitions(); ++p) {
        same += nearest_anchor(m, p, x) == nearest_anchor(m, p, y);
    }
    return static_cast<double>(same) / static_cast<double>(m.partitions());
}

// sum over x in X, y in Y of kappa(x, y)
inline double weight_oracle(const IsolationModel& m, const Dataset& X, const Dataset& Y) {
    double s = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        for (std::size_t j = 0; j < Y.size(); ++j) {
            s += kappa_oracle(m, X.row(i), Y.row(j));
        }
    }
    return s;
}

inline double kdist_oracle(const IsolationModel& m, const Dataset& X, const Dataset& Y) {
    return weight_oracle(m, X, Y) / static_cast<double>(X.size() * Y.size());
}

inline Dataset pick(const Dataset& data, const std::vector<std::size_t>& rows) {
    std::vector<double> pts;
    for (auto i : rows) {
        const auto r = data.row(i);
        pts.insert(pts.end(), r.begin(), r.end());
    }
    return Dataset("pick", data.dim(), std::move(pts));
}

// Objective as sum over points of the mean kappa to their own cluster.
inline double objective_oracle(const IsolationModel& m, const Dataset& data, const std::vector<int>& labels) {
    double total = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        double s = 0.0;
        std::size_t size = 0;
        for (std::size_t j = 0; j < data.size(); ++j) {
            if (labels[j] == labels[i]) {
                s += kappa_oracle(m, data.row(i), data.row(j));
                ++size;
            }
        }
        total += s / static_cast<double>(size);
    }
    return total;
}

// NMI from explicit joint and marginal probability tables, natural log,
// geometric-mean normalization.
inline double nmi_oracle(const std::vector<int>& u, const std::vector<int>& v) {
    const double n = static_cast<double>(u.size());
    std::map<std::pair<int, int>, int> cj;
    std::map<int, int> cu, cv;
    for (std::size_t i = 0; i < u.size(); ++i) {
        ++cj[{u[i], v[i]}];
        ++cu[u[i]];
        ++cv[v[i]];
    }
    if (cu.size() == 1 || cv.size() == 1) {
        return cu.size() == cv.size() ? 1.0 : 0.0;
    }
    double hu = 0.0, hv = 0.0, mi = 0.0;
    for (auto [_, c] : cu) hu -= c / n * std::log(c / n);
    for (auto [_, c] : cv) hv -= c / n * std::log(c / n);
    for (auto [key, c] : cj) {
        const double pu = cu[key.first] / n;
        const double pv = cv[key.second] / n;
        mi += c / n * std::log(c / n / (pu * pv));
    }
    return mi / std::sqrt(hu * hv);
}

// ARI by explicit pair counting over all i < j.
inline double ari_oracle(const std::vector<int>& u, const std::vector<int>& v) {
    double both = 0.0, in_u = 0.0, in_v = 0.0, pairs = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        for (std::size_t j = i + 1; j < u.size(); ++j) {
            const bool su = u[i] == u[j];
            const bool sv = v[i] == v[j];
            both += su && sv;
            in_u += su;
            in_v += sv;
            pairs += 1.0;
        }
    }
    const double expected = in_u * in_v / pairs;
    const double max_index = 0.5 * (in_u + in_v);
    if (max_index == expected) {
        bool same = true;
        for (std::size_t i = 0; i < u.size() && same; ++i) {
            for (std::size_t j = i + 1; j < u.size(); ++j) {
                if ((u[i] == u[j]) != (v[i] == v[j])) {
                    same = false;
                    break;
                }
            }
        }
        return same ? 1.0 : 0.0;
    }
    return (both - expected) / (max_index - expected);
}

inline Dataset random_points(Rng& rng, std::size_t n, std::size_t d, double scale = 1.0) {
    std::vector<double> pts(n * d);
    for (auto& v : pts) {
        v = scale * rng.normal();
    }
    return Dataset("random", d, std::move(pts));
}

// Labels in [0, k) with every id used; requires n >= k.
inline std::vector<int> random_labels(Rng& rng, std::size_t n, int k) {
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = i < static_cast<std::size_t>(k) ? static_cast<int>(i) : static_cast<int>(rng.below(k));
    }
    for (std::size_t i = n; i > 1; --i) {
        std::swap(labels[i - 1], labels[rng.below(i)]);
    }
    return labels;
}

inline std::vector<int> random_raw_labels(Rng& rng, std::size_t n, int max_k) {
    std::vector<int> labels(n);
    for (auto& l : labels) {
        l = static_cast<int>(rng.below(max_k));
    }
    return labels;
}

// t = 2: partition 0 anchors (0,0),(10,10); partition 1 anchors (0,10),(10,0).
inline IsolationModel hand_model() {
    return IsolationModel(2, 2, 2, {0, 0, 10, 10, 0, 10, 10, 0});
}

// psi = 3, t = 10 on the line. For points 0, 1, 10, 11:
// kappa(0,1) = 0.8, kappa(10,11) = 0.9, every cross pair 0.1.
inline IsolationModel line_model() {
    std::vector<double> anchors = {0.5, 100, 200, 0, 1, 10, 0, 1, 10, 0, 10, 11};
    for (int i = 0; i < 6; ++i) {
        anchors.insert(anchors.end(), {0, 10, 50});
    }
    return IsolationModel(3, 10, 1, std::move(anchors));
}

inline Dataset line_points() { return Dataset("line", 1, {0, 1, 10, 11}); }

// All set partitions of n items into exactly k blocks, as restricted growth strings.
inline std::vector<std::vector<int>> set_partitions(std::size_t n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> a(n, 0);
    auto rec = [&](auto&& self, std::size_t i, int used) -> void {
        if (i == n) {
            if (used == k) {
                out.push_back(a);
            }
            return;
        }
        for (int c = 0; c <= used && c < k; ++c) {
            a[i] = c;
            self(self, i + 1, std::max(used, c + 1));
        }
    };
    if (n > 0) {
        rec(rec, 0, 0);
    }
    return out;
}

}  // namespace testsupport

#endif  // CADCLUST_TESTS_SUPPORT_HPP
