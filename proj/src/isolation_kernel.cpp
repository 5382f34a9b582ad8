#include "cadclust/isolation_kernel.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "cadclust/error.hpp"
#include "cadclust/rng.hpp"

namespace cadclust {

namespace {

std::uint64_t hash_row(std::span<const double> r) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (double v : r) {
        const double canonical = v + 0.0;  // folds -0.0 into +0.0
        std::uint64_t bits = 0;
        std::memcpy(&bits, &canonical, sizeof(bits));
        h = (h ^ bits) * 0x100000001B3ULL;
    }
    return splitmix64(h);
}

bool rows_equal(std::span<const double> a, std::span<const double> b) {
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j] != b[j]) {
            return false;
        }
    }
    return true;
}

std::size_t count_distinct_rows(const Dataset& data, std::size_t stop_at) {
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
    std::size_t distinct = 0;
    for (std::size_t i = 0; i < data.size() && distinct < stop_at; ++i) {
        auto& bucket = buckets[hash_row(data.row(i))];
        bool dup = false;
        for (std::size_t j : bucket) {
            if (rows_equal(data.row(i), data.row(j))) {
                dup = true;
                break;
            }
        }
        if (!dup) {
            bucket.push_back(i);
            ++distinct;
        }
    }
    return distinct;
}

}  // namespace

std::vector<double> FeatureVector::to_dense(std::size_t psi) const {
    std::vector<double> out(cells.size() * psi, 0.0);
    const double value = 1.0 / std::sqrt(static_cast<double>(cells.size()));
    for (std::size_t p = 0; p < cells.size(); ++p) {
        out[p * psi + cells[p]] = value;
    }
    return out;
}

double inner_product(const FeatureVector& a, const FeatureVector& b) {
    if (a.cells.size() != b.cells.size()) {
        throw Error(ErrorKind::shape, "feature vectors have different partition counts");
    }
    std::size_t same = 0;
    for (std::size_t p = 0; p < a.cells.size(); ++p) {
        same += a.cells[p] == b.cells[p] ? 1 : 0;
    }
    return static_cast<double>(same) / static_cast<double>(a.cells.size());
}

IsolationModel::IsolationModel(std::size_t psi, std::size_t t, std::size_t d, std::vector<double> anchors,
                               std::uint64_t seed)
    : psi_(psi), t_(t), d_(d), seed_(seed), anchors_(std::move(anchors)) {
    if (psi_ < 1 || t_ < 1 || d_ < 1) {
        throw Error(ErrorKind::invalid_spec, "isolation model needs psi, t, d >= 1");
    }
    if (anchors_.size() != psi_ * t_ * d_) {
        throw Error(ErrorKind::shape, "anchor buffer has " + std::to_string(anchors_.size()) + " values, expected " +
                                          std::to_string(psi_ * t_ * d_));
    }
    for (std::size_t p = 0; p < t_; ++p) {
        for (std::size_t a = 0; a < psi_; ++a) {
            for (std::size_t b = a + 1; b < psi_; ++b) {
                if (rows_equal(anchor(p, a), anchor(p, b))) {
                    throw Error(ErrorKind::degenerate_data, "partition " + std::to_string(p) +
                                                                " has duplicate anchors " + std::to_string(a) +
                                                                " and " + std::to_string(b));
                }
            }
        }
    }
}

IsolationModel IsolationModel::fit(const Dataset& data, std::size_t psi, std::size_t t, std::uint64_t seed) {
    if (psi < 1 || t < 1) {
        throw Error(ErrorKind::invalid_spec, "psi and t must be >= 1");
    }
    const std::size_t n = data.size();
    if (psi > n) {
        throw Error(ErrorKind::insufficient_data,
                    "psi=" + std::to_string(psi) + " exceeds the number of points n=" + std::to_string(n));
    }
    if (count_distinct_rows(data, psi) < psi) {
        throw Error(ErrorKind::degenerate_data,
                    "psi=" + std::to_string(psi) + " exceeds the number of distinct points");
    }

    const std::size_t d = data.dim();
    std::vector<double> anchors;
    anchors.reserve(psi * t * d);
    for (std::size_t p = 0; p < t; ++p) {
        Rng rng(derive_seed(seed, p));
        // Lazy Fisher-Yates over row indices; rows equal to an anchor already
        // taken are skipped so the partition's anchors stay distinct.
        std::unordered_map<std::size_t, std::size_t> swapped;
        auto slot = [&](std::size_t i) {
            auto it = swapped.find(i);
            return it == swapped.end() ? i : it->second;
        };
        std::unordered_map<std::uint64_t, std::vector<std::size_t>> taken;
        std::size_t chosen = 0;
        for (std::size_t i = 0; chosen < psi && i < n; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
            const std::size_t row = slot(j);
            swapped[j] = slot(i);
            auto& bucket = taken[hash_row(data.row(row))];
            bool dup = false;
            for (std::size_t other : bucket) {
                if (rows_equal(data.row(row), data.row(other))) {
                    dup = true;
                    break;
                }
            }
            if (dup) {
                continue;
            }
            bucket.push_back(row);
            const auto r = data.row(row);
            anchors.insert(anchors.end(), r.begin(), r.end());
            ++chosen;
        }
    }
    IsolationModel model;
    model.psi_ = psi;
    model.t_ = t;
    model.d_ = d;
    model.seed_ = seed;
    model.anchors_ = std::move(anchors);
    return model;
}

void IsolationModel::check_dim(std::span<const double> x) const {
    if (x.size() != d_) {
        throw Error(ErrorKind::shape,
                    "point has dimension " + std::to_string(x.size()) + ", model expects " + std::to_string(d_));
    }
}

std::uint32_t IsolationModel::nearest(std::size_t partition, std::span<const double> x) const {
    std::uint32_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    const double* a = anchors_.data() + partition * psi_ * d_;
    for (std::size_t i = 0; i < psi_; ++i, a += d_) {
        double dist = 0.0;
        for (std::size_t j = 0; j < d_; ++j) {
            const double diff = x[j] - a[j];
            dist += diff * diff;
        }
        if (dist < best_dist) {
            best_dist = dist;
            best = static_cast<std::uint32_t>(i);
        }
    }
    return best;
}

FeatureVector IsolationModel::transform(std::span<const double> x) const {
    check_dim(x);
    FeatureVector fv;
    fv.cells.resize(t_);
    for (std::size_t p = 0; p < t_; ++p) {
        fv.cells[p] = nearest(p, x);
    }
    return fv;
}

std::vector<std::uint32_t> IsolationModel::transform_all(const Dataset& data) const {
    if (data.dim() != d_) {
        throw Error(ErrorKind::shape, "dataset has dimension " + std::to_string(data.dim()) + ", model expects " +
                                          std::to_string(d_));
    }
    std::vector<std::uint32_t> cells(data.size() * t_);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto x = data.row(i);
        for (std::size_t p = 0; p < t_; ++p) {
            cells[i * t_ + p] = nearest(p, x);
        }
    }
    return cells;
}

double IsolationModel::kappa(std::span<const double> x, std::span<const double> y) const {
    check_dim(x);
    check_dim(y);
    std::size_t same = 0;
    for (std::size_t p = 0; p < t_; ++p) {
        same += nearest(p, x) == nearest(p, y) ? 1 : 0;
    }
    return static_cast<double>(same) / static_cast<double>(t_);
}

std::string IsolationModel::to_json() const {
    nlohmann::json j;
    j["format"] = "cadclust.isolation_model";
    j["version"] = 1;
    j["psi"] = psi_;
    j["t"] = t_;
    j["d"] = d_;
    j["seed"] = seed_;
    j["anchors"] = anchors_;
    return j.dump();
}

IsolationModel IsolationModel::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
        if (j.at("format").get<std::string>() != "cadclust.isolation_model") {
            throw Error(ErrorKind::parse, "not an isolation model document");
        }
        if (j.at("version").get<int>() != 1) {
            throw Error(ErrorKind::parse, "unsupported isolation model version " + j.at("version").dump());
        }
        return IsolationModel(j.at("psi").get<std::size_t>(), j.at("t").get<std::size_t>(),
                              j.at("d").get<std::size_t>(), j.at("anchors").get<std::vector<double>>(),
                              j.at("seed").get<std::uint64_t>());
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::parse, std::string("isolation model document: ") + e.what());
    }
}

}  // namespace cadclust
