#include "cadclust/distributional_kernel.hpp"

#include <cmath>

#include "cadclust/error.hpp"

namespace cadclust {

Embedding::Embedding(const IsolationModel& model, const Dataset& data)
    : n_(data.size()), t_(model.partitions()), psi_(model.psi()), cells_(model.transform_all(data)) {}

MeanMap::MeanMap(std::size_t t, std::size_t psi) : t_(t), psi_(psi), counts_(t * psi, 0) {}

void MeanMap::add(std::span<const std::uint32_t> cells) {
    if (cells.size() != t_) {
        throw Error(ErrorKind::shape, "feature has " + std::to_string(cells.size()) + " partitions, mean map has " +
                                          std::to_string(t_));
    }
    for (std::size_t p = 0; p < t_; ++p) {
        ++counts_[p * psi_ + cells[p]];
    }
    ++members_;
}

std::vector<double> MeanMap::weights() const {
    std::vector<double> w(counts_.size(), 0.0);
    if (members_ == 0) {
        return w;
    }
    const double scale = 1.0 / (static_cast<double>(members_) * std::sqrt(static_cast<double>(t_)));
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        w[i] = static_cast<double>(counts_[i]) * scale;
    }
    return w;
}

double MeanMap::self_similarity() const { return k_dist(*this, *this); }

Partition::Partition(std::vector<int> labels, int k) : labels_(std::move(labels)), k_(k) {
    if (k_ < 1) {
        throw Error(ErrorKind::invalid_spec, "partition needs k >= 1");
    }
    std::vector<std::size_t> sizes(static_cast<std::size_t>(k_), 0);
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        const int l = labels_[i];
        if (l < 0 || l >= k_) {
            throw Error(ErrorKind::shape, "label " + std::to_string(l) + " at index " + std::to_string(i) +
                                              " outside [0, " + std::to_string(k_) + ")");
        }
        ++sizes[static_cast<std::size_t>(l)];
    }
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        if (sizes[c] == 0) {
            throw Error(ErrorKind::empty_cluster, "cluster " + std::to_string(c) + " is empty");
        }
    }
}

namespace {

int infer_k(const std::vector<int>& labels) {
    int k = 0;
    for (int l : labels) {
        k = std::max(k, l + 1);
    }
    return k;
}

void check_compatible(const MeanMap& x, const MeanMap& y) {
    if (x.partitions() != y.partitions() || x.psi() != y.psi()) {
        throw Error(ErrorKind::shape, "mean maps come from models of different shape");
    }
}

std::vector<std::size_t> all_rows(std::size_t n) {
    std::vector<std::size_t> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        rows[i] = i;
    }
    return rows;
}

void check_partition(const Embedding& emb, const Partition& part) {
    if (part.size() != emb.size()) {
        throw Error(ErrorKind::shape, "partition covers " + std::to_string(part.size()) + " points, data has " +
                                          std::to_string(emb.size()));
    }
}

}  // namespace

Partition::Partition(std::vector<int> labels) : Partition(labels, infer_k(labels)) {}

std::vector<std::vector<std::size_t>> Partition::members() const {
    std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(k_));
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        out[static_cast<std::size_t>(labels_[i])].push_back(i);
    }
    return out;
}

MeanMap mean_map(const Embedding& emb, std::span<const std::size_t> members) {
    if (members.empty()) {
        throw Error(ErrorKind::empty_cluster, "mean map of an empty set");
    }
    MeanMap mm(emb.partitions(), emb.psi());
    for (std::size_t i : members) {
        mm.add(emb.cells(i));
    }
    return mm;
}

MeanMap mean_map(const IsolationModel& model, const Dataset& points) {
    const Embedding emb(model, points);
    const auto rows = all_rows(points.size());
    return mean_map(emb, rows);
}

double k_dist(const MeanMap& x, const MeanMap& y) {
    check_compatible(x, y);
    if (x.member_count() == 0 || y.member_count() == 0) {
        throw Error(ErrorKind::empty_cluster, "distributional kernel of an empty set");
    }
    // Integer accumulation: <phi_hat_x, phi_hat_y> = sum c_x c_y / (|X| |Y| t).
    std::uint64_t dot = 0;
    const auto cx = x.counts();
    const auto cy = y.counts();
    for (std::size_t i = 0; i < cx.size(); ++i) {
        dot += static_cast<std::uint64_t>(cx[i]) * cy[i];
    }
    const double denom = static_cast<double>(x.member_count()) * static_cast<double>(y.member_count()) *
                         static_cast<double>(x.partitions());
    return static_cast<double>(dot) / denom;
}

double point_to_dist(std::span<const std::uint32_t> cells, const MeanMap& mm) {
    if (cells.size() != mm.partitions()) {
        throw Error(ErrorKind::shape, "feature has " + std::to_string(cells.size()) + " partitions, mean map has " +
                                          std::to_string(mm.partitions()));
    }
    if (mm.member_count() == 0) {
        throw Error(ErrorKind::empty_cluster, "point-to-distribution similarity against an empty set");
    }
    std::uint64_t hits = 0;
    const auto counts = mm.counts();
    const std::size_t psi = mm.psi();
    for (std::size_t p = 0; p < cells.size(); ++p) {
        hits += counts[p * psi + cells[p]];
    }
    return static_cast<double>(hits) /
           (static_cast<double>(mm.member_count()) * static_cast<double>(mm.partitions()));
}

double point_to_dist(const IsolationModel& model, std::span<const double> x, const MeanMap& mm) {
    return point_to_dist(model.transform(x).cells, mm);
}

ObjectiveForms objective_forms(const Embedding& emb, const Partition& part) {
    check_partition(emb, part);
    const auto groups = part.members();
    ObjectiveForms forms;
    for (const auto& members : groups) {
        const MeanMap mm = mean_map(emb, members);
        for (std::size_t i : members) {
            forms.pointwise += point_to_dist(emb.cells(i), mm);
        }
        forms.self_similarity += static_cast<double>(members.size()) * k_dist(mm, mm);
    }
    return forms;
}

double objective(const Embedding& emb, const Partition& part) { return objective_forms(emb, part).pointwise; }

double objective(const IsolationModel& model, const Dataset& data, const Partition& part) {
    const Embedding emb(model, data);
    return objective(emb, part);
}

double total_weight(const IsolationModel& model, const Dataset& x, const Dataset& y) {
    const MeanMap mx = mean_map(model, x);
    const MeanMap my = mean_map(model, y);
    return static_cast<double>(x.size()) * static_cast<double>(y.size()) * k_dist(mx, my);
}

CutDecomposition cut_association_decompose(const IsolationModel& model, const Dataset& data,
                                           const Partition& part) {
    const Embedding emb(model, data);
    check_partition(emb, part);
    const auto groups = part.members();
    const std::size_t n = data.size();

    CutDecomposition out;
    const auto everything = all_rows(n);
    const MeanMap whole = mean_map(emb, everything);
    out.total = static_cast<double>(n) * static_cast<double>(n) * k_dist(whole, whole);

    std::vector<int> in_cluster(n, 0);
    for (std::size_t c = 0; c < groups.size(); ++c) {
        const auto& members = groups[c];
        const MeanMap mm = mean_map(emb, members);
        const double size = static_cast<double>(members.size());
        out.within_sum += size * size * k_dist(mm, mm);

        if (members.size() == n) {
            continue;  // no complement, no cut
        }
        std::vector<std::size_t> complement;
        complement.reserve(n - members.size());
        for (std::size_t i : members) {
            in_cluster[i] = 1;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!in_cluster[i]) {
                complement.push_back(i);
            }
        }
        for (std::size_t i : members) {
            in_cluster[i] = 0;
        }
        const MeanMap rest = mean_map(emb, complement);
        out.cut_sum += size * static_cast<double>(complement.size()) * k_dist(mm, rest);
    }
    return out;
}

}  // namespace cadclust
