#include "cadclust/kbc.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "cadclust/error.hpp"
#include "cadclust/rng.hpp"

namespace cadclust::kbc {

namespace {

constexpr std::uint64_t model_stream = 1;
constexpr std::uint64_t sample_stream = 2;
constexpr double min_gain = 1e-12;

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) {
            return;
        }
        if (rank_[a] < rank_[b]) {
            std::swap(a, b);
        }
        parent_[b] = a;
        if (rank_[a] == rank_[b]) {
            ++rank_[a];
        }
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<unsigned> rank_;
};

/// Number of shared cells for every pair of sample points (upper triangle, row-major).
class SampleAgreement {
public:
    SampleAgreement(const Embedding& emb, std::span<const std::size_t> sample)
        : sample_(sample.begin(), sample.end()), t_(emb.partitions()) {
        const std::size_t s = sample_.size();
        same_.resize(s * (s - (s > 0 ? 1 : 0)) / 2);
        std::size_t idx = 0;
        for (std::size_t a = 0; a < s; ++a) {
            const auto ca = emb.cells(sample_[a]);
            for (std::size_t b = a + 1; b < s; ++b) {
                const auto cb = emb.cells(sample_[b]);
                std::uint32_t same = 0;
                for (std::size_t p = 0; p < t_; ++p) {
                    same += ca[p] == cb[p] ? 1 : 0;
                }
                same_[idx++] = same;
            }
        }
    }

    std::vector<std::vector<std::size_t>> components(double tau) const {
        const std::size_t s = sample_.size();
        DisjointSets sets(s);
        const double t = static_cast<double>(t_);
        std::size_t idx = 0;
        for (std::size_t a = 0; a < s; ++a) {
            for (std::size_t b = a + 1; b < s; ++b, ++idx) {
                if (static_cast<double>(same_[idx]) / t > tau) {
                    sets.unite(a, b);
                }
            }
        }
        std::vector<std::vector<std::size_t>> by_root(s);
        for (std::size_t a = 0; a < s; ++a) {
            by_root[sets.find(a)].push_back(sample_[a]);
        }
        std::vector<std::vector<std::size_t>> comps;
        for (auto& c : by_root) {
            if (!c.empty()) {
                std::sort(c.begin(), c.end());
                comps.push_back(std::move(c));
            }
        }
        std::sort(comps.begin(), comps.end(), [](const auto& x, const auto& y) {
            if (x.size() != y.size()) {
                return x.size() > y.size();
            }
            return x.front() < y.front();
        });
        return comps;
    }

private:
    std::vector<std::size_t> sample_;
    std::size_t t_;
    std::vector<std::uint32_t> same_;
};

std::vector<std::vector<std::size_t>> largest_components(const SampleAgreement& agreement, int k, double tau) {
    auto comps = agreement.components(tau);
    if (comps.size() < static_cast<std::size_t>(k)) {
        throw Error(ErrorKind::tau_too_small,
                    std::string(tau_too_small_message) + " (tau=" + std::to_string(tau) + " gives " +
                        std::to_string(comps.size()) + " group(s), k=" + std::to_string(k) + ")");
    }
    comps.resize(static_cast<std::size_t>(k));
    return comps;
}

std::vector<MeanMap> maps_of(const Embedding& emb, const std::vector<std::vector<std::size_t>>& groups) {
    std::vector<MeanMap> maps;
    maps.reserve(groups.size());
    for (const auto& g : groups) {
        maps.push_back(mean_map(emb, g));
    }
    return maps;
}

/// Argmax labels plus per-cluster sizes; never throws on empty clusters.
std::vector<int> argmax_labels(const Embedding& emb, std::span<const MeanMap> maps, std::vector<std::size_t>& sizes) {
    sizes.assign(maps.size(), 0);
    std::vector<int> labels(emb.size(), 0);
    for (std::size_t i = 0; i < emb.size(); ++i) {
        const auto cells = emb.cells(i);
        int best = 0;
        double best_sim = point_to_dist(cells, maps[0]);
        for (std::size_t j = 1; j < maps.size(); ++j) {
            const double sim = point_to_dist(cells, maps[j]);
            if (sim > best_sim) {
                best_sim = sim;
                best = static_cast<int>(j);
            }
        }
        labels[i] = best;
        ++sizes[static_cast<std::size_t>(best)];
    }
    return labels;
}

std::size_t resolve_sample_size(const KbcParams& params, std::size_t n) {
    return params.s == 0 ? std::min(n, default_sample_cap) : params.s;
}

void validate(const KbcParams& params, std::size_t n) {
    if (params.k < 2) {
        throw Error(ErrorKind::invalid_spec, "KBC needs k >= 2");
    }
    if (!(params.tau >= -1.0 && params.tau < 1.0)) {
        throw Error(ErrorKind::invalid_spec, "tau must lie in [-1, 1)");
    }
    if (params.max_refine_iters < 0) {
        throw Error(ErrorKind::invalid_spec, "max_refine_iters must be >= 0");
    }
    const std::size_t s = resolve_sample_size(params, n);
    if (s > n) {
        throw Error(ErrorKind::insufficient_data,
                    "sample size s=" + std::to_string(s) + " exceeds n=" + std::to_string(n));
    }
    if (s < static_cast<std::size_t>(params.k)) {
        throw Error(ErrorKind::invalid_spec,
                    "sample size s=" + std::to_string(s) + " is smaller than k=" + std::to_string(params.k));
    }
}

/// Everything in a fit that does not depend on tau.
struct Prepared {
    IsolationModel model;
    Embedding emb;
    std::vector<std::size_t> sample;
    SampleAgreement agreement;

    Prepared(const Dataset& data, const KbcParams& params, std::size_t s)
        : model(IsolationModel::fit(data, params.psi, params.t, derive_seed(params.seed, model_stream))),
          emb(model, data),
          sample(Rng(derive_seed(params.seed, sample_stream)).sample_without_replacement(data.size(), s)),
          agreement(emb, sample) {}

    /// n * K(P_D, P_D): the objective of the one-cluster partition.
    double baseline_objective() const {
        std::vector<std::size_t> rows(emb.size());
        std::iota(rows.begin(), rows.end(), std::size_t{0});
        const MeanMap whole = mean_map(emb, rows);
        return static_cast<double>(rows.size()) * k_dist(whole, whole);
    }
};

ClusteringResult run_prepared(const Prepared& prep, const KbcParams& params) {
    auto groups = largest_components(prep.agreement, params.k, params.tau);
    const Partition initial = assign(prep.emb, groups);
    RefineOutcome refined = refine(prep.emb, initial, params.max_refine_iters);

    ClusteringResult result;
    result.objective = refined.objective_trace.back();
    result.labels = std::move(refined.labels);
    result.params = params;
    result.seed = params.seed;
    result.n_refine_iters = refined.accepted_iters;
    result.seed_groups = std::move(groups);
    result.objective_trace = std::move(refined.objective_trace);
    result.refine_stopped_on_empty = refined.stopped_on_empty;
    return result;
}

}  // namespace

std::vector<std::vector<std::size_t>> init_clusters(const Embedding& emb, std::span<const std::size_t> sample, int k,
                                                    double tau) {
    if (k < 1 || sample.size() < static_cast<std::size_t>(k)) {
        throw Error(ErrorKind::invalid_spec, "seeding needs 1 <= k <= |sample|");
    }
    const SampleAgreement agreement(emb, sample);
    return largest_components(agreement, k, tau);
}

Partition assign(const Embedding& emb, std::span<const MeanMap> maps) {
    if (maps.size() < 2) {
        throw Error(ErrorKind::invalid_spec, "assignment needs at least two groups");
    }
    std::vector<std::size_t> sizes;
    auto labels = argmax_labels(emb, maps, sizes);
    for (std::size_t j = 0; j < sizes.size(); ++j) {
        if (sizes[j] == 0) {
            throw Error(ErrorKind::degenerate_assignment,
                        "cluster " + std::to_string(j) + " received no points during assignment");
        }
    }
    return Partition(std::move(labels), static_cast<int>(maps.size()));
}

Partition assign(const Embedding& emb, const std::vector<std::vector<std::size_t>>& groups) {
    for (std::size_t j = 0; j < groups.size(); ++j) {
        if (groups[j].empty()) {
            throw Error(ErrorKind::empty_cluster, "seed group " + std::to_string(j) + " is empty");
        }
    }
    const auto maps = maps_of(emb, groups);
    return assign(emb, maps);
}

RefineOutcome refine(const Embedding& emb, const Partition& part, int max_iters) {
    if (part.size() != emb.size()) {
        throw Error(ErrorKind::shape, "partition size does not match the embedding");
    }
    RefineOutcome out;
    out.labels = part;
    double current = objective(emb, part);
    out.objective_trace.push_back(current);

    std::vector<std::size_t> sizes;
    for (int iter = 0; iter < max_iters; ++iter) {
        const auto maps = maps_of(emb, out.labels.members());
        auto labels = argmax_labels(emb, maps, sizes);
        if (std::find(sizes.begin(), sizes.end(), std::size_t{0}) != sizes.end()) {
            out.stopped_on_empty = true;
            break;
        }
        if (labels == out.labels.labels()) {
            break;
        }
        Partition next(std::move(labels), out.labels.k());
        const double value = objective(emb, next);
        if (!(value > current + min_gain)) {
            break;
        }
        current = value;
        out.labels = std::move(next);
        out.objective_trace.push_back(current);
        ++out.accepted_iters;
    }
    return out;
}

ClusteringResult fit(const Dataset& data, const KbcParams& params) {
    validate(params, data.size());
    KbcParams resolved = params;
    resolved.s = resolve_sample_size(params, data.size());
    const Prepared prep(data, resolved, resolved.s);
    return run_prepared(prep, resolved);
}

TuneOutcome tune(const Dataset& data, std::span<const std::size_t> psi_grid, std::span<const double> tau_grid,
                 const KbcParams& fixed, std::span<const std::uint64_t> replicate_seeds) {
    if (psi_grid.empty() || tau_grid.empty()) {
        throw Error(ErrorKind::invalid_spec, "tuning grids must be non-empty");
    }
    std::vector<std::size_t> psis(psi_grid.begin(), psi_grid.end());
    std::vector<double> taus(tau_grid.begin(), tau_grid.end());
    std::sort(psis.begin(), psis.end());
    psis.erase(std::unique(psis.begin(), psis.end()), psis.end());
    std::sort(taus.begin(), taus.end());
    taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
    std::vector<std::uint64_t> seeds(replicate_seeds.begin(), replicate_seeds.end());
    if (seeds.empty()) {
        seeds.push_back(fixed.seed);
    }

    std::optional<TuneOutcome> best;
    std::vector<TuneFailure> failures;
    const auto fail_all = [&](std::size_t psi, const std::string& reason) {
        for (double tau : taus) {
            failures.push_back({psi, tau, reason});
        }
    };

    for (std::size_t psi : psis) {
        KbcParams base = fixed;
        base.psi = psi;
        try {
            validate(base, data.size());
        } catch (const Error& e) {
            fail_all(psi, e.what());
            continue;
        }
        base.s = resolve_sample_size(base, data.size());

        // One prepared fit per replicate, shared by every tau.
        std::vector<Prepared> preps;
        std::vector<double> baselines;
        try {
            for (std::uint64_t seed : seeds) {
                KbcParams p = base;
                p.seed = seed;
                preps.emplace_back(data, p, p.s);
                baselines.push_back(preps.back().baseline_objective());
            }
        } catch (const Error& e) {
            fail_all(psi, e.what());
            continue;
        }

        for (double tau : taus) {
            KbcParams params = base;
            params.tau = tau;
            std::vector<ClusteringResult> results;
            double score = 0.0;
            try {
                validate(params, data.size());
                for (std::size_t r = 0; r < seeds.size(); ++r) {
                    params.seed = seeds[r];
                    results.push_back(run_prepared(preps[r], params));
                    score += results.back().objective / baselines[r];
                }
            } catch (const Error& e) {
                std::string reason = e.what();
                if (seeds.size() > 1) {
                    reason = "replicate " + std::to_string(results.size()) + ": " + reason;
                }
                failures.push_back({psi, tau, std::move(reason)});
                continue;
            }
            score /= static_cast<double>(seeds.size());
            if (!best || score > best->score) {
                params.seed = seeds.front();
                best = TuneOutcome{params, std::move(results), score, {}};
            }
        }
    }
    if (!best) {
        std::string msg = "every (psi, tau) combination failed:";
        for (const auto& f : failures) {
            msg += "\n  psi=" + std::to_string(f.psi) + " tau=" + std::to_string(f.tau) + ": " + f.reason;
        }
        throw Error(ErrorKind::all_failed, msg);
    }
    best->failures = std::move(failures);
    return std::move(*best);
}

}  // namespace cadclust::kbc
