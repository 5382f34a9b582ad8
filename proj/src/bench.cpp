#include "cadclust/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <thread>

#include "cadclust/error.hpp"
#include "cadclust/kbc.hpp"
#include "cadclust/kmeans.hpp"
#include "cadclust/metrics.hpp"
#include "cadclust/plot.hpp"
#include "cadclust/rng.hpp"

namespace cadclust::bench {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
    throw Error(ErrorKind::config, path + ": " + what);
}

void allow_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
    if (!j.is_object()) {
        config_error(path, "expected an object");
    }
    for (const auto& item : j.items()) {
        if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return item.key() == k; })) {
            config_error(path + "." + item.key(), "unknown field");
        }
    }
}

template <typename T>
T field(const json& j, const std::string& path, const char* key, T fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        config_error(path + "." + key, "has the wrong type");
    }
}

template <typename T>
T required(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) {
        config_error(path + "." + key, "is required");
    }
    return field<T>(j, path, key, T{});
}

std::vector<BlobSpec> parse_blobs(const json& arr, const std::string& path) {
    if (!arr.is_array()) {
        config_error(path, "expected an array");
    }
    std::vector<BlobSpec> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        allow_keys(arr[i], p, {"center", "stddev", "count"});
        BlobSpec b;
        b.center = required<std::vector<double>>(arr[i], p, "center");
        b.stddev = field<double>(arr[i], p, "stddev", b.stddev);
        b.count = required<std::size_t>(arr[i], p, "count");
        out.push_back(std::move(b));
    }
    return out;
}

std::vector<RingSpec> parse_rings(const json& arr, const std::string& path) {
    if (!arr.is_array()) {
        config_error(path, "expected an array");
    }
    std::vector<RingSpec> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        allow_keys(arr[i], p, {"center", "radius", "radial_stddev", "count"});
        RingSpec r;
        r.center = field<std::vector<double>>(arr[i], p, "center", r.center);
        r.radius = required<double>(arr[i], p, "radius");
        r.radial_stddev = field<double>(arr[i], p, "radial_stddev", r.radial_stddev);
        r.count = required<std::size_t>(arr[i], p, "count");
        out.push_back(std::move(r));
    }
    return out;
}

GenSpec parse_generator(const json& j, const std::string& path) {
    allow_keys(j, path,
               {"family", "seed", "n", "noise", "arms", "blobs", "rings", "dim_total", "dim_sub", "stddev"});
    GenSpec g;
    const auto family = required<std::string>(j, path, "family");
    try {
        g.family = parse_family(family);
    } catch (const Error& e) {
        config_error(path + ".family", e.what());
    }
    g.seed = field<std::uint64_t>(j, path, "seed", 0);
    switch (g.family) {
        case Family::two_crescents:
            g.n_total = field<std::size_t>(j, path, "n", g.n_total);
            g.noise = field<double>(j, path, "noise", g.noise);
            break;
        case Family::blobs:
            if (j.contains("blobs")) {
                g.blobs = parse_blobs(j["blobs"], path + ".blobs");
            }
            break;
        case Family::spiral:
            g.n_per_arm = field<std::size_t>(j, path, "n", g.n_per_arm);
            g.arms = field<std::size_t>(j, path, "arms", g.arms);
            g.spiral_noise = field<double>(j, path, "noise", g.spiral_noise);
            break;
        case Family::rings_gaussians:
            if (j.contains("rings")) {
                g.rings = parse_rings(j["rings"], path + ".rings");
            }
            if (j.contains("blobs")) {
                g.ring_blobs = parse_blobs(j["blobs"], path + ".blobs");
            }
            break;
        case Family::subspace_gaussians:
            g.dim_total = field<std::size_t>(j, path, "dim_total", g.dim_total);
            g.dim_sub = field<std::size_t>(j, path, "dim_sub", g.dim_sub);
            g.n_per_cluster = field<std::size_t>(j, path, "n", g.n_per_cluster);
            g.stddev = field<double>(j, path, "stddev", g.stddev);
            break;
    }
    return g;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string sanitize(const std::string& s) {
    std::string out;
    for (char c : s) {
        const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                          c == '_' || c == '.';
        out += keep ? c : '_';
    }
    return out;
}

struct Cell {
    std::size_t dataset;
    std::size_t method;
};

struct CellOutput {
    std::vector<RunRecord> records;
    std::vector<std::string> failures;
};

CellOutput run_cell(const BenchConfig& config, const DatasetEntry& entry, const Dataset& data,
                    const MethodEntry& method) {
    CellOutput out;
    const std::string where = entry.name + "/" + method.name;
    const int k = entry.k.value_or(data.num_classes());
    if (k < 1) {
        out.failures.push_back(where + ": cluster count unknown; set \"k\" on the dataset");
        return out;
    }

    std::vector<int> runs;
    std::vector<std::uint64_t> seeds;
    std::set<std::uint64_t> seen;
    for (int r = 0; r < config.runs; ++r) {
        const std::uint64_t seed = run_seed(config.master_seed, entry.name, method.name, r);
        if (!seen.insert(seed).second) {
            out.failures.push_back(where + ": run seed collision at run " + std::to_string(r));
            continue;
        }
        runs.push_back(r);
        seeds.push_back(seed);
    }

    // KBC parameters are tuned once against all run seeds and then held fixed.
    std::optional<KbcParams> tuned;
    if (const auto* grid = std::get_if<KbcGrid>(&method.settings)) {
        KbcParams fixed;
        fixed.k = k;
        fixed.s = grid->s;
        fixed.t = grid->t;
        fixed.max_refine_iters = grid->max_refine_iters;
        try {
            tuned = kbc::tune(data, grid->psi, grid->tau, fixed, seeds).best;
        } catch (const Error& e) {
            out.failures.push_back(where + ": tuning failed: " + e.what());
            return out;
        }
    }

    for (std::size_t i = 0; i < runs.size(); ++i) {
        const int r = runs[i];
        const std::uint64_t seed = seeds[i];
        try {
            const auto start = std::chrono::steady_clock::now();
            ClusteringResult result;
            if (tuned) {
                KbcParams params = *tuned;
                params.seed = seed;
                result = kbc::fit(data, params);
            } else {
                const auto& km = std::get<KmeansSettings>(method.settings);
                KmeansParams params;
                params.k = k;
                params.n_init = km.n_init;
                params.max_iters = km.max_iters;
                params.tol = km.tol;
                params.seed = seed;
                result = kmeans_fit(data, params);
            }
            const auto stop = std::chrono::steady_clock::now();

            RunRecord rec;
            rec.dataset = entry.name;
            rec.method = method.name;
            rec.params = params_to_json(result.params);
            rec.run = r;
            rec.seed = seed;
            if (data.has_labels()) {
                rec.nmi = nmi(data.labels(), result.labels.labels());
                rec.ari = ari(data.labels(), result.labels.labels());
            }
            rec.objective = result.objective;
            rec.wall_time_ms = std::chrono::duration<double, std::milli>(stop - start).count();
            rec.objective_trace = std::move(result.objective_trace);
            rec.labels = result.labels.labels();
            out.records.push_back(std::move(rec));
        } catch (const Error& e) {
            out.failures.push_back(where + " run " + std::to_string(r) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace

BenchConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
    allow_keys(j, "config", {"datasets", "methods", "runs", "master_seed", "output_dir"});
    BenchConfig cfg;
    cfg.source = j;
    cfg.runs = field<int>(j, "config", "runs", cfg.runs);
    if (cfg.runs < 1) {
        config_error("config.runs", "must be >= 1");
    }
    cfg.master_seed = field<std::uint64_t>(j, "config", "master_seed", cfg.master_seed);
    cfg.output_dir = field<std::string>(j, "config", "output_dir", "");

    if (!j.contains("datasets") || !j["datasets"].is_array() || j["datasets"].empty()) {
        config_error("config.datasets", "must be a non-empty array");
    }
    std::set<std::string> dataset_names;
    for (std::size_t i = 0; i < j["datasets"].size(); ++i) {
        const std::string path = "config.datasets[" + std::to_string(i) + "]";
        const json& d = j["datasets"][i];
        allow_keys(d, path, {"name", "generator", "csv", "k"});
        DatasetEntry entry;
        entry.name = required<std::string>(d, path, "name");
        if (!dataset_names.insert(entry.name).second) {
            config_error(path + ".name", "duplicate dataset name '" + entry.name + "'");
        }
        if (d.contains("k")) {
            entry.k = field<int>(d, path, "k", 0);
            if (*entry.k < 1) {
                config_error(path + ".k", "must be >= 1");
            }
        }
        if (d.contains("generator") == d.contains("csv")) {
            config_error(path, "needs exactly one of 'generator' or 'csv'");
        }
        if (d.contains("generator")) {
            entry.source = parse_generator(d["generator"], path + ".generator");
        } else {
            const std::string cpath = path + ".csv";
            allow_keys(d["csv"], cpath, {"path", "has_header", "label_column"});
            CsvSource src;
            std::filesystem::path file = required<std::string>(d["csv"], cpath, "path");
            if (file.is_relative() && !base_dir.empty()) {
                file = base_dir / file;
            }
            src.path = file.string();
            src.options.has_header = field<bool>(d["csv"], cpath, "has_header", true);
            if (d["csv"].contains("label_column")) {
                src.options.label_column = field<std::string>(d["csv"], cpath, "label_column", "");
            } else {
                src.options.detect_label = src.options.has_header;
            }
            entry.source = std::move(src);
        }
        cfg.datasets.push_back(std::move(entry));
    }

    if (!j.contains("methods") || !j["methods"].is_array() || j["methods"].empty()) {
        config_error("config.methods", "must be a non-empty array");
    }
    std::set<std::string> method_names;
    for (std::size_t i = 0; i < j["methods"].size(); ++i) {
        const std::string path = "config.methods[" + std::to_string(i) + "]";
        const json& m = j["methods"][i];
        const auto kind = required<std::string>(m, path, "method");
        MethodEntry entry;
        entry.name = field<std::string>(m, path, "name", kind);
        if (!method_names.insert(entry.name).second) {
            config_error(path + ".name", "duplicate method name '" + entry.name + "'");
        }
        if (kind == "kbc") {
            allow_keys(m, path, {"method", "name", "psi", "tau", "t", "s", "max_refine_iters"});
            KbcGrid g;
            g.psi = field<std::vector<std::size_t>>(m, path, "psi", g.psi);
            g.tau = field<std::vector<double>>(m, path, "tau", g.tau);
            g.t = field<std::size_t>(m, path, "t", g.t);
            g.s = field<std::size_t>(m, path, "s", g.s);
            g.max_refine_iters = field<int>(m, path, "max_refine_iters", g.max_refine_iters);
            if (g.psi.empty() || g.tau.empty()) {
                config_error(path, "psi and tau grids must be non-empty");
            }
            entry.settings = g;
        } else if (kind == "kmeans") {
            allow_keys(m, path, {"method", "name", "n_init", "max_iters", "tol"});
            KmeansSettings s;
            s.n_init = field<int>(m, path, "n_init", s.n_init);
            s.max_iters = field<int>(m, path, "max_iters", s.max_iters);
            s.tol = field<double>(m, path, "tol", s.tol);
            entry.settings = s;
        } else {
            config_error(path + ".method", "unknown method '" + kind + "' (expected kbc or kmeans)");
        }
        cfg.methods.push_back(std::move(entry));
    }
    return cfg;
}

BenchConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::io, "cannot open config " + path.string());
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::config, path.string() + ": " + e.what());
    }
    return parse_config(j, path.parent_path());
}

std::uint64_t run_seed(std::uint64_t master_seed, const std::string& dataset, const std::string& method, int run) {
    std::string key;
    key += dataset;
    key += '\x1f';
    key += method;
    key += '\x1f';
    key += std::to_string(run);
    return stable_hash(key, 0xCBF29CE484222325ULL ^ master_seed);
}

std::pair<double, double> mean_std(const std::vector<double>& values) {
    if (values.empty()) {
        return {0.0, 0.0};
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    const double mean = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) {
        sq += (v - mean) * (v - mean);
    }
    return {mean, std::sqrt(sq / static_cast<double>(values.size()))};
}

std::vector<CellSummary> summarize(const std::vector<RunRecord>& records) {
    std::vector<CellSummary> out;
    std::vector<std::vector<const RunRecord*>> groups;
    for (const auto& r : records) {
        auto it = std::find_if(out.begin(), out.end(),
                               [&](const CellSummary& c) { return c.dataset == r.dataset && c.method == r.method; });
        if (it == out.end()) {
            CellSummary cell;
            cell.dataset = r.dataset;
            cell.method = r.method;
            out.push_back(std::move(cell));
            groups.emplace_back();
            it = out.end() - 1;
        }
        groups[static_cast<std::size_t>(it - out.begin())].push_back(&r);
    }
    for (std::size_t c = 0; c < out.size(); ++c) {
        std::vector<double> nmis, aris, objectives, walls;
        for (const auto* r : groups[c]) {
            if (r->nmi) {
                nmis.push_back(*r->nmi);
            }
            if (r->ari) {
                aris.push_back(*r->ari);
            }
            objectives.push_back(r->objective);
            walls.push_back(r->wall_time_ms);
        }
        out[c].runs = groups[c].size();
        if (!nmis.empty()) {
            const auto [mean, sd] = mean_std(nmis);
            out[c].nmi_mean = mean;
            out[c].nmi_std = sd;
        }
        if (!aris.empty()) {
            const auto [mean, sd] = mean_std(aris);
            out[c].ari_mean = mean;
            out[c].ari_std = sd;
        }
        out[c].objective_mean = mean_std(objectives).first;
        out[c].wall_ms_mean = mean_std(walls).first;
    }
    return out;
}

std::size_t best_run(const std::vector<const RunRecord*>& cell) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < cell.size(); ++i) {
        const auto& a = *cell[i];
        const auto& b = *cell[best];
        const double score_a = a.nmi.value_or(a.objective);
        const double score_b = b.nmi.value_or(b.objective);
        if (score_a > score_b || (score_a == score_b && a.run < b.run)) {
            best = i;
        }
    }
    return best;
}

BenchReport execute(const BenchConfig& config, unsigned threads) {
    BenchReport report;
    report.config_digest = hex64(stable_hash(config.source.dump()));

    for (const auto& entry : config.datasets) {
        try {
            Dataset data = std::visit(
                [](const auto& src) -> Dataset {
                    using T = std::decay_t<decltype(src)>;
                    if constexpr (std::is_same_v<T, GenSpec>) {
                        return generate(src);
                    } else {
                        return load_csv(src.path, src.options);
                    }
                },
                entry.source);
            data.set_name(entry.name);
            report.datasets.emplace_back(std::move(data));
        } catch (const Error& e) {
            report.datasets.emplace_back(std::nullopt);
            report.failures.push_back(entry.name + ": dataset load failed: " + e.what());
        }
    }

    std::vector<Cell> cells;
    for (std::size_t d = 0; d < config.datasets.size(); ++d) {
        if (!report.datasets[d]) {
            continue;
        }
        for (std::size_t m = 0; m < config.methods.size(); ++m) {
            cells.push_back({d, m});
        }
    }

    std::vector<CellOutput> outputs(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            const auto& cell = cells[i];
            outputs[i] = run_cell(config, config.datasets[cell.dataset], *report.datasets[cell.dataset],
                                  config.methods[cell.method]);
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cells.size())));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }

    for (auto& out : outputs) {
        for (auto& r : out.records) {
            report.records.push_back(std::move(r));
        }
        for (auto& f : out.failures) {
            report.failures.push_back(std::move(f));
        }
    }
    report.summary = summarize(report.records);
    return report;
}

json results_json(const BenchReport& report) {
    json records = json::array();
    for (const auto& r : report.records) {
        json rec;
        rec["dataset"] = r.dataset;
        rec["method"] = r.method;
        rec["params"] = r.params;
        rec["run"] = r.run;
        rec["seed"] = r.seed;
        rec["nmi"] = r.nmi ? json(*r.nmi) : json(nullptr);
        rec["ari"] = r.ari ? json(*r.ari) : json(nullptr);
        rec["objective"] = r.objective;
        rec["wall_time_ms"] = r.wall_time_ms;
        rec["objective_trace"] = r.objective_trace;
        records.push_back(std::move(rec));
    }
    return json{{"config_digest", report.config_digest}, {"records", records}, {"failures", report.failures}};
}

std::string summary_csv(const std::vector<CellSummary>& summary) {
    std::string out = "dataset,method,nmi_mean,nmi_std,ari_mean,ari_std,objective_mean,wall_ms_mean\n";
    auto opt = [](const std::optional<double>& v) { return v ? number(*v) : std::string(); };
    for (const auto& c : summary) {
        out += c.dataset + "," + c.method + "," + opt(c.nmi_mean) + "," + opt(c.nmi_std) + "," + opt(c.ari_mean) +
               "," + opt(c.ari_std) + "," + number(c.objective_mean) + "," + number(c.wall_ms_mean) + "\n";
    }
    return out;
}

void write_outputs(const BenchConfig& config, const BenchReport& report, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw Error(ErrorKind::io, "cannot create " + out_dir.string() + ": " + ec.message());
    }
    {
        std::ofstream out(out_dir / "results.json", std::ios::binary);
        out << results_json(report).dump(2) << '\n';
        if (!out) {
            throw Error(ErrorKind::io, "failed writing results.json");
        }
    }
    {
        std::ofstream out(out_dir / "summary.csv", std::ios::binary);
        out << summary_csv(report.summary);
        if (!out) {
            throw Error(ErrorKind::io, "failed writing summary.csv");
        }
    }
    for (std::size_t d = 0; d < config.datasets.size(); ++d) {
        if (!report.datasets[d]) {
            continue;
        }
        for (const auto& method : config.methods) {
            std::vector<const RunRecord*> cell;
            for (const auto& r : report.records) {
                if (r.dataset == config.datasets[d].name && r.method == method.name) {
                    cell.push_back(&r);
                }
            }
            if (cell.empty()) {
                continue;
            }
            const RunRecord& best = *cell[best_run(cell)];
            std::string title = best.dataset + " / " + best.method + " / run " + std::to_string(best.run);
            if (best.nmi) {
                char buf[32];
                std::snprintf(buf, sizeof(buf), " / NMI=%.2f", *best.nmi);
                title += buf;
            }
            plot(*report.datasets[d], best.labels,
                 out_dir / ("plot_" + sanitize(best.dataset) + "_" + sanitize(best.method) + ".svg"), title);
        }
    }
}

}  // namespace cadclust::bench
