#ifndef CADCLUST_BENCH_HPP
#define CADCLUST_BENCH_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "cadclust/clustering_result.hpp"
#include "cadclust/dataset.hpp"

namespace cadclust::bench {

struct CsvSource {
    std::string path;
    CsvOptions options;
};

struct DatasetEntry {
    std::string name;
    std::variant<GenSpec, CsvSource> source;
    /// Cluster count handed to every method; defaults to the number of ground-truth classes.
    std::optional<int> k;
};

struct KbcGrid {
    std::vector<std::size_t> psi = {2, 4, 8, 16, 32};
    std::vector<double> tau = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::size_t t = 200;
    std::size_t s = 0;
    int max_refine_iters = 100;
};

struct KmeansSettings {
    int n_init = 10;
    int max_iters = 300;
    double tol = 1e-6;
};

struct MethodEntry {
    /// Label used in outputs and in run-seed derivation.
    std::string name;
    std::variant<KbcGrid, KmeansSettings> settings;
};

struct BenchConfig {
    std::vector<DatasetEntry> datasets;
    std::vector<MethodEntry> methods;
    int runs = 10;
    std::uint64_t master_seed = 0;
    std::string output_dir;
    /// Canonical JSON the config was parsed from; hashed into config_digest.
    nlohmann::json source;
};

/// Throws Error(config) with a JSON-pointer-style field path.
BenchConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
BenchConfig load_config(const std::filesystem::path& path);

/// Pure function of its arguments: the seed of run `run` of `method` on `dataset`.
std::uint64_t run_seed(std::uint64_t master_seed, const std::string& dataset, const std::string& method, int run);

struct RunRecord {
    std::string dataset;
    std::string method;
    nlohmann::json params;
    int run = 0;
    std::uint64_t seed = 0;
    std::optional<double> nmi;
    std::optional<double> ari;
    double objective = 0.0;
    double wall_time_ms = 0.0;
    std::vector<double> objective_trace;
    std::vector<int> labels;
};

struct CellSummary {
    std::string dataset;
    std::string method;
    std::size_t runs = 0;
    std::optional<double> nmi_mean, nmi_std, ari_mean, ari_std;
    double objective_mean = 0.0;
    double wall_ms_mean = 0.0;
};

struct BenchReport {
    std::string config_digest;
    /// Loaded datasets in config order; empty where loading failed.
    std::vector<std::optional<Dataset>> datasets;
    std::vector<RunRecord> records;
    std::vector<CellSummary> summary;
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }
};

/// Population mean and standard deviation (std = 0 for a single value).
std::pair<double, double> mean_std(const std::vector<double>& values);

std::vector<CellSummary> summarize(const std::vector<RunRecord>& records);

/// Index into `records` of the run to plot for one cell: highest NMI, lowest run index on ties.
std::size_t best_run(const std::vector<const RunRecord*>& cell);

/// Runs every (dataset, method) cell on `threads` workers. Results are
/// independent of the thread count. Writes nothing; see write_outputs.
BenchReport execute(const BenchConfig& config, unsigned threads);

/// results.json, summary.csv and one best-run SVG per cell.
void write_outputs(const BenchConfig& config, const BenchReport& report, const std::filesystem::path& out_dir);

nlohmann::json results_json(const BenchReport& report);
std::string summary_csv(const std::vector<CellSummary>& summary);

}  // namespace cadclust::bench

#endif  // CADCLUST_BENCH_HPP
