#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cadclust/bench.hpp"
#include "cadclust/dataset.hpp"
#include "cadclust/error.hpp"
#include "cadclust/kbc.hpp"
#include "cadclust/kmeans.hpp"
#include "cadclust/metrics.hpp"
#include "cadclust/plot.hpp"

using namespace cadclust;
using nlohmann::json;

namespace {

constexpr int usage_exit = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> split_numbers(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find(',', pos), text.size());
        const std::string field = text.substr(pos, end - pos);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
            throw UsageError(what + ": '" + field + "' is not a number");
        }
        out.push_back(v);
        pos = end + 1;
    }
    return out;
}

std::vector<std::vector<double>> split_groups(const std::string& text, std::size_t arity, const std::string& what) {
    std::vector<std::vector<double>> groups;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find(';', pos), text.size());
        auto values = split_numbers(text.substr(pos, end - pos), what);
        if (values.size() != arity) {
            throw UsageError(what + ": expected " + std::to_string(arity) + " comma-separated values per group");
        }
        groups.push_back(std::move(values));
        pos = end + 1;
    }
    return groups;
}

std::size_t as_count(double v, const std::string& what) {
    if (!(v >= 0.0) || v != static_cast<double>(static_cast<std::size_t>(v))) {
        throw UsageError(what + ": count must be a non-negative integer");
    }
    return static_cast<std::size_t>(v);
}

// "x,y,stddev,count;..."
std::vector<BlobSpec> parse_blob_flag(const std::string& text) {
    std::vector<BlobSpec> out;
    for (const auto& g : split_groups(text, 4, "--spec")) {
        out.push_back({{g[0], g[1]}, g[2], as_count(g[3], "--spec")});
    }
    return out;
}

// "cx,cy,radius,radial_stddev,count;..."
std::vector<RingSpec> parse_ring_flag(const std::string& text) {
    std::vector<RingSpec> out;
    for (const auto& g : split_groups(text, 5, "--rings")) {
        out.push_back({{g[0], g[1]}, g[2], g[3], as_count(g[4], "--rings")});
    }
    return out;
}

unsigned resolve_threads(std::optional<unsigned> flag) {
    if (flag) {
        return *flag;
    }
    if (const char* env = std::getenv("BENCH_THREADS"); env && *env) {
        unsigned v = 0;
        const std::string s(env);
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
            throw UsageError("BENCH_THREADS must be a non-negative integer, got '" + s + "'");
        }
        return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

Dataset read_data(const std::string& path, bool no_header, const std::optional<std::string>& label_column) {
    CsvOptions options;
    options.has_header = !no_header;
    options.label_column = label_column;
    options.detect_label = !no_header;
    return load_csv(path, options);
}

void write_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorKind::io, "cannot open '" + path + "' for writing");
    }
    out << j.dump(2) << '\n';
    if (!out) {
        throw Error(ErrorKind::io, "write to '" + path + "' failed");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kernel bounded clustering and k-means benchmark tool"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "Run a benchmark config");
    std::string config_path;
    std::string run_out;
    std::optional<unsigned> threads;
    run->add_option("--config", config_path, "Benchmark config (JSON)")->required();
    run->add_option("--out", run_out, "Output directory (defaults to the config's output_dir)");
    run->add_option("--threads", threads, "Worker threads; BENCH_THREADS is used when absent");

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset as CSV");
    std::string family;
    GenSpec spec;
    std::optional<std::size_t> gen_n;
    std::optional<double> gen_noise;
    std::string blob_text;
    std::string ring_text;
    std::string gen_out;
    gen->add_option("--family", family, "two-crescents | blobs | spiral | rings-gaussians | subspace-gaussians")
        ->required();
    gen->add_option("--seed", spec.seed, "Generator seed");
    gen->add_option("--n", gen_n, "Total points (two-crescents), points per arm (spiral), points per cluster "
                                  "(subspace-gaussians)");
    gen->add_option("--noise", gen_noise, "Gaussian noise (two-crescents, spiral)");
    gen->add_option("--spec", blob_text, "Blobs as \"x,y,stddev,count;...\"");
    gen->add_option("--rings", ring_text, "Rings as \"cx,cy,radius,radial_stddev,count;...\"");
    gen->add_option("--arms", spec.arms, "Spiral arms");
    gen->add_option("--dim-total", spec.dim_total, "Subspace-Gaussians dimension");
    gen->add_option("--dim-sub", spec.dim_sub, "Subspace-Gaussians informative dimensions");
    gen->add_option("--stddev", spec.stddev, "Subspace-Gaussians standard deviation");
    gen->add_option("--out", gen_out, "Output CSV (stdout when absent)");

    // fit
    auto* fit = app.add_subcommand("fit", "Cluster a CSV dataset");
    std::string method;
    std::string fit_data;
    std::string fit_out;
    bool no_header = false;
    std::optional<std::string> label_column;
    std::optional<int> k;
    std::uint64_t seed = 0;
    std::vector<std::size_t> psi{16};
    std::vector<double> tau{0.5};
    KbcParams kbc_defaults;
    KmeansParams km_defaults;
    fit->add_option("--method", method, "kbc | kmeans")->required()->check(CLI::IsMember({"kbc", "kmeans"}));
    fit->add_option("--data", fit_data, "Input CSV")->required();
    fit->add_option("--out", fit_out, "Result JSON")->required();
    fit->add_flag("--no-header", no_header, "The CSV has no header row");
    fit->add_option("--label-column", label_column, "Header name of the ground-truth column (default: \"label\")");
    fit->add_option("--k", k, "Number of clusters (default: number of ground-truth classes)");
    fit->add_option("--seed", seed, "Seed");
    fit->add_option("--psi", psi, "kbc: anchors per partition; several values are tuned")->expected(1, -1);
    fit->add_option("--tau", tau, "kbc: similarity threshold; several values are tuned")->expected(1, -1);
    fit->add_option("--t", kbc_defaults.t, "kbc: partitions");
    fit->add_option("--s", kbc_defaults.s, "kbc: sample size (0 = min(n, 512))");
    fit->add_option("--max-refine-iters", kbc_defaults.max_refine_iters, "kbc: refinement pass limit");
    fit->add_option("--n-init", km_defaults.n_init, "kmeans: restarts");
    fit->add_option("--max-iters", km_defaults.max_iters, "kmeans: Lloyd iterations per restart");
    fit->add_option("--tol", km_defaults.tol, "kmeans: centroid shift tolerance");

    // plot
    auto* plot_cmd = app.add_subcommand("plot", "Render labels as an SVG scatter plot");
    std::string plot_data;
    std::string labels_path;
    std::string plot_out;
    std::string title;
    plot_cmd->add_option("--data", plot_data, "Input CSV")->required();
    plot_cmd->add_option("--labels", labels_path, "Labels JSON (a fit result or a bare array)")->required();
    plot_cmd->add_option("--out", plot_out, "Output SVG")->required();
    plot_cmd->add_option("--title", title, "Plot title");
    plot_cmd->add_flag("--no-header", no_header, "The CSV has no header row");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n";
        const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        std::cerr << sub->help();
        return usage_exit;
    }

    try {
        if (*run) {
            bench::BenchConfig config = bench::load_config(config_path);
            std::filesystem::path out_dir = run_out.empty() ? std::filesystem::path(config.output_dir) : std::filesystem::path(run_out);
            if (out_dir.empty()) {
                throw UsageError("no output directory: pass --out or set output_dir in the config");
            }
            const auto report = bench::execute(config, resolve_threads(threads));
            bench::write_outputs(config, report, out_dir);
            for (const auto& row : report.summary) {
                std::cerr << row.dataset << " / " << row.method << ":";
                if (row.nmi_mean) {
                    std::cerr << " nmi " << *row.nmi_mean << " ari " << *row.ari_mean;
                }
                std::cerr << " objective " << row.objective_mean << " (" << row.runs << " runs)\n";
            }
            for (const auto& f : report.failures) {
                std::cerr << "failed: " << f << '\n';
            }
            return report.ok() ? 0 : 1;
        }

        if (*gen) {
            spec.family = parse_family(family);
            switch (spec.family) {
                case Family::two_crescents:
                    spec.n_total = gen_n.value_or(spec.n_total);
                    spec.noise = gen_noise.value_or(spec.noise);
                    break;
                case Family::spiral:
                    spec.n_per_arm = gen_n.value_or(spec.n_per_arm);
                    spec.spiral_noise = gen_noise.value_or(spec.spiral_noise);
                    break;
                case Family::subspace_gaussians:
                    spec.n_per_cluster = gen_n.value_or(spec.n_per_cluster);
                    break;
                default:
                    if (gen_n || gen_noise) {
                        throw UsageError("--n and --noise do not apply to family " + to_string(spec.family));
                    }
            }
            if (!blob_text.empty()) {
                auto blobs = parse_blob_flag(blob_text);
                (spec.family == Family::rings_gaussians ? spec.ring_blobs : spec.blobs) = std::move(blobs);
            }
            if (!ring_text.empty()) {
                spec.rings = parse_ring_flag(ring_text);
            }
            const Dataset data = generate(spec);
            if (gen_out.empty()) {
                save_csv(data, std::cout);
            } else {
                save_csv(data, gen_out);
            }
            std::cerr << data.name() << ": n=" << data.size() << " d=" << data.dim()
                      << " clusters=" << data.num_classes() << '\n';
            return 0;
        }

        if (*fit) {
            const Dataset data = read_data(fit_data, no_header, label_column);
            const int clusters = k.value_or(data.num_classes());
            if (clusters < 1) {
                throw UsageError("--k is required when the data has no label column");
            }
            json doc;
            ClusteringResult result;
            if (method == "kbc") {
                KbcParams params = kbc_defaults;
                params.k = clusters;
                params.seed = seed;
                if (psi.size() == 1 && tau.size() == 1) {
                    params.psi = psi.front();
                    params.tau = tau.front();
                    result = kbc::fit(data, params);
                    doc = result_to_json(result);
                } else {
                    auto outcome = kbc::tune(data, psi, tau, params);
                    result = std::move(outcome.results.front());
                    doc = result_to_json(result);
                    json failures = json::array();
                    for (const auto& f : outcome.failures) {
                        failures.push_back({{"psi", f.psi}, {"tau", f.tau}, {"reason", f.reason}});
                    }
                    doc["tuning"] = {{"score", outcome.score}, {"failures", failures}};
                }
            } else {
                KmeansParams params = km_defaults;
                params.k = clusters;
                params.seed = seed;
                result = kmeans_fit(data, params);
                doc = result_to_json(result);
            }
            write_json(doc, fit_out);
            std::cerr << method << ": objective " << result.objective;
            if (data.has_labels()) {
                std::cerr << " nmi " << nmi(data.labels(), result.labels.labels()) << " ari "
                          << ari(data.labels(), result.labels.labels());
            }
            std::cerr << '\n';
            return 0;
        }

        if (*plot_cmd) {
            const Dataset data = read_data(plot_data, no_header, std::nullopt);
            std::ifstream in(labels_path);
            if (!in) {
                throw Error(ErrorKind::io, "cannot open '" + labels_path + "'");
            }
            json doc;
            try {
                doc = json::parse(in);
            } catch (const json::exception& e) {
                throw Error(ErrorKind::parse, labels_path + ": " + e.what());
            }
            const auto labels = labels_from_json(doc);
            if (labels.size() != data.size()) {
                throw Error(ErrorKind::shape, "labels has " + std::to_string(labels.size()) + " entries but the data has " +
                                                  std::to_string(data.size()) + " rows");
            }
            plot(data, labels, plot_out, title);
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage_exit;
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return 1;
    }
    return 0;
}
