#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cadclust/bench.hpp"
#include "cadclust/error.hpp"

using namespace cadclust;
using namespace cadclust::bench;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json config_json(int runs = 3) {
    auto j = json::parse(R"({
        "master_seed": 11,
        "datasets": [
            {"name": "crescents", "generator": {"family": "two-crescents", "n": 200, "noise": 0.05, "seed": 1}},
            {"name": "blobs", "generator": {"family": "blobs", "seed": 2,
                "blobs": [{"center": [0, 0], "stddev": 1, "count": 60}, {"center": [9, 0], "stddev": 1, "count": 60}]}}
        ],
        "methods": [
            {"method": "kbc", "psi": [8, 16], "tau": [0.3, 0.6], "t": 60},
            {"method": "kmeans", "name": "km", "n_init": 3}
        ]})");
    j["runs"] = runs;
    return j;
}

std::string config_error_of(const json& j) {
    try {
        parse_config(j);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::config);
        return e.what();
    }
    FAIL("expected a config error");
    return {};
}

std::string without_wall_time(json j) {
    for (auto& r : j["records"]) {
        r.erase("wall_time_ms");
    }
    return j.dump(2);
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config parsing") {
    const auto cfg = parse_config(config_json());
    CHECK(cfg.runs == 3);
    CHECK(cfg.datasets.size() == 2);
    CHECK(cfg.methods[0].name == "kbc");
    CHECK(cfg.methods[1].name == "km");
    CHECK(std::get<KbcGrid>(cfg.methods[0].settings).t == 60);
    CHECK(std::get<GenSpec>(cfg.datasets[1].source).blobs.size() == 2);
    CHECK(parse_config(json::parse(R"({"datasets":[{"name":"a","generator":{"family":"spiral"}}],
                                       "methods":[{"method":"kmeans"}]})")).runs == 10);
}

TEST_CASE("config errors carry a field path") {
    auto j = config_json();
    j["runs"] = 0;
    CHECK(config_error_of(j).rfind("config.runs", 0) == 0);

    j = config_json();
    j["datasets"][1]["generator"]["family"] = "moons";
    CHECK(config_error_of(j).rfind("config.datasets[1].generator.family", 0) == 0);

    j = config_json();
    j["methods"][0]["psy"] = 3;
    CHECK(config_error_of(j).find("config.methods[0]") == 0);

    j = config_json();
    j["methods"] = json::array();
    CHECK(config_error_of(j).rfind("config.methods", 0) == 0);

    j = config_json();
    j["datasets"][0]["name"] = "blobs";
    CHECK(config_error_of(j).find("duplicate") != std::string::npos);
}

TEST_CASE("run seeds") {
    std::set<std::uint64_t> seen;
    for (int r = 0; r < 100; ++r) {
        CHECK(seen.insert(run_seed(5, "d", "m", r)).second);
    }
    CHECK(run_seed(5, "d", "m", 0) == run_seed(5, "d", "m", 0));
    CHECK(run_seed(5, "d", "m", 0) != run_seed(6, "d", "m", 0));
    CHECK(run_seed(5, "d", "m", 0) != run_seed(5, "d2", "m", 0));
    CHECK(run_seed(5, "ab", "c", 0) != run_seed(5, "a", "bc", 0));
}

TEST_CASE("summary statistics") {
    const auto [m, s] = mean_std({1.0, 2.0, 3.0, 4.0});
    CHECK(m == 2.5);
    CHECK(s == doctest::Approx(std::sqrt(1.25)));
    CHECK(mean_std({7.0}).second == 0.0);

    RunRecord a, b, c;
    a.dataset = b.dataset = c.dataset = "d";
    a.method = b.method = c.method = "m";
    a.run = 0;
    b.run = 1;
    c.run = 2;
    a.nmi = 0.5;
    b.nmi = 0.9;
    c.nmi = 0.9;
    a.ari = b.ari = c.ari = 0.1;
    CHECK(best_run({&a, &b, &c}) == 1);
    const auto sum = summarize({a, b, c});
    REQUIRE(sum.size() == 1);
    CHECK(sum[0].runs == 3);
    CHECK(*sum[0].nmi_mean == doctest::Approx((0.5 + 0.9 + 0.9) / 3).epsilon(1e-12));

    RunRecord x = a, y = a;
    x.nmi.reset();
    y.nmi.reset();
    x.objective = 1.0;
    y.objective = 2.0;
    y.run = 1;
    CHECK(best_run({&x, &y}) == 1);
}

TEST_CASE("execute is independent of the thread count") {
    const auto cfg = parse_config(config_json());
    const auto one = execute(cfg, 1);
    const auto four = execute(cfg, 4);
    CHECK(one.ok());
    CHECK(one.records.size() == 12);
    CHECK(without_wall_time(results_json(one)) == without_wall_time(results_json(four)));

    std::set<std::uint64_t> seeds;
    for (const auto& r : one.records) {
        CHECK(*r.nmi >= 0.0);
        CHECK(*r.nmi <= 1.0);
        seeds.insert(r.seed);
        for (std::size_t i = 1; i < r.objective_trace.size(); ++i) {
            CHECK(r.objective_trace[i] >= r.objective_trace[i - 1]);
        }
    }
    CHECK(seeds.size() == 12);

    // Summary means are the means of the records.
    for (const auto& cell : one.summary) {
        double s = 0.0;
        int n = 0;
        for (const auto& r : one.records) {
            if (r.dataset == cell.dataset && r.method == cell.method) {
                s += *r.nmi;
                ++n;
            }
        }
        CHECK(n == 3);
        CHECK(std::abs(*cell.nmi_mean - s / n) <= 1e-12);
    }
}

TEST_CASE("KBC runs share the tuned parameters") {
    const auto report = execute(parse_config(config_json()), 2);
    std::set<std::string> params;
    for (const auto& r : report.records) {
        if (r.method == "kbc") {
            auto p = r.params;
            p.erase("seed");
            params.insert(p.dump());
        }
    }
    CHECK(params.size() == 2);
}

TEST_CASE("a failing dataset does not stop the sweep") {
    auto j = config_json(1);
    j["datasets"].push_back({{"name", "missing"}, {"csv", {{"path", "/nonexistent/x.csv"}}}});
    const auto report = execute(parse_config(j), 2);
    CHECK_FALSE(report.ok());
    CHECK(report.records.size() == 4);
    bool named = false;
    for (const auto& f : report.failures) {
        named |= f.find("missing") != std::string::npos;
    }
    CHECK(named);
}

TEST_CASE("runs = 1 reports zero std") {
    const auto report = execute(parse_config(config_json(1)), 2);
    for (const auto& c : report.summary) {
        CHECK(*c.nmi_std == 0.0);
        CHECK(*c.ari_std == 0.0);
    }
}

TEST_CASE("write_outputs") {
    const auto cfg = parse_config(config_json(2));
    const auto report = execute(cfg, 2);
    const auto dir = fs::temp_directory_path() / "cadclust_bench_outputs";
    fs::remove_all(dir);
    write_outputs(cfg, report, dir);
    const auto results = json::parse(read_file(dir / "results.json"));
    CHECK(results["config_digest"] == report.config_digest);
    CHECK(results["records"].size() == 8);
    const auto summary = read_file(dir / "summary.csv");
    CHECK(summary.rfind("dataset,method,nmi_mean,nmi_std,ari_mean,ari_std,objective_mean,wall_ms_mean\n", 0) == 0);
    std::size_t lines = 0;
    for (char c : summary) lines += c == '\n';
    CHECK(lines == 5);
    for (const auto* name : {"plot_crescents_kbc.svg", "plot_crescents_km.svg", "plot_blobs_kbc.svg", "plot_blobs_km.svg"}) {
        CHECK(fs::exists(dir / name));
    }
}
