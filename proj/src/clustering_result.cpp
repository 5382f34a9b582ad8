#include "cadclust/clustering_result.hpp"

#include "cadclust/error.hpp"

namespace cadclust {

std::string method_name(const MethodParams& params) {
    return std::holds_alternative<KbcParams>(params) ? "kbc" : "kmeans";
}

void to_json(nlohmann::json& j, const KbcParams& p) {
    j = nlohmann::json{{"k", p.k},     {"s", p.s}, {"tau", p.tau}, {"psi", p.psi},
                       {"t", p.t},     {"max_refine_iters", p.max_refine_iters}, {"seed", p.seed}};
}

void from_json(const nlohmann::json& j, KbcParams& p) {
    p.k = j.value("k", p.k);
    p.s = j.value("s", p.s);
    p.tau = j.value("tau", p.tau);
    p.psi = j.value("psi", p.psi);
    p.t = j.value("t", p.t);
    p.max_refine_iters = j.value("max_refine_iters", p.max_refine_iters);
    p.seed = j.value("seed", p.seed);
}

void to_json(nlohmann::json& j, const KmeansParams& p) {
    j = nlohmann::json{{"k", p.k}, {"n_init", p.n_init}, {"max_iters", p.max_iters}, {"tol", p.tol}, {"seed", p.seed}};
}

void from_json(const nlohmann::json& j, KmeansParams& p) {
    p.k = j.value("k", p.k);
    p.n_init = j.value("n_init", p.n_init);
    p.max_iters = j.value("max_iters", p.max_iters);
    p.tol = j.value("tol", p.tol);
    p.seed = j.value("seed", p.seed);
}

nlohmann::json params_to_json(const MethodParams& params) {
    return std::visit([](const auto& p) { return nlohmann::json(p); }, params);
}

nlohmann::json result_to_json(const ClusteringResult& result) {
    nlohmann::json j;
    j["method"] = method_name(result.params);
    j["labels"] = result.labels.labels();
    j["k"] = result.labels.k();
    j["objective"] = result.objective;
    j["params"] = params_to_json(result.params);
    j["seed"] = result.seed;
    j["n_refine_iters"] = result.n_refine_iters;
    j["objective_trace"] = result.objective_trace;
    if (!result.seed_groups.empty()) {
        j["seed_groups"] = result.seed_groups;
    }
    j["refine_stopped_on_empty"] = result.refine_stopped_on_empty;
    return j;
}

std::vector<int> labels_from_json(const nlohmann::json& j) {
    try {
        if (j.is_array()) {
            return j.get<std::vector<int>>();
        }
        return j.at("labels").get<std::vector<int>>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::parse, std::string("labels document: ") + e.what());
    }
}

}  // namespace cadclust
