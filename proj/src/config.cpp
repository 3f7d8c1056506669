#include "gmflou/config.hpp"

#include <set>

#include "gmflou/errors.hpp"

namespace gmflou {

namespace {

const std::set<std::string> kProcesses{"flp", "flou", "aggregated", "Z", "Y"};
const std::set<std::string> kCommands{"simulate", "verify", "converge", "cf"};

bool needs_mixing(const RunConfig& c) {
    return c.command != "simulate" || c.process == "Z" || c.process == "Y" || c.process == "aggregated";
}

}  // namespace

void RunConfig::validate() const {
    if (!kCommands.contains(command)) throw ParameterError("unknown command '" + command + "'");
    if (!kProcesses.contains(process)) throw ParameterError("unknown process '" + process + "' (flp|flou|aggregated|Z|Y)");
    validate_memory_parameter(d);
    grid.validate();
    if (replicas < 1) throw ParameterError("replicas must be >= 1");
    if (warmup && !(*warmup > 0.0)) throw ParameterError("warmup M must be > 0");
    if (!(k_sigma > 0.0)) throw ParameterError("k_sigma must be > 0");
    if (!(allowance >= 0.0)) throw ParameterError("allowance must be >= 0");
    if (command == "simulate" && process == "flou" && !(lambda < 0.0)) {
        throw ParameterError("lambda must be < 0 (stationary solution)");
    }
    if (m < 1) throw ParameterError("m must be >= 1");
    if (needs_mixing(*this)) gmflou().validate();
    for (const auto& p : cf_points) {
        if (p.times.empty() || p.times.size() != p.thetas.size()) {
            throw ParameterError("every cf point needs one theta per time");
        }
        for (double t : p.times) {
            if (t < 0.0 || t > grid.horizon) throw ParameterError("cf times must lie in [0, horizon]");
        }
    }
    for (double a : alpha_up) {
        if (!(a > 0.0)) throw ParameterError("alpha values must be > 0");
    }
    for (double a : alpha_down) {
        if (!(a > 0.0)) throw ParameterError("alpha values must be > 0");
    }
    for (std::size_t v : m_axis) {
        if (v < 1) throw ParameterError("m axis values must be >= 1");
    }
    for (int n : n_axis) {
        if (n < 1) throw ParameterError("n axis values must be >= 1");
    }
}

RunConfig config_from_json(const nlohmann::json& doc, RunConfig c) {
    const nlohmann::json& j = doc.contains("config") && doc.at("config").is_object() ? doc.at("config") : doc;
    if (!j.is_object()) throw ParameterError("config must be a JSON object");
    if (doc.contains("seed") && &j != &doc) c.seed = doc.at("seed").get<std::uint64_t>();
    c.command = j.value("command", c.command);
    c.process = j.value("process", c.process);
    c.d = j.value("d", c.d);
    c.h = j.value("h", c.h);
    c.alpha = j.value("alpha", c.alpha);
    c.lambda = j.value("lambda", c.lambda);
    c.m = j.value("m", c.m);
    if (j.contains("levy")) c.spec = levy_spec_from_json(j.at("levy"));
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        c.grid.n = g.value("n", c.grid.n);
        c.grid.horizon = g.value("horizon", c.grid.horizon);
        c.grid.trunc_a_n = g.value("a_n", c.grid.trunc_a_n);
        if (g.contains("warmup") && !g.at("warmup").is_null()) c.warmup = g.at("warmup").get<double>();
    }
    if (j.contains("scheme")) {
        const auto& s = j.at("scheme");
        c.scheme.kind = scheme_kind_from_string(s.value("kind", to_string(c.scheme.kind)));
        const std::string rule = s.value("trunc_rule", std::string(c.scheme.truncation == TruncationRule::Optimal ? "optimal" : "square"));
        if (rule != "square" && rule != "optimal") throw ParameterError("trunc_rule must be square|optimal");
        c.scheme.truncation = rule == "optimal" ? TruncationRule::Optimal : TruncationRule::Square;
        c.scheme.tail_ratio = s.value("tail_ratio", c.scheme.tail_ratio);
        c.scheme.tail_horizon = s.value("tail_horizon", c.scheme.tail_horizon);
    }
    c.replicas = j.value("replicas", c.replicas);
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    c.threads = j.value("threads", c.threads);
    c.out = j.value("out", c.out);
    c.gnuplot = j.value("gnuplot", c.gnuplot);
    c.k_sigma = j.value("k_sigma", c.k_sigma);
    c.allowance = j.value("allowance", c.allowance);
    c.target_scale = j.value("target_scale", c.target_scale);
    if (j.contains("cf_prefactor")) {
        const std::string p = j.at("cf_prefactor").get<std::string>();
        if (p != "inverse_gamma" && p != "literal") throw ParameterError("cf_prefactor must be inverse_gamma|literal");
        c.cf_normalization = p == "literal" ? CfNormalization::LiteralD : CfNormalization::InverseGamma;
    }
    if (j.contains("cf_points")) {
        c.cf_points.clear();
        for (const auto& p : j.at("cf_points")) {
            c.cf_points.push_back({p.at("times").get<std::vector<double>>(), p.at("thetas").get<std::vector<double>>()});
        }
    }
    if (j.contains("converge")) {
        const auto& cv = j.at("converge");
        c.m_axis = cv.value("m", c.m_axis);
        c.alpha_up = cv.value("alpha_up", c.alpha_up);
        c.alpha_down = cv.value("alpha_down", c.alpha_down);
        c.n_axis = cv.value("n", c.n_axis);
        c.converge_time = cv.value("t", c.converge_time);
    }
    return c;
}

nlohmann::json config_to_json(const RunConfig& c) {
    nlohmann::json grid = {{"n", c.grid.n}, {"horizon", c.grid.horizon}, {"a_n", c.grid.trunc_a_n}};
    grid["warmup"] = c.warmup ? nlohmann::json(*c.warmup) : nlohmann::json(nullptr);
    nlohmann::json cf = nlohmann::json::array();
    for (const auto& p : c.cf_points) cf.push_back({{"times", p.times}, {"thetas", p.thetas}});
    return {{"command", c.command},
            {"process", c.process},
            {"d", c.d},
            {"h", c.h},
            {"alpha", c.alpha},
            {"lambda", c.lambda},
            {"m", c.m},
            {"levy", c.spec},
            {"grid", grid},
            {"scheme",
             {{"kind", to_string(c.scheme.kind)},
              {"trunc_rule", c.scheme.truncation == TruncationRule::Optimal ? "optimal" : "square"},
              {"tail_ratio", c.scheme.tail_ratio},
              {"tail_horizon", c.scheme.tail_horizon}}},
            {"replicas", c.replicas},
            {"seed", c.seed},
            {"gnuplot", c.gnuplot},
            {"k_sigma", c.k_sigma},
            {"allowance", c.allowance},
            {"target_scale", c.target_scale},
            {"cf_prefactor", c.cf_normalization == CfNormalization::LiteralD ? "literal" : "inverse_gamma"},
            {"cf_points", cf},
            {"converge",
             {{"m", c.m_axis}, {"alpha_up", c.alpha_up}, {"alpha_down", c.alpha_down}, {"n", c.n_axis}, {"t", c.converge_time}}}};
}

}  // namespace gmflou
