#include "padam/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace padam {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& scope,
                         const std::set<std::string>& known) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!known.count(it.key()))
            throw ConfigError("unknown key '" + scope + it.key() + "'");
    }
}

template <typename T>
T require(const json& obj, const std::string& scope, const std::string& key) {
    if (!obj.contains(key)) throw ConfigError("missing required key '" + scope + key + "'");
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("key '" + scope + key + "' has the wrong type");
    }
}

template <typename T>
T optional_of(const json& obj, const std::string& scope, const std::string& key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("key '" + scope + key + "' has the wrong type");
    }
}

ProblemConfig parse_problem(const json& obj) {
    if (!obj.is_object()) throw ConfigError("'problem' must be an object");
    reject_unknown_keys(obj, "problem.",
                        {"name", "dim", "sparsity", "seed", "weight_scale", "noise"});
    ProblemConfig p;
    p.name = require<std::string>(obj, "problem.", "name");
    if (p.name != "log_smooth" && p.name != "noisy_quadratic_bounded")
        throw ConfigError("key 'problem.name': unknown problem '" + p.name + "'");
    p.dim = require<int>(obj, "problem.", "dim");
    if (p.dim < 1) throw ConfigError("key 'problem.dim': must be >= 1");
    p.seed = require<std::uint64_t>(obj, "problem.", "seed");
    if (p.name == "log_smooth") {
        p.sparsity = require<double>(obj, "problem.", "sparsity");
        if (!(p.sparsity > 0.0 && p.sparsity <= 1.0))
            throw ConfigError("key 'problem.sparsity': must lie in (0, 1]");
        p.weight_scale = optional_of<double>(obj, "problem.", "weight_scale", 1.0);
        if (!(p.weight_scale > 0.0 && p.weight_scale <= 1.0))
            throw ConfigError("key 'problem.weight_scale': must lie in (0, 1]");
        if (obj.contains("noise"))
            throw ConfigError("key 'problem.noise': only valid for noisy_quadratic_bounded");
    } else {
        p.noise = optional_of<double>(obj, "problem.", "noise", 0.1);
        if (!(p.noise >= 0.0)) throw ConfigError("key 'problem.noise': must be >= 0");
        if (obj.contains("sparsity"))
            throw ConfigError("key 'problem.sparsity': only valid for log_smooth");
        if (obj.contains("weight_scale"))
            throw ConfigError("key 'problem.weight_scale': only valid for log_smooth");
        p.sparsity = 1.0;
    }
    return p;
}

HyperParams parse_hyperparams(const json& obj) {
    if (!obj.is_object()) throw ConfigError("'hyperparams' must be an object");
    reject_unknown_keys(obj, "hyperparams.", {"beta1", "beta2", "p", "eps_floor"});
    HyperParams hp;
    hp.beta1 = optional_of<double>(obj, "hyperparams.", "beta1", 0.9);
    hp.beta2 = optional_of<double>(obj, "hyperparams.", "beta2", 0.999);
    hp.p = optional_of<double>(obj, "hyperparams.", "p", 0.25);
    hp.eps_floor = optional_of<double>(obj, "hyperparams.", "eps_floor", 1e-12);
    if (!(hp.beta1 >= 0.0 && hp.beta1 < 1.0))
        throw ConfigError("key 'hyperparams.beta1': must lie in [0, 1)");
    if (!(hp.beta2 > 0.0 && hp.beta2 < 1.0))
        throw ConfigError("key 'hyperparams.beta2': must lie in (0, 1)");
    if (!(hp.p >= 0.0 && hp.p <= 0.5))
        throw ConfigError("key 'hyperparams.p': violates the p in [0, 1/2] constraint");
    if (!(hp.eps_floor > 0.0)) throw ConfigError("key 'hyperparams.eps_floor': must be > 0");
    return hp;
}

AlphaRule parse_alpha_rule(const json& obj) {
    if (!obj.is_object()) throw ConfigError("'alpha_rule' must be an object");
    reject_unknown_keys(obj, "alpha_rule.", {"kind", "value"});
    AlphaRule rule;
    const std::string kind = require<std::string>(obj, "alpha_rule.", "kind");
    if (kind == "fixed") rule.kind = AlphaRule::Kind::Fixed;
    else if (kind == "one_over_sqrt_T") rule.kind = AlphaRule::Kind::OneOverSqrtT;
    else if (kind == "one_over_sqrt_dT") rule.kind = AlphaRule::Kind::OneOverSqrtDT;
    else
        throw ConfigError("key 'alpha_rule.kind': expected one of fixed, one_over_sqrt_T, "
                          "one_over_sqrt_dT");
    rule.value = require<double>(obj, "alpha_rule.", "value");
    if (!(rule.value > 0.0)) throw ConfigError("key 'alpha_rule.value': must be > 0");
    return rule;
}

CompareConfig parse_compare(const json& obj) {
    if (!obj.is_object()) throw ConfigError("'compare' must be an object");
    reject_unknown_keys(obj, "compare.", {"p_arms", "alpha_grid"});
    CompareConfig c;
    c.p_arms = optional_of<std::vector<double>>(obj, "compare.", "p_arms", c.p_arms);
    c.alpha_grid = optional_of<std::vector<double>>(obj, "compare.", "alpha_grid", c.alpha_grid);
    for (double p : c.p_arms)
        if (!(p >= 0.0 && p <= 0.5))
            throw ConfigError("key 'compare.p_arms': violates the p in [0, 1/2] constraint");
    for (double a : c.alpha_grid)
        if (!(a > 0.0)) throw ConfigError("key 'compare.alpha_grid': entries must be > 0");
    return c;
}

VerifyConfig parse_verify(const json& obj) {
    if (!obj.is_object()) throw ConfigError("'verify' must be an object");
    reject_unknown_keys(obj, "verify.", {"T", "dims", "p_values", "beta1_values"});
    VerifyConfig v;
    v.T = optional_of<long>(obj, "verify.", "T", v.T);
    if (v.T < 2) throw ConfigError("key 'verify.T': must be >= 2");
    v.dims = optional_of<std::vector<int>>(obj, "verify.", "dims", v.dims);
    v.p_values = optional_of<std::vector<double>>(obj, "verify.", "p_values", v.p_values);
    v.beta1_values =
        optional_of<std::vector<double>>(obj, "verify.", "beta1_values", v.beta1_values);
    for (int d : v.dims)
        if (d < 1) throw ConfigError("key 'verify.dims': entries must be >= 1");
    for (double p : v.p_values)
        if (!(p >= 0.0 && p <= 0.5))
            throw ConfigError("key 'verify.p_values': violates the p in [0, 1/2] constraint");
    for (double b : v.beta1_values)
        if (!(b >= 0.0 && b < 1.0))
            throw ConfigError("key 'verify.beta1_values': must lie in [0, 1)");
    return v;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be a JSON object");
    reject_unknown_keys(root, "",
                        {"schema_version", "problem", "optimizer", "hyperparams", "alpha_rule",
                         "T_grid", "seeds", "diagnostic_mode", "q_grid", "output_dir",
                         "emit_report_json", "emit_csv", "threads", "compare", "verify"});

    RunConfig cfg;
    cfg.schema_version = require<int>(root, "", "schema_version");
    if (cfg.schema_version != 1)
        throw ConfigError("key 'schema_version': unsupported version " +
                          std::to_string(cfg.schema_version) + " (expected 1)");

    cfg.spec.problem = parse_problem(require<json>(root, "", "problem"));
    cfg.spec.optimizer = [&] {
        const std::string name = require<std::string>(root, "", "optimizer");
        try {
            return optimizer_from_name(name);
        } catch (const std::invalid_argument&) {
            throw ConfigError("key 'optimizer': expected one of padam, amsgrad, rmsprop, sgd");
        }
    }();
    if (root.contains("hyperparams")) cfg.spec.hp = parse_hyperparams(root.at("hyperparams"));
    else cfg.spec.hp = parse_hyperparams(json::object());
    cfg.spec.alpha_rule = parse_alpha_rule(require<json>(root, "", "alpha_rule"));

    cfg.spec.T_grid = require<std::vector<long>>(root, "", "T_grid");
    if (root.contains("seeds")) {
        cfg.spec.seeds = require<std::vector<std::uint64_t>>(root, "", "seeds");
    } else {
        cfg.spec.seeds.clear();  // default: 20 seeds, enough to resolve factor-2 gaps
        for (std::uint64_t s = 1; s <= 20; ++s) cfg.spec.seeds.push_back(s);
    }
    cfg.spec.diagnostic_mode = optional_of<bool>(root, "", "diagnostic_mode", false);
    cfg.spec.q_grid =
        optional_of<std::vector<double>>(root, "", "q_grid", cfg.spec.q_grid);
    cfg.spec.threads = optional_of<int>(root, "", "threads", 0);
    if (cfg.spec.threads < 0) throw ConfigError("key 'threads': must be >= 0");

    cfg.output_dir = optional_of<std::string>(root, "", "output_dir", "out");
    cfg.emit_report_json = optional_of<bool>(root, "", "emit_report_json", true);
    cfg.emit_csv = optional_of<bool>(root, "", "emit_csv", true);
    if (root.contains("compare")) cfg.compare = parse_compare(root.at("compare"));
    if (root.contains("verify")) cfg.verify = parse_verify(root.at("verify"));

    // experiment-level invariants (sorted T grid, >= 3 seeds, ...) reported
    // as config errors with the library's message
    try {
        ExperimentSpec probe = cfg.spec;
        probe.validate_and_normalize();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace padam
