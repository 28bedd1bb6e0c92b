#include "padam/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace padam {

using nlohmann::json;

namespace {

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

json config_to_json(const RunConfig& cfg) {
    json problem{{"name", cfg.spec.problem.name},
                 {"dim", cfg.spec.problem.dim},
                 {"seed", cfg.spec.problem.seed}};
    if (cfg.spec.problem.name == "log_smooth") {
        problem["sparsity"] = cfg.spec.problem.sparsity;
        problem["weight_scale"] = cfg.spec.problem.weight_scale;
    } else {
        problem["noise"] = cfg.spec.problem.noise;
    }
    const HyperParams eff = effective_hyperparams(cfg.spec.optimizer, cfg.spec.hp);
    return json{
        {"schema_version", cfg.schema_version},
        {"problem", problem},
        {"optimizer", optimizer_name(cfg.spec.optimizer)},
        {"hyperparams",
         {{"beta1", eff.beta1},
          {"beta2", eff.beta2},
          {"p", eff.p},
          {"eps_floor", eff.eps_floor}}},
        {"alpha_rule",
         {{"kind", AlphaRule::kind_name(cfg.spec.alpha_rule.kind)},
          {"value", cfg.spec.alpha_rule.value}}},
        {"T_grid", cfg.spec.T_grid},
        {"seeds", cfg.spec.seeds},
        {"diagnostic_mode", cfg.spec.diagnostic_mode},
        {"q_grid", cfg.spec.q_grid},
    };
}

json lemma_report_to_json(const LemmaReport& rep) {
    return json{{"lemma_id", rep.lemma_id},
                {"pass", rep.pass},
                {"max_violation", rep.max_violation},
                {"worst_step", rep.worst_step},
                {"steps_checked", rep.steps_checked},
                {"tolerance", rep.tolerance}};
}

json aggregate_to_json(const RunConfig& cfg, const AggregateResult& agg) {
    json results = json::array();
    for (const TResult& r : agg.per_T) {
        json per_seed = json::array();
        for (const RunReport& run : r.runs) {
            per_seed.push_back({{"seed", run.seed},
                                {"out_index", run.out_index},
                                {"grad_norm_sq", run.stationarity},
                                {"sum_hist_norms", run.sum_hist_norms},
                                {"eps_floor_bound_vhat1", run.eps_floor_bound_vhat1},
                                {"mean_nonzero_frac", run.mean_nonzero_frac}});
        }
        json entry{{"T", r.T},
                   {"alpha", r.alpha},
                   {"mean_stationarity", r.mean_stationarity},
                   {"stderr", r.stderr_stationarity},
                   {"mean_sum_hist_norms", r.mean_sum_hist_norms},
                   {"vhat1_inv_p_l1_mean", r.vhat1_inv_p_l1_mean},
                   {"eps_floor_bound", r.eps_floor_flag},
                   {"per_seed", per_seed}};
        if (r.theorem_checked) {
            json rhs = json::array();
            for (const TheoremCheck& tc : r.theorem_rhs)
                rhs.push_back({{"q", tc.q}, {"rhs", tc.rhs_mean}});
            entry["theorem_rhs"] = rhs;
            entry["theorem_sound"] = r.theorem_sound;
            entry["best_q"] = r.best_q;
            entry["best_rhs"] = r.best_rhs;
        }
        results.push_back(entry);
    }

    json out{{"schema_version", cfg.schema_version},
             {"config", config_to_json(cfg)},
             {"gamma", agg.gamma},
             {"theorem_applicable", agg.theorem_applicable},
             {"warnings", agg.warnings},
             {"results", results}};
    if (agg.rate) {
        out["rate_fit"] = {{"slope", agg.rate->slope},
                           {"r2", agg.rate->r2},
                           {"points_used", agg.rate->points_used}};
    }
    json lemmas = json::array();
    for (const LemmaReport& rep : agg.lemma_reports) lemmas.push_back(lemma_report_to_json(rep));
    out["lemmas"] = lemmas;
    out["lemmas_skipped"] = agg.lemma_skipped;
    out["all_lemmas_pass"] = agg.all_lemmas_pass;
    return out;
}

json comparison_to_json(const RunConfig& cfg, const ComparisonReport& cmp) {
    json arms = json::array();
    for (const ComparisonArm& a : cmp.arms) {
        arms.push_back({{"arm", a.label},
                        {"p", a.p},
                        {"alpha", a.alpha},
                        {"mean", a.mean},
                        {"stderr", a.stderr_mean},
                        {"sparsity_ratio", a.sparsity_ratio},
                        {"s_estimate", a.s_estimate}});
    }
    return json{{"schema_version", cfg.schema_version},
                {"config", config_to_json(cfg)},
                {"T", cmp.T},
                {"arms", arms},
                {"warnings", cmp.warnings}};
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
    if (!out) throw std::runtime_error("short write to '" + path + "'");
}

std::string stationarity_csv(const RunConfig& cfg, const AggregateResult& agg) {
    const HyperParams eff = effective_hyperparams(cfg.spec.optimizer, cfg.spec.hp);
    std::string out = "optimizer,p,d,T,seed,grad_norm_sq,sum_hist_norms,alpha\n";
    for (const TResult& r : agg.per_T) {
        for (const RunReport& run : r.runs) {
            out += optimizer_name(cfg.spec.optimizer);
            out += ',' + csv_num(eff.p);
            out += ',' + std::to_string(cfg.spec.problem.dim);
            out += ',' + std::to_string(r.T);
            out += ',' + std::to_string(run.seed);
            out += ',' + csv_num(run.stationarity);
            out += ',' + csv_num(run.sum_hist_norms);
            out += ',' + csv_num(r.alpha);
            out += '\n';
        }
    }
    return out;
}

std::string rate_csv(const AggregateResult& agg) {
    std::string out = "T,mean,stderr,fitted_slope\n";
    for (const TResult& r : agg.per_T) {
        out += std::to_string(r.T);
        out += ',' + csv_num(r.mean_stationarity);
        out += ',' + csv_num(r.stderr_stationarity);
        out += ',';
        if (agg.rate) out += csv_num(agg.rate->slope);
        out += '\n';
    }
    return out;
}

std::string compare_csv(const ComparisonReport& cmp) {
    std::string out = "arm,p,alpha,mean,stderr,sparsity_ratio,s_estimate\n";
    for (const ComparisonArm& a : cmp.arms) {
        out += a.label;
        out += ',' + csv_num(a.p);
        out += ',' + csv_num(a.alpha);
        out += ',' + csv_num(a.mean);
        out += ',' + csv_num(a.stderr_mean);
        out += ',' + csv_num(a.sparsity_ratio);
        out += ',' + csv_num(a.s_estimate);
        out += '\n';
    }
    return out;
}

}  // namespace padam
