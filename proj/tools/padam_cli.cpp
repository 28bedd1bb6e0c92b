#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "padam/config.hpp"
#include "padam/diagnostics.hpp"
#include "padam/harness.hpp"
#include "padam/report.hpp"

namespace {

using namespace padam;

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitCheckFailure = 2;

struct Overrides {
    std::string out_dir;
    int threads = -1;
    std::string seeds;
    bool inject_fault = false;
};

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            const std::uint64_t v = std::stoull(item, &pos);
            if (pos != item.size()) throw std::invalid_argument(item);
            seeds.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError("--seeds: cannot parse '" + item + "' as a seed");
        }
    }
    return seeds;
}

RunConfig load_config(const std::string& path, const Overrides& ov) {
    RunConfig cfg = parse_config_file(path);
    if (const char* env = std::getenv("PADAM_OUT")) cfg.output_dir = env;
    if (const char* env = std::getenv("PADAM_THREADS")) {
        try {
            cfg.spec.threads = std::stoi(env);
        } catch (const std::exception&) {
            throw ConfigError("PADAM_THREADS: cannot parse thread count");
        }
    }
    if (!ov.out_dir.empty()) cfg.output_dir = ov.out_dir;
    if (ov.threads >= 0) cfg.spec.threads = ov.threads;
    if (!ov.seeds.empty()) {
        cfg.spec.seeds = parse_seed_list(ov.seeds);
        try {
            ExperimentSpec probe = cfg.spec;
            probe.validate_and_normalize();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    return cfg;
}

int cmd_run(const std::string& config_path, const Overrides& ov) {
    const RunConfig cfg = load_config(config_path, ov);
    const AggregateResult agg = estimate_stationarity(cfg.spec);

    for (const std::string& w : agg.warnings) std::cerr << "warning: " << w << "\n";
    for (const TResult& r : agg.per_T) {
        std::cout << "T=" << r.T << " alpha=" << r.alpha
                  << " mean_stationarity=" << r.mean_stationarity
                  << " stderr=" << r.stderr_stationarity;
        if (r.theorem_checked)
            std::cout << " best_rhs=" << r.best_rhs << " (q=" << r.best_q << ")"
                      << (r.theorem_sound ? "" : " UNSOUND");
        std::cout << "\n";
    }
    if (agg.rate)
        std::cout << "rate: slope=" << agg.rate->slope << " r2=" << agg.rate->r2 << "\n";

    if (cfg.emit_report_json) {
        write_text_file(cfg.output_dir + "/report.json",
                        aggregate_to_json(cfg, agg).dump(2) + "\n");
    }
    if (cfg.emit_csv) {
        write_text_file(cfg.output_dir + "/stationarity.csv", stationarity_csv(cfg, agg));
        write_text_file(cfg.output_dir + "/rate.csv", rate_csv(agg));
    }

    bool sound = agg.all_lemmas_pass;
    for (const TResult& r : agg.per_T)
        if (r.theorem_checked && !r.theorem_sound) sound = false;
    if (!sound) {
        std::cerr << "error: invariant or lemma check failed (see report)\n";
        for (const LemmaReport& rep : agg.lemma_reports)
            if (!rep.pass) std::cerr << lemma_report_to_json(rep).dump() << "\n";
        return kExitCheckFailure;
    }
    return kExitOk;
}

int cmd_verify(const std::string& config_path, const Overrides& ov) {
    const RunConfig cfg = load_config(config_path, ov);
    const VerifyConfig& vc = cfg.verify;

    for (int d : vc.dims) {
        if (vc.T * static_cast<long>(d) > 10'000'000) {
            std::cerr << "error: verify cell T*d = " << vc.T * static_cast<long>(d)
                      << " exceeds the diagnostic cap of 10000000\n";
            return kExitConfigError;
        }
    }

    nlohmann::json cells = nlohmann::json::array();
    std::vector<LemmaReport> failures;
    bool fault_pending = ov.inject_fault;
    long runs_done = 0;

    for (int d : vc.dims) {
        ProblemConfig pc = cfg.spec.problem;
        pc.dim = d;
        const ProblemPtr problem = pc.build();
        for (double p : vc.p_values) {
            for (double beta1 : vc.beta1_values) {
                HyperParams hp = cfg.spec.hp.with_p(p).with_beta1(beta1).with_alpha(
                    AlphaSchedule::constant(cfg.spec.alpha_rule.alpha_for(vc.T, d)));
                nlohmann::json cell{{"d", d}, {"p", p}, {"beta1", beta1}, {"gamma", hp.gamma()}};
                nlohmann::json reports = nlohmann::json::array();
                for (std::uint64_t seed : cfg.spec.seeds) {
                    RunOptions opts;
                    opts.diagnostic = true;
                    RunReport rep = run(*problem, hp, vc.T, seed, OptimizerKind::Padam, opts);
                    ++runs_done;
                    if (fault_pending) {
                        // test hook: corrupt one recorded iterate mid-trajectory
                        auto& records = rep.trajectory->records;
                        records[records.size() / 2].x_after[0] += 1e-3;
                        fault_pending = false;
                    }
                    const LemmaSuiteResult suite =
                        run_lemma_suite(rep, *problem, hp, cfg.spec.q_grid);
                    for (const LemmaReport& lr : suite.reports) {
                        if (!lr.pass) {
                            failures.push_back(lr);
                            reports.push_back(lemma_report_to_json(lr));
                        }
                    }
                    if (!suite.skipped.empty()) cell["skipped"] = suite.skipped;
                }
                cell["failures"] = reports;
                cells.push_back(cell);
            }
        }
    }

    nlohmann::json out{{"schema_version", cfg.schema_version},
                       {"verify_T", vc.T},
                       {"runs", runs_done},
                       {"cells", cells},
                       {"pass", failures.empty()}};
    write_text_file(cfg.output_dir + "/report.json", out.dump(2) + "\n");

    if (!failures.empty()) {
        std::cerr << "error: " << failures.size() << " lemma check(s) failed\n";
        for (const LemmaReport& lr : failures)
            std::cerr << lemma_report_to_json(lr).dump() << "\n";
        return kExitCheckFailure;
    }
    std::cout << "verify: all applicable lemma checks passed over " << runs_done << " runs\n";
    return kExitOk;
}

int cmd_compare(const std::string& config_path, const Overrides& ov) {
    const RunConfig cfg = load_config(config_path, ov);
    const long T = cfg.spec.T_grid.back();
    const ComparisonReport cmp =
        sparse_comparison(cfg.spec.problem, cfg.spec.seeds, T, cfg.spec.hp, cfg.spec.threads,
                          cfg.compare.p_arms, cfg.compare.alpha_grid);
    for (const std::string& w : cmp.warnings) std::cerr << "warning: " << w << "\n";
    for (const ComparisonArm& a : cmp.arms) {
        std::cout << a.label << ": alpha=" << a.alpha << " mean=" << a.mean
                  << " stderr=" << a.stderr_mean << " ratio=" << a.sparsity_ratio
                  << " s=" << a.s_estimate << "\n";
    }
    if (cfg.emit_csv) write_text_file(cfg.output_dir + "/compare.csv", compare_csv(cmp));
    if (cfg.emit_report_json) {
        write_text_file(cfg.output_dir + "/report.json",
                        comparison_to_json(cfg, cmp).dump(2) + "\n");
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Padam / AMSGrad / RMSProp experiment runner"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides ov;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "experiment config file (JSON)")->required();
        sub->add_option("--out", ov.out_dir, "output directory override");
        sub->add_option("--threads", ov.threads, "worker-thread override");
        sub->add_option("--seeds", ov.seeds, "comma-separated seed override");
    };

    CLI::App* sub_run = app.add_subcommand("run", "multi-seed stationarity experiment");
    CLI::App* sub_verify = app.add_subcommand("verify", "lemma suite over the diagnostic matrix");
    CLI::App* sub_compare = app.add_subcommand("compare", "sparse-regime p comparison");
    add_common(sub_run);
    add_common(sub_verify);
    add_common(sub_compare);
    sub_verify->add_flag("--inject-fault", ov.inject_fault,
                         "corrupt one recorded step (test hook)")
        ->group("");  // hidden

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }

    try {
        if (sub_run->parsed()) return cmd_run(config_path, ov);
        if (sub_verify->parsed()) return cmd_verify(config_path, ov);
        if (sub_compare->parsed()) return cmd_compare(config_path, ov);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return kExitConfigError;
}
