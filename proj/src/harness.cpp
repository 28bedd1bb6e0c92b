#include "padam/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "padam/stats.hpp"

namespace padam {

namespace {

constexpr long kDiagnosticCap = 10'000'000;  // T*d limit for stored trajectories

}  // namespace

double AlphaRule::alpha_for(long T, int dim) const {
    switch (kind) {
        case Kind::Fixed: return value;
        case Kind::OneOverSqrtT: return value / std::sqrt(static_cast<double>(T));
        case Kind::OneOverSqrtDT:
            return value / std::sqrt(static_cast<double>(dim) * static_cast<double>(T));
    }
    return value;
}

const char* AlphaRule::kind_name(Kind k) {
    switch (k) {
        case Kind::Fixed: return "fixed";
        case Kind::OneOverSqrtT: return "one_over_sqrt_T";
        case Kind::OneOverSqrtDT: return "one_over_sqrt_dT";
    }
    return "unknown";
}

ProblemPtr ProblemConfig::build() const {
    if (name == "log_smooth") return make_log_smooth(dim, sparsity, seed, weight_scale);
    if (name == "noisy_quadratic_bounded")
        return make_noisy_quadratic_bounded(dim, seed, noise);
    throw std::invalid_argument("problem.name: unknown problem '" + name + "'");
}

OptimizerKind optimizer_from_name(const std::string& name) {
    if (name == "padam") return OptimizerKind::Padam;
    if (name == "amsgrad") return OptimizerKind::AmsGrad;
    if (name == "rmsprop") return OptimizerKind::RmsProp;
    if (name == "sgd") return OptimizerKind::Sgd;
    throw std::invalid_argument("optimizer: unknown optimizer '" + name + "'");
}

void ExperimentSpec::validate_and_normalize() {
    hp.validate();
    if (!(alpha_rule.value > 0.0))
        throw std::invalid_argument("alpha_rule.value: must be > 0");
    if (T_grid.empty()) throw std::invalid_argument("T_grid: must be non-empty");
    for (long T : T_grid)
        if (T < 2) throw std::invalid_argument("T_grid: every T must be >= 2");
    if (!std::is_sorted(T_grid.begin(), T_grid.end()))
        throw std::invalid_argument("T_grid: must be sorted ascending");
    if (seeds.size() < 3)
        throw std::invalid_argument("seeds: at least 3 seeds are required for an "
                                    "expectation estimate");
    std::sort(seeds.begin(), seeds.end());
    if (std::adjacent_find(seeds.begin(), seeds.end()) != seeds.end())
        throw std::invalid_argument("seeds: duplicate seed values");
    for (double q : q_grid)
        if (!(q >= 0.0 && q <= 1.0))
            throw std::invalid_argument("q_grid: q values must lie in [0, 1]");
    if (diagnostic_mode) {
        const long worst_T = T_grid.back();
        if (worst_T * static_cast<long>(problem.dim) > kDiagnosticCap)
            throw std::invalid_argument(
                "diagnostic_mode: T*d = " + std::to_string(worst_T * problem.dim) +
                " exceeds the cap of " + std::to_string(kDiagnosticCap));
    }
}

void parallel_for(long n, int threads, const std::function<void(long)>& fn) {
    if (n <= 0) return;
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = static_cast<int>(std::min<long>(workers, n));
    if (workers == 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const long i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

namespace {

// Worst report per lemma id across runs: max violation wins, pass only if
// every instance passed, steps summed.
void merge_lemma_reports(std::map<std::string, LemmaReport>& merged,
                         const std::vector<LemmaReport>& reports) {
    for (const LemmaReport& r : reports) {
        auto it = merged.find(r.lemma_id);
        if (it == merged.end()) {
            merged.emplace(r.lemma_id, r);
            continue;
        }
        LemmaReport& m = it->second;
        const long steps = m.steps_checked + r.steps_checked;
        const bool pass = m.pass && r.pass;
        if (r.max_violation > m.max_violation) m = r;
        m.steps_checked = steps;
        m.pass = pass;
    }
}

}  // namespace

AggregateResult estimate_stationarity(const ExperimentSpec& spec_in) {
    ExperimentSpec spec = spec_in;
    spec.validate_and_normalize();

    const ProblemPtr problem = spec.problem.build();
    const HyperParams eff_hp = effective_hyperparams(spec.optimizer, spec.hp);

    AggregateResult agg;
    agg.gamma = eff_hp.gamma();
    agg.theorem_applicable = agg.gamma < 1.0;
    if (!agg.theorem_applicable) {
        agg.warnings.push_back("Theorem inapplicable: gamma = " + std::to_string(agg.gamma) +
                               " >= 1 (beta1 >= beta2^{2p}); bound evaluation skipped");
    }

    std::map<std::string, LemmaReport> merged_lemmas;
    std::vector<std::string> skipped;

    for (long T : spec.T_grid) {
        TResult res;
        res.T = T;
        res.alpha = spec.alpha_rule.alpha_for(T, spec.problem.dim);
        const HyperParams hp_T = spec.hp.with_alpha(AlphaSchedule::constant(res.alpha));
        const HyperParams eff_hp_T = effective_hyperparams(spec.optimizer, hp_T);

        res.runs.resize(spec.seeds.size());
        RunOptions opts;
        opts.diagnostic = spec.diagnostic_mode;
        parallel_for(static_cast<long>(spec.seeds.size()), spec.threads, [&](long i) {
            res.runs[static_cast<std::size_t>(i)] =
                run(*problem, hp_T, T, spec.seeds[static_cast<std::size_t>(i)],
                    spec.optimizer, opts);
        });

        std::vector<double> st, shn, v1;
        st.reserve(res.runs.size());
        for (const RunReport& r : res.runs) {
            st.push_back(r.stationarity);
            shn.push_back(r.sum_hist_norms);
            v1.push_back(r.vhat1_inv_p_l1);
            res.eps_floor_flag = res.eps_floor_flag || r.eps_floor_bound_vhat1;
        }
        res.mean_stationarity = mean_of(st);
        res.stderr_stationarity = stderr_of(st);
        res.mean_sum_hist_norms = mean_of(shn);
        res.vhat1_inv_p_l1_mean = mean_of(v1);
        if (res.eps_floor_flag) {
            agg.warnings.push_back("T=" + std::to_string(T) +
                                   ": eps floor bound v_hat_1 (sparse first gradients); "
                                   "E||v_hat_1^{-p}||_1 uses the floored estimate");
        }

        if (agg.theorem_applicable) {
            res.theorem_checked = true;
            const TheoremConstants consts =
                TheoremConstants::from(*problem, eff_hp_T, res.vhat1_inv_p_l1_mean);
            double best = std::numeric_limits<double>::infinity();
            double best_q = 0.0;
            for (double q : spec.q_grid) {
                if (!q_is_legal(q, eff_hp_T.p)) continue;
                std::vector<double> rhs_vals;
                rhs_vals.reserve(res.runs.size());
                for (const RunReport& r : res.runs) {
                    BoundQuery query{q, T, res.alpha, spec.problem.dim, r.sum_hist_norms};
                    rhs_vals.push_back(eval_theorem1_rhs(consts, query));
                }
                const double rhs_mean = mean_of(rhs_vals);
                res.theorem_rhs.push_back({q, rhs_mean});
                if (rhs_mean < best) {
                    best = rhs_mean;
                    best_q = q;
                }
            }
            if (!res.theorem_rhs.empty()) {
                res.best_q = best_q;
                res.best_rhs = best;
                res.theorem_sound = res.mean_stationarity <= best * (1.0 + 1e-12);
                if (!res.theorem_sound) {
                    agg.warnings.push_back(
                        "T=" + std::to_string(T) +
                        ": pathwise theorem surrogate violated (mean stationarity " +
                        std::to_string(res.mean_stationarity) + " > best RHS " +
                        std::to_string(best) + ")");
                }
            } else {
                res.theorem_checked = false;
            }
        }

        if (spec.diagnostic_mode) {
            for (const RunReport& r : res.runs) {
                LemmaSuiteResult suite = run_lemma_suite(r, *problem, eff_hp_T, spec.q_grid);
                merge_lemma_reports(merged_lemmas, suite.reports);
                for (const std::string& s : suite.skipped)
                    if (std::find(skipped.begin(), skipped.end(), s) == skipped.end())
                        skipped.push_back(s);
            }
        }

        agg.per_T.push_back(std::move(res));
    }

    for (auto& [id, rep] : merged_lemmas) {
        agg.all_lemmas_pass = agg.all_lemmas_pass && rep.pass;
        agg.lemma_reports.push_back(rep);
    }
    agg.lemma_skipped = std::move(skipped);

    if (spec.T_grid.size() >= 3) {
        std::vector<long> Ts;
        std::vector<double> means;
        for (const TResult& r : agg.per_T) {
            Ts.push_back(r.T);
            means.push_back(r.mean_stationarity);
        }
        try {
            agg.rate = fit_rate(Ts, means);
        } catch (const std::exception& e) {
            agg.warnings.push_back(std::string("rate fit skipped: ") + e.what());
        }
    }
    return agg;
}

RateFit fit_rate(const std::vector<long>& T_values, const std::vector<double>& means) {
    if (T_values.size() != means.size())
        throw std::invalid_argument("fit_rate: size mismatch");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < means.size(); ++i) {
        if (!(means[i] > 0.0)) continue;  // excluded point
        lx.push_back(std::log(static_cast<double>(T_values[i])));
        ly.push_back(std::log(means[i]));
    }
    if (lx.size() < 3)
        throw std::invalid_argument("fit_rate: fewer than 3 positive means remain");
    const LinearFit f = linear_fit(lx, ly);
    return RateFit{f.slope, f.r2, static_cast<int>(lx.size())};
}

ComparisonReport sparse_comparison(const ProblemConfig& problem_cfg,
                                   const std::vector<std::uint64_t>& seeds, long T,
                                   const HyperParams& hp_base, int threads,
                                   const std::vector<double>& p_arms,
                                   const std::vector<double>& alpha_grid) {
    if (seeds.size() < 3)
        throw std::invalid_argument("sparse_comparison: at least 3 seeds required");
    if (T < 2) throw std::invalid_argument("sparse_comparison: T must be >= 2");
    if (p_arms.empty() || alpha_grid.empty())
        throw std::invalid_argument("sparse_comparison: empty arm or alpha grid");

    const ProblemPtr problem = problem_cfg.build();
    ComparisonReport report;
    report.T = T;
    if (problem->sparsity() > 0.1) {
        report.warnings.push_back("problem sparsity " + std::to_string(problem->sparsity()) +
                                  " > 0.1: outside the sparse regime, ordering not expected");
    }

    const double sqrt_T = std::sqrt(static_cast<double>(T));
    const double sqrt_dT =
        std::sqrt(static_cast<double>(problem->dim()) * static_cast<double>(T));
    const double log_d = std::log(static_cast<double>(problem->dim()));

    std::vector<std::uint64_t> sorted_seeds = seeds;
    std::sort(sorted_seeds.begin(), sorted_seeds.end());

    for (double p : p_arms) {
        ComparisonArm arm;
        arm.p = p;
        char label[32];
        std::snprintf(label, sizeof(label), "p=%g", p);
        arm.label = label;

        double best_mean = std::numeric_limits<double>::infinity();
        std::vector<RunReport> best_runs;
        double best_alpha = 0.0;
        for (double c : alpha_grid) {
            const double alpha = c / sqrt_T;
            const HyperParams hp =
                hp_base.with_p(p).with_alpha(AlphaSchedule::constant(alpha));
            std::vector<RunReport> runs(sorted_seeds.size());
            parallel_for(static_cast<long>(sorted_seeds.size()), threads, [&](long i) {
                runs[static_cast<std::size_t>(i)] =
                    run(*problem, hp, T, sorted_seeds[static_cast<std::size_t>(i)]);
            });
            std::vector<double> st;
            st.reserve(runs.size());
            for (const RunReport& r : runs) st.push_back(r.stationarity);
            const double m = mean_of(st);
            if (m < best_mean) {
                best_mean = m;
                best_alpha = alpha;
                best_runs = std::move(runs);
            }
        }

        arm.alpha = best_alpha;
        arm.mean = best_mean;
        std::vector<double> st, ratios, s_vals;
        for (const RunReport& r : best_runs) {
            st.push_back(r.stationarity);
            ratios.push_back(r.sum_hist_norms / sqrt_dT);
            if (problem->dim() > 1 && r.sum_hist_norms > 0.0)
                s_vals.push_back(std::log(r.sum_hist_norms / sqrt_T) / log_d);
        }
        arm.stderr_mean = stderr_of(st);
        arm.sparsity_ratio = mean_of(ratios);
        arm.s_estimate = s_vals.empty() ? 0.0 : mean_of(s_vals);
        report.arms.push_back(std::move(arm));
    }
    return report;
}

}  // namespace padam
