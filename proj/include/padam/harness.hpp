#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "padam/diagnostics.hpp"
#include "padam/optimizer.hpp"
#include "padam/problems.hpp"

namespace padam {

// Step-size selection rule across the T grid. Each rule yields a constant
// within-run step size for a given (T, d).
struct AlphaRule {
    enum class Kind { Fixed, OneOverSqrtT, OneOverSqrtDT };
    Kind kind = Kind::Fixed;
    double value = 0.01;  // alpha for Fixed, the constant c otherwise

    double alpha_for(long T, int dim) const;
    static const char* kind_name(Kind k);
};

struct ProblemConfig {
    std::string name = "log_smooth";
    int dim = 10;
    double sparsity = 1.0;
    std::uint64_t seed = 1;
    double weight_scale = 1.0;  // log_smooth only
    double noise = 0.1;         // noisy_quadratic_bounded only

    ProblemPtr build() const;
};

struct ExperimentSpec {
    ProblemConfig problem;
    OptimizerKind optimizer = OptimizerKind::Padam;
    HyperParams hp;  // alpha schedule is supplied per T by alpha_rule
    AlphaRule alpha_rule;
    std::vector<long> T_grid;
    std::vector<std::uint64_t> seeds;
    bool diagnostic_mode = false;
    std::vector<double> q_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
    int threads = 0;  // 0 = hardware concurrency

    // Sorts seeds (aggregation is a fold ordered by seed value) and checks
    // the invariants; throws std::invalid_argument naming the field.
    void validate_and_normalize();
};

struct TheoremCheck {
    double q = 0.0;
    double rhs_mean = 0.0;  // seed-averaged bound value
};

struct TResult {
    long T = 0;
    double alpha = 0.0;
    double mean_stationarity = 0.0;
    double stderr_stationarity = 0.0;
    double mean_sum_hist_norms = 0.0;
    double vhat1_inv_p_l1_mean = 0.0;
    bool eps_floor_flag = false;  // the floor bound v_hat_1 in at least one run
    std::vector<RunReport> runs;  // ordered by seed
    bool theorem_checked = false;
    std::vector<TheoremCheck> theorem_rhs;
    bool theorem_sound = false;  // mean stationarity <= best RHS over the q grid
    double best_q = 0.0;
    double best_rhs = 0.0;
};

struct RateFit {
    double slope = 0.0;
    double r2 = 0.0;
    int points_used = 0;
};

struct AggregateResult {
    double gamma = 0.0;
    bool theorem_applicable = false;
    std::vector<std::string> warnings;
    std::vector<TResult> per_T;
    std::optional<RateFit> rate;
    // worst instance per lemma id over all diagnostic runs
    std::vector<LemmaReport> lemma_reports;
    std::vector<std::string> lemma_skipped;
    bool all_lemmas_pass = true;
};

// Multi-seed expectation estimate over the T grid, with the theorem bound
// attached per q whenever the run is in the proved regime, and the lemma
// suite rolled up in diagnostic mode.
AggregateResult estimate_stationarity(const ExperimentSpec& spec);

// Log-log slope of mean stationarity against T. Nonpositive means are
// excluded; fewer than 3 surviving points is an error.
RateFit fit_rate(const std::vector<long>& T_values, const std::vector<double>& means);

struct ComparisonArm {
    std::string label;
    double p = 0.0;
    double alpha = 0.0;   // tuned per arm over the grid
    double mean = 0.0;
    double stderr_mean = 0.0;
    double sparsity_ratio = 0.0;  // sum_i ||g_{1:T,i}||_2 / sqrt(dT), seed-averaged
    double s_estimate = 0.0;      // log(sum/sqrt(T)) / log(d), seed-averaged
};

struct ComparisonReport {
    long T = 0;
    std::vector<ComparisonArm> arms;
    std::vector<std::string> warnings;
};

// Padam p in {1/8, 1/4} against AMSGrad (p = 1/2) on a sparse problem with
// per-arm constant alpha tuned over grid/sqrt(T), identical seeds per arm.
ComparisonReport sparse_comparison(const ProblemConfig& problem,
                                   const std::vector<std::uint64_t>& seeds, long T,
                                   const HyperParams& hp_base, int threads,
                                   const std::vector<double>& p_arms = {0.125, 0.25, 0.5},
                                   const std::vector<double>& alpha_grid = {0.5, 0.2, 0.1,
                                                                            0.05, 0.02});

// Run fn(i) for i in [0, n) on `threads` workers (0 = hardware concurrency).
// Results must be written to pre-sized slots; completion order is irrelevant.
void parallel_for(long n, int threads, const std::function<void(long)>& fn);

OptimizerKind optimizer_from_name(const std::string& name);

}  // namespace padam
