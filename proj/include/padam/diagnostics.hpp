#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "padam/hyperparams.hpp"
#include "padam/optimizer.hpp"
#include "padam/problems.hpp"
#include "padam/vec.hpp"

namespace padam {

// Raised when a bound is queried outside the regime it was proved for
// (gamma >= 1, non-constant step size, illegal q).
struct TheoremInapplicable : std::runtime_error {
    explicit TheoremInapplicable(const std::string& msg) : std::runtime_error(msg) {}
};

struct LemmaReport {
    std::string lemma_id;
    long steps_checked = 0;
    // For inequality checks: max over steps of (LHS - RHS), positive means the
    // bound was exceeded. For identity checks: max normalized discrepancy.
    double max_violation = 0.0;
    long worst_step = 0;
    bool pass = true;
    double tolerance = 0.0;
};

// Constants of the main convergence bound, built from a problem's certified
// (G_inf, L, delta_f) and the run hyperparameters. The expectation
// E||v_hat_1^{-p}||_1 is supplied as a (floored) sample mean.
struct TheoremConstants {
    double g_inf = 0.0;
    double smoothness = 0.0;
    double delta_f = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double p = 0.0;
    double vhat1_inv_p_l1_mean = 0.0;
    int dim = 0;

    static TheoremConstants from(const Problem& problem, const HyperParams& hp,
                                 double vhat1_inv_p_l1_mean);

    double gamma() const;
    double m1() const;        // 2 G^{2p} (f(x1) - inf f)
    double m2() const;        // 4 G^{2+2p} E||v1^{-p}||_1 / (d (1-b1)) + 4 G^2
    double m3(double q) const;
    double m3_prime() const;  // m3 at q = 0
};

struct BoundQuery {
    double q = 0.0;
    long T = 0;
    double alpha = 0.0;
    int dim = 0;
    double sum_hist_norms = 0.0;  // measured sum_i ||g_{1:T,i}||_2
};

// Legal analysis-parameter interval [max(0, 4p-1), 1].
double q_lower_bound(double p);
bool q_is_legal(double q, double p);

// M1/(T a) + M2 d/T + M3(q) a d^q (sum_hist)^{1-q} / T^{(1-q)/2}.
// Refuses gamma >= 1 and illegal q with TheoremInapplicable.
double eval_theorem1_rhs(const TheoremConstants& consts, const BoundQuery& query);

// Specialized bounds for p = 1/2 at alpha = 1/sqrt(dT), coded directly from
// their own constant definitions as an independent route.
struct CorollaryConstants {
    double m1 = 0.0, m2 = 0.0, m3 = 0.0;
};
CorollaryConstants amsgrad_corollary_constants(double g_inf, double smoothness, double delta_f,
                                               double beta1, double beta2,
                                               double vhat1_inv_half_l1_mean, int dim);
CorollaryConstants rmsprop_corollary_constants(double g_inf, double smoothness, double delta_f,
                                               double beta2, double vhat1_inv_half_l1_mean,
                                               int dim);
// M1 sqrt(d)/sqrt(T) + M2 d/T + M3 sqrt(d)/sqrt(T)
double corollary_rhs(const CorollaryConstants& c, int dim, long T);

// ||m_t||_inf <= G, ||v_hat_t||_inf <= G^2, ||grad f(x_t)||_inf <= G at every step.
LemmaReport check_lemma1(const Trajectory& traj, const Problem& problem);

// Weighted-sum bounds on sum_t ||alpha_t V_t^{-p} m_t||^2 (and the g_t
// variant) against their closed-form bounds; LHS taken from the run's online
// accumulators. Requires constant alpha; the m-variant requires gamma < 1.
LemmaReport check_lemma2_m(const RunReport& report, const HyperParams& hp,
                           const Problem& problem, double q);
LemmaReport check_lemma2_g(const RunReport& report, const HyperParams& hp,
                           const Problem& problem, double q);

// Both displayed forms of z_{t+1} - z_t plus the t = 1 identity, verified
// against z computed directly from the iterates.
LemmaReport check_lemma3(const Trajectory& traj);

// ||z_{t+1} - z_t||_2 <= ||alpha_t V_t^{-p} g_t||_2 + b1/(1-b1) ||x_{t-1} - x_t||_2.
LemmaReport check_lemma4(const Trajectory& traj);

// ||grad f(z_t) - grad f(x_t)||_2 <= L b1/(1-b1) ||x_t - x_{t-1}||_2.
LemmaReport check_lemma5(const Trajectory& traj, const Problem& problem);

double measure_stationarity(const Problem& problem, const Vec& x_out);

struct LemmaSuiteResult {
    std::vector<LemmaReport> reports;
    std::vector<std::string> skipped;  // checks whose preconditions fail, with reason
};

// Run every applicable lemma check on one diagnostic-mode run.
LemmaSuiteResult run_lemma_suite(const RunReport& report, const Problem& problem,
                                 const HyperParams& hp, const std::vector<double>& q_grid);

}  // namespace padam
