#include "padam/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace padam {

namespace {

constexpr double kIdentityTol = 1e-9;
constexpr double kInequalityTol = 1e-12;

std::string fmt_q(double q) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", q);
    return buf;
}

// Track the worst inequality evaluation: raw violation plus a normalized one
// that decides pass/fail (1e-12 * (|lhs| + |rhs|) slack for rounding).
struct IneqTracker {
    double max_violation = -std::numeric_limits<double>::infinity();
    double max_normalized = 0.0;
    long worst_step = 0;
    long count = 0;

    void observe(double lhs, double rhs, long step) {
        ++count;
        const double viol = lhs - rhs;
        if (viol > max_violation) {
            max_violation = viol;
            worst_step = step;
        }
        const double scale = std::abs(lhs) + std::abs(rhs);
        const double norm = scale > 0.0 ? viol / scale : viol;
        max_normalized = std::max(max_normalized, norm);
    }

    LemmaReport report(std::string id) const {
        LemmaReport r;
        r.lemma_id = std::move(id);
        r.steps_checked = count;
        r.max_violation = count > 0 ? max_violation : 0.0;
        r.worst_step = worst_step;
        r.tolerance = kInequalityTol;
        r.pass = max_normalized <= kInequalityTol;
        return r;
    }
};

double floored_pow_l2(const Vec& v_hat, const Vec& y, double alpha, double p, double eps) {
    double sq = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double e = alpha * inv_vhat_pow(v_hat[i], p, eps) * y[i];
        sq += e * e;
    }
    return std::sqrt(sq);
}

}  // namespace

TheoremConstants TheoremConstants::from(const Problem& problem, const HyperParams& hp,
                                        double vhat1_inv_p_l1_mean) {
    TheoremConstants c;
    c.g_inf = problem.g_inf();
    c.smoothness = problem.smoothness();
    c.delta_f = problem.delta_f();
    c.beta1 = hp.beta1;
    c.beta2 = hp.beta2;
    c.p = hp.p;
    c.vhat1_inv_p_l1_mean = vhat1_inv_p_l1_mean;
    c.dim = problem.dim();
    return c;
}

double TheoremConstants::gamma() const {
    HyperParams h;
    h.beta1 = beta1;
    h.beta2 = beta2;
    h.p = p;
    return h.gamma();
}

double TheoremConstants::m1() const { return 2.0 * std::pow(g_inf, 2.0 * p) * delta_f; }

double TheoremConstants::m2() const {
    return 4.0 * std::pow(g_inf, 2.0 + 2.0 * p) * vhat1_inv_p_l1_mean /
               (static_cast<double>(dim) * (1.0 - beta1)) +
           4.0 * g_inf * g_inf;
}

double TheoremConstants::m3(double q) const {
    const double gpow = std::pow(g_inf, 1.0 + q - 2.0 * p);
    const double b2pow = std::pow(1.0 - beta2, 2.0 * p);
    const double first = 4.0 * smoothness * gpow / b2pow;
    if (beta1 == 0.0) return first;
    const double momentum = beta1 / (1.0 - beta1);
    const double second = 8.0 * smoothness * gpow * (1.0 - beta1) /
                          (b2pow * (1.0 - gamma())) * momentum * momentum;
    return first + second;
}

double TheoremConstants::m3_prime() const { return m3(0.0); }

double q_lower_bound(double p) { return std::max(0.0, 4.0 * p - 1.0); }

bool q_is_legal(double q, double p) { return q >= q_lower_bound(p) && q <= 1.0; }

double eval_theorem1_rhs(const TheoremConstants& consts, const BoundQuery& query) {
    if (!(consts.gamma() < 1.0)) {
        throw TheoremInapplicable("Theorem inapplicable: gamma = " +
                                  std::to_string(consts.gamma()) +
                                  " >= 1 (requires beta1 < beta2^{2p})");
    }
    if (!q_is_legal(query.q, consts.p)) {
        throw TheoremInapplicable("Theorem inapplicable: q = " + std::to_string(query.q) +
                                  " outside [max(0, 4p-1), 1] = [" +
                                  std::to_string(q_lower_bound(consts.p)) + ", 1]");
    }
    if (query.T < 1 || !(query.alpha > 0.0))
        throw std::invalid_argument("eval_theorem1_rhs: need T >= 1 and alpha > 0");
    if (query.dim != consts.dim)
        throw std::invalid_argument("eval_theorem1_rhs: query dim " +
                                    std::to_string(query.dim) + " != constants dim " +
                                    std::to_string(consts.dim));
    const double T = static_cast<double>(query.T);
    const double d = static_cast<double>(query.dim);
    const double term1 = consts.m1() / (T * query.alpha);
    const double term2 = consts.m2() * d / T;
    const double term3 = consts.m3(query.q) * query.alpha * std::pow(d, query.q) *
                         std::pow(query.sum_hist_norms, 1.0 - query.q) /
                         std::pow(T, (1.0 - query.q) / 2.0);
    return term1 + term2 + term3;
}

CorollaryConstants amsgrad_corollary_constants(double g_inf, double smoothness, double delta_f,
                                               double beta1, double beta2,
                                               double vhat1_inv_half_l1_mean, int dim) {
    CorollaryConstants c;
    c.m1 = 2.0 * g_inf * delta_f;
    c.m2 = 4.0 * std::pow(g_inf, 3.0) * vhat1_inv_half_l1_mean /
               (static_cast<double>(dim) * (1.0 - beta1)) +
           4.0 * g_inf * g_inf;
    const double momentum = beta1 / (1.0 - beta1);
    c.m3 = 4.0 * smoothness * g_inf / (1.0 - beta2);
    if (beta1 != 0.0) {
        c.m3 += 8.0 * smoothness * g_inf * (1.0 - beta1) /
                ((1.0 - beta2) * (1.0 - beta1 / beta2)) * momentum * momentum;
    }
    return c;
}

CorollaryConstants rmsprop_corollary_constants(double g_inf, double smoothness, double delta_f,
                                               double beta2, double vhat1_inv_half_l1_mean,
                                               int dim) {
    CorollaryConstants c;
    c.m1 = 2.0 * g_inf * delta_f;
    c.m2 = 4.0 * std::pow(g_inf, 3.0) * vhat1_inv_half_l1_mean / static_cast<double>(dim) +
           4.0 * g_inf * g_inf;
    c.m3 = 4.0 * smoothness * g_inf / (1.0 - beta2);
    return c;
}

double corollary_rhs(const CorollaryConstants& c, int dim, long T) {
    const double sd = std::sqrt(static_cast<double>(dim));
    const double sT = std::sqrt(static_cast<double>(T));
    return c.m1 * sd / sT + c.m2 * static_cast<double>(dim) / static_cast<double>(T) +
           c.m3 * sd / sT;
}

LemmaReport check_lemma1(const Trajectory& traj, const Problem& problem) {
    const double g = problem.g_inf();
    const double g_sq = g * g;
    IneqTracker tracker;
    Vec grad;
    for (const StepRecord& rec : traj.records) {
        tracker.observe(norm_linf(rec.m), g, rec.t);
        tracker.observe(norm_linf(rec.v_hat), g_sq, rec.t);
        problem.exact_grad_into(rec.x_before, grad);
        tracker.observe(norm_linf(grad), g, rec.t);
    }
    if (!traj.records.empty()) {
        const StepRecord& last = traj.records.back();
        problem.exact_grad_into(last.x_after, grad);
        tracker.observe(norm_linf(grad), g, last.t + 1);
    }
    return tracker.report("lemma1");
}

namespace {

LemmaReport check_lemma2_impl(const RunReport& report, const HyperParams& hp,
                              const Problem& problem, double q, bool m_variant) {
    const std::string id = (m_variant ? "lemma2_m" : "lemma2_g") + std::string("_q") + fmt_q(q);
    if (!hp.alpha.is_constant())
        throw TheoremInapplicable(id + ": requires a constant step size");
    if (!q_is_legal(q, hp.p))
        throw std::invalid_argument(id + ": q outside [max(0, 4p-1), 1]");
    const double gamma = hp.gamma();
    if (m_variant && !(gamma < 1.0))
        throw TheoremInapplicable(id + ": requires gamma < 1");

    const double T = static_cast<double>(report.T);
    const double d = static_cast<double>(problem.dim());
    const double alpha = hp.alpha.base;
    const double g_inf = problem.g_inf();
    const double common = std::pow(T, (1.0 + q) / 2.0) * std::pow(d, q) * alpha * alpha *
                          std::pow(g_inf, 1.0 + q - 4.0 * hp.p) /
                          std::pow(1.0 - hp.beta2, 2.0 * hp.p) *
                          std::pow(report.sum_hist_norms, 1.0 - q);
    const double rhs = m_variant ? common * (1.0 - hp.beta1) / (1.0 - gamma) : common;
    const double lhs = m_variant ? report.sum_sq_eff_m : report.sum_sq_eff_g;

    IneqTracker tracker;
    tracker.observe(lhs, rhs, report.T);
    LemmaReport r = tracker.report(id);
    r.steps_checked = report.T;
    return r;
}

}  // namespace

LemmaReport check_lemma2_m(const RunReport& report, const HyperParams& hp,
                           const Problem& problem, double q) {
    return check_lemma2_impl(report, hp, problem, q, true);
}

LemmaReport check_lemma2_g(const RunReport& report, const HyperParams& hp,
                           const Problem& problem, double q) {
    return check_lemma2_impl(report, hp, problem, q, false);
}

LemmaReport check_lemma3(const Trajectory& traj) {
    const HyperParams& hp = traj.hp;
    const double c = hp.beta1 / (1.0 - hp.beta1);
    LemmaReport r;
    r.lemma_id = "lemma3";
    r.tolerance = kIdentityTol;
    if (traj.records.empty()) return r;

    const std::size_t d = traj.x1.size();
    // the t = 1 identity: z_2 - z_1 = -(alpha_1 V_1^{-p}) g_1, with x_0 = x_1
    {
        const StepRecord& rec = traj.records.front();
        double num = 0.0, mag = 0.0, xmax = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            const double lhs = (1.0 + c) * (rec.x_after[i] - rec.x_before[i]);
            const double rhs =
                -rec.alpha_t * inv_vhat_pow(rec.v_hat[i], hp.p, hp.eps_floor) * rec.g[i];
            num = std::max(num, std::abs(lhs - rhs));
            mag = std::max(mag, std::abs(lhs) + std::abs(rhs));
            xmax = std::max({xmax, std::abs(rec.x_before[i]), std::abs(rec.x_after[i])});
        }
        const double denom = mag + (1.0 + xmax) * (1.0 + c);
        const double disc = num / denom;
        r.max_violation = disc;
        r.worst_step = 1;
        r.steps_checked = 1;
    }

    for (std::size_t k = 1; k < traj.records.size(); ++k) {
        const StepRecord& prev = traj.records[k - 1];
        const StepRecord& rec = traj.records[k];
        double num = 0.0, mag = 0.0, xmax = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            const double xm1 = prev.x_before[i];  // x_{t-1}
            const double x0 = rec.x_before[i];    // x_t
            const double x1 = rec.x_after[i];     // x_{t+1}
            const double z_t = x0 + c * (x0 - xm1);
            const double z_next = x1 + c * (x1 - x0);
            const double lhs = z_next - z_t;

            const double w_prev =
                prev.alpha_t * inv_vhat_pow(prev.v_hat[i], hp.p, hp.eps_floor);
            const double w_cur = rec.alpha_t * inv_vhat_pow(rec.v_hat[i], hp.p, hp.eps_floor);
            const double grad_term = w_cur * rec.g[i];
            const double form_m = c * (w_prev - w_cur) * prev.m[i] - grad_term;
            const double form_x = c * (1.0 - w_cur / w_prev) * (xm1 - x0) - grad_term;

            num = std::max({num, std::abs(lhs - form_m), std::abs(lhs - form_x)});
            mag = std::max(mag, std::abs(lhs) + std::max(std::abs(form_m), std::abs(form_x)));
            xmax = std::max({xmax, std::abs(xm1), std::abs(x0), std::abs(x1)});
        }
        // per-coordinate relative error is ill-posed once a step underflows
        // the iterate's ulp, so normalize by the iterate scale amplified by
        // the momentum factor (the error both sides inherit from stored x)
        const double denom = mag + (1.0 + xmax) * (1.0 + c);
        const double disc = num / denom;
        ++r.steps_checked;
        if (disc > r.max_violation) {
            r.max_violation = disc;
            r.worst_step = rec.t;
        }
    }
    r.pass = r.max_violation <= kIdentityTol;
    return r;
}

LemmaReport check_lemma4(const Trajectory& traj) {
    const HyperParams& hp = traj.hp;
    const double c = hp.beta1 / (1.0 - hp.beta1);
    IneqTracker tracker;
    for (std::size_t k = 1; k < traj.records.size(); ++k) {
        const StepRecord& prev = traj.records[k - 1];
        const StepRecord& rec = traj.records[k];
        double z_diff_sq = 0.0, x_diff_sq = 0.0;
        for (std::size_t i = 0; i < rec.g.size(); ++i) {
            const double xm1 = prev.x_before[i];
            const double x0 = rec.x_before[i];
            const double x1 = rec.x_after[i];
            const double dz = (x1 + c * (x1 - x0)) - (x0 + c * (x0 - xm1));
            z_diff_sq += dz * dz;
            const double dx = xm1 - x0;
            x_diff_sq += dx * dx;
        }
        const double lhs = std::sqrt(z_diff_sq);
        const double rhs =
            floored_pow_l2(rec.v_hat, rec.g, rec.alpha_t, hp.p, hp.eps_floor) +
            c * std::sqrt(x_diff_sq);
        tracker.observe(lhs, rhs, rec.t);
    }
    return tracker.report("lemma4");
}

LemmaReport check_lemma5(const Trajectory& traj, const Problem& problem) {
    const HyperParams& hp = traj.hp;
    const double c = hp.beta1 / (1.0 - hp.beta1);
    const double L = problem.smoothness();
    IneqTracker tracker;
    Vec z(traj.x1.size());
    Vec grad_z, grad_x;
    for (std::size_t k = 1; k < traj.records.size(); ++k) {
        const StepRecord& prev = traj.records[k - 1];
        const StepRecord& rec = traj.records[k];
        double x_diff_sq = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            const double dx = rec.x_before[i] - prev.x_before[i];
            z[i] = rec.x_before[i] + c * dx;
            x_diff_sq += dx * dx;
        }
        problem.exact_grad_into(z, grad_z);
        problem.exact_grad_into(rec.x_before, grad_x);
        double diff_sq = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            const double dgi = grad_z[i] - grad_x[i];
            diff_sq += dgi * dgi;
        }
        tracker.observe(std::sqrt(diff_sq), L * c * std::sqrt(x_diff_sq), rec.t);
    }
    return tracker.report("lemma5");
}

double measure_stationarity(const Problem& problem, const Vec& x_out) {
    return norm_l2_sq(problem.exact_grad(x_out));
}

LemmaSuiteResult run_lemma_suite(const RunReport& report, const Problem& problem,
                                 const HyperParams& hp, const std::vector<double>& q_grid) {
    if (!report.trajectory)
        throw std::invalid_argument("run_lemma_suite: report has no trajectory "
                                    "(diagnostic mode required)");
    const Trajectory& traj = *report.trajectory;
    LemmaSuiteResult out;
    out.reports.push_back(check_lemma1(traj, problem));
    out.reports.push_back(check_lemma3(traj));
    if (hp.alpha.is_constant()) {
        out.reports.push_back(check_lemma4(traj));
    } else {
        out.skipped.push_back("lemma4: non-constant step size");
    }
    out.reports.push_back(check_lemma5(traj, problem));

    if (!hp.alpha.is_constant()) {
        out.skipped.push_back("lemma2: non-constant step size");
        return out;
    }
    const bool gamma_ok = hp.gamma() < 1.0;
    if (!gamma_ok) out.skipped.push_back("lemma2_m: gamma >= 1");
    for (double q : q_grid) {
        if (!q_is_legal(q, hp.p)) continue;
        if (gamma_ok) out.reports.push_back(check_lemma2_m(report, hp, problem, q));
        out.reports.push_back(check_lemma2_g(report, hp, problem, q));
    }
    return out;
}

}  // namespace padam
