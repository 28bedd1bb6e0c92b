#include "padam/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace padam {

namespace {

constexpr std::uint64_t kOutputRuleTag = 0x6f7574u;  // output-index substream
constexpr std::uint64_t kGradStreamTag = 0x677261u;  // gradient-noise substream

}  // namespace

const char* optimizer_name(OptimizerKind kind) {
    switch (kind) {
        case OptimizerKind::Padam: return "padam";
        case OptimizerKind::AmsGrad: return "amsgrad";
        case OptimizerKind::RmsProp: return "rmsprop";
        case OptimizerKind::Sgd: return "sgd";
    }
    return "unknown";
}

HyperParams effective_hyperparams(OptimizerKind kind, const HyperParams& hp) {
    switch (kind) {
        case OptimizerKind::Padam: return hp;
        case OptimizerKind::AmsGrad: return hp.with_p(0.5);
        case OptimizerKind::RmsProp: return hp.with_p(0.5).with_beta1(0.0);
        case OptimizerKind::Sgd: return hp.with_p(0.0);
    }
    return hp;
}

StepStats padam_step_inplace(OptimizerState& s, const Vec& g, const HyperParams& hp) {
    require_same_dim(s.x, g, "padam_step");
    const long t_next = s.t + 1;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!std::isfinite(g[i])) {
            throw std::domain_error("padam_step: non-finite gradient entry at coordinate " +
                                    std::to_string(i) + ", step " + std::to_string(t_next));
        }
    }
    const double alpha_t = hp.alpha.at(t_next);
    const double b1 = hp.beta1, b2 = hp.beta2;
    StepStats stats;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double gi = g[i];
        const double gsq = gi * gi;
        s.m[i] = b1 * s.m[i] + (1.0 - b1) * gi;
        s.v[i] = b2 * s.v[i] + (1.0 - b2) * gsq;
        if (s.v[i] > s.v_hat[i]) s.v_hat[i] = s.v[i];
        s.grad_sq_accum[i] += gsq;
        const double w = alpha_t * inv_vhat_pow(s.v_hat[i], hp.p, hp.eps_floor);
        const double step_i = w * s.m[i];
        s.x[i] -= step_i;
        stats.eff_m_sq += step_i * step_i;
        const double wg = w * gi;
        stats.eff_g_sq += wg * wg;
        if (gi != 0.0) ++stats.nonzero_g;
    }
    s.t = t_next;
    return stats;
}

namespace {

StepRecord recorded_step(OptimizerState& s, const Vec& g, const HyperParams& hp,
                         StepStats* stats_out = nullptr) {
    StepRecord rec;
    rec.t = s.t + 1;
    rec.alpha_t = hp.alpha.at(rec.t);
    rec.g = g;
    rec.x_before = s.x;
    const StepStats stats = padam_step_inplace(s, g, hp);
    if (stats_out) *stats_out = stats;
    rec.x_after = s.x;
    rec.m = s.m;
    rec.v_hat = s.v_hat;
    // same formula and operands as the in-place update, so the recorded step
    // satisfies x_after == x_before - effective_step bit-exactly
    rec.effective_step.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double w = rec.alpha_t * inv_vhat_pow(rec.v_hat[i], hp.p, hp.eps_floor);
        rec.effective_step[i] = w * rec.m[i];
    }
    return rec;
}

}  // namespace

StepRecord padam_step(OptimizerState& s, const Vec& g, const HyperParams& hp) {
    return recorded_step(s, g, hp);
}

StepRecord amsgrad_step(OptimizerState& s, const Vec& g, const HyperParams& hp) {
    return recorded_step(s, g, hp.with_p(0.5));
}

StepRecord rmsprop_step(OptimizerState& s, const Vec& g, const HyperParams& hp) {
    return recorded_step(s, g, hp.with_p(0.5).with_beta1(0.0));
}

long select_output_index(const std::vector<double>& alphas, SeededRng& rng) {
    const long T = static_cast<long>(alphas.size()) + 1;
    if (T < 2) throw std::invalid_argument("select_output_index: T must be >= 2");
    std::vector<double> cdf(alphas.size());
    double total = 0.0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (!(alphas[i] > 0.0))
            throw std::invalid_argument("select_output_index: step sizes must be > 0");
        total += alphas[i];
        cdf[i] = total;
    }
    const double u = rng.next_double() * total;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const long k = it == cdf.end() ? static_cast<long>(cdf.size()) - 1
                                   : static_cast<long>(it - cdf.begin());
    return k + 2;  // weight alpha_{t-1} selects iterate t
}

long select_output_index(const AlphaSchedule& sched, long T, SeededRng& rng) {
    if (T < 2) throw std::invalid_argument("select_output_index: T must be >= 2");
    std::vector<double> alphas(static_cast<std::size_t>(T - 1));
    for (long t = 1; t <= T - 1; ++t) alphas[static_cast<std::size_t>(t - 1)] = sched.at(t);
    return select_output_index(alphas, rng);
}

RunReport run(const Problem& problem, const HyperParams& hp_in, long T, std::uint64_t seed,
              OptimizerKind kind, RunOptions opts) {
    if (T < 2) throw std::invalid_argument("run: T must be >= 2");
    const HyperParams hp = effective_hyperparams(kind, hp_in);
    hp.validate();

    RunReport report;
    report.T = T;
    report.seed = seed;

    SeededRng out_rng(derive_seed(seed, kOutputRuleTag));
    report.out_index = select_output_index(hp.alpha, T, out_rng);

    const std::uint64_t grad_stream = derive_seed(seed, kGradStreamTag);

    OptimizerState state = OptimizerState::init(problem.x_init());
    const std::size_t d = state.dim();

    if (opts.diagnostic) {
        report.trajectory = Trajectory{state.x, hp, {}};
        report.trajectory->records.reserve(static_cast<std::size_t>(T));
    }

    Vec g(d);
    long nonzero_total = 0;
    for (long t = 1; t <= T; ++t) {
        const std::uint64_t xi = derive_seed(grad_stream, static_cast<std::uint64_t>(t));
        problem.stoch_grad_into(state.x, xi, g);
        StepStats stats;
        if (opts.diagnostic) {
            report.trajectory->records.push_back(recorded_step(state, g, hp, &stats));
        } else {
            stats = padam_step_inplace(state, g, hp);
        }
        report.sum_sq_eff_m += stats.eff_m_sq;
        report.sum_sq_eff_g += stats.eff_g_sq;
        nonzero_total += stats.nonzero_g;
        if (t == 1) {
            bool floored = false;
            double l1 = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                if (state.v_hat[i] < hp.eps_floor) floored = true;
                l1 += inv_vhat_pow(state.v_hat[i], hp.p, hp.eps_floor);
            }
            report.vhat1_inv_p_l1 = l1;
            report.eps_floor_bound_vhat1 = floored;
        }
        // state.x is now iterate x_{t+1}
        if (t + 1 == report.out_index) report.x_out = state.x;
    }

    report.mean_nonzero_frac =
        static_cast<double>(nonzero_total) / (static_cast<double>(T) * static_cast<double>(d));
    report.grad_sq_accum = state.grad_sq_accum;
    double shn = 0.0;
    for (double a : state.grad_sq_accum) shn += std::sqrt(a);
    report.sum_hist_norms = shn;
    report.x_final = state.x;
    report.stationarity = norm_l2_sq(problem.exact_grad(report.x_out));
    return report;
}

}  // namespace padam
