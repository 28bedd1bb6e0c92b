#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "padam/hyperparams.hpp"
#include "padam/problems.hpp"
#include "padam/rng.hpp"
#include "padam/vec.hpp"

namespace padam {

enum class OptimizerKind { Padam, AmsGrad, RmsProp, Sgd };

const char* optimizer_name(OptimizerKind kind);

// (max(vhat, eps))^{-p} for one coordinate. The floor is applied only here:
// stored second-moment state is never clamped. Dyadic exponents take the
// sqrt chain, everything else falls back to std::pow.
inline double inv_vhat_pow(double vhat, double p, double eps_floor) {
    const double b = vhat > eps_floor ? vhat : eps_floor;
    if (p == 0.0) return 1.0;
    if (p == 0.5) return 1.0 / std::sqrt(b);
    if (p == 0.25) return 1.0 / std::sqrt(std::sqrt(b));
    if (p == 0.125) return 1.0 / std::sqrt(std::sqrt(std::sqrt(b)));
    return std::pow(b, -p);
}

struct OptimizerState {
    long t = 0;
    Vec x;
    Vec m;
    Vec v;
    Vec v_hat;
    Vec grad_sq_accum;  // running per-coordinate sum of g^2

    static OptimizerState init(Vec x0) {
        OptimizerState s;
        const std::size_t d = x0.size();
        s.x = std::move(x0);
        s.m = zeros(d);
        s.v = zeros(d);
        s.v_hat = zeros(d);
        s.grad_sq_accum = zeros(d);
        return s;
    }

    std::size_t dim() const { return x.size(); }
};

// Full record of one transition, kept only in diagnostic mode.
struct StepRecord {
    long t = 0;  // this record maps x_t to x_{t+1}
    double alpha_t = 0.0;
    Vec g;
    Vec x_before;
    Vec x_after;
    Vec m;               // m_t
    Vec v_hat;           // v̂_t (unfloored)
    Vec effective_step;  // alpha_t * max(v̂_t, eps)^{-p} ⊙ m_t
};

// Per-step squared norms accumulated online for the weighted-sum audits.
struct StepStats {
    double eff_m_sq = 0.0;  // ||alpha_t V̂_t^{-p} m_t||_2^2
    double eff_g_sq = 0.0;  // ||alpha_t V̂_t^{-p} g_t||_2^2
    int nonzero_g = 0;      // support size of g_t
};

// One Padam transition, in place. Throws on dimension mismatch or non-finite
// gradient entries (message carries the step index).
StepStats padam_step_inplace(OptimizerState& state, const Vec& g, const HyperParams& hp);

// Recording variants: same arithmetic, plus a full StepRecord.
StepRecord padam_step(OptimizerState& state, const Vec& g, const HyperParams& hp);
StepRecord amsgrad_step(OptimizerState& state, const Vec& g, const HyperParams& hp);  // p := 1/2
StepRecord rmsprop_step(OptimizerState& state, const Vec& g, const HyperParams& hp);  // p := 1/2, beta1 := 0

// Hyperparameters actually used by an optimizer kind (AMSGrad pins p = 1/2,
// RMSProp additionally pins beta1 = 0, SGD-with-momentum pins p = 0).
HyperParams effective_hyperparams(OptimizerKind kind, const HyperParams& hp);

// Draw the reported-iterate index t in [2, T] with probability
// alpha_{t-1} / sum_{i=1}^{T-1} alpha_i. `alphas` holds alpha_1..alpha_{T-1}.
long select_output_index(const std::vector<double>& alphas, SeededRng& rng);
long select_output_index(const AlphaSchedule& sched, long T, SeededRng& rng);

struct Trajectory {
    Vec x1;
    HyperParams hp;
    std::vector<StepRecord> records;  // records[k] is step t = k+1
};

struct RunReport {
    long T = 0;
    std::uint64_t seed = 0;
    long out_index = 0;  // t in [2, T]
    Vec x_out;
    double stationarity = 0.0;        // ||∇f(x_out)||_2^2 via the exact gradient
    double sum_hist_norms = 0.0;      // sum_i ||g_{1:T,i}||_2
    double sum_sq_eff_m = 0.0;        // sum_t ||alpha_t V̂_t^{-p} m_t||_2^2
    double sum_sq_eff_g = 0.0;        // sum_t ||alpha_t V̂_t^{-p} g_t||_2^2
    double vhat1_inv_p_l1 = 0.0;      // ||max(v̂_1, eps)^{-p}||_1
    bool eps_floor_bound_vhat1 = false;
    double mean_nonzero_frac = 0.0;   // measured gradient sparsity
    Vec grad_sq_accum;                // per-coordinate sum of g^2 over the run
    Vec x_final;
    std::optional<Trajectory> trajectory;
};

struct RunOptions {
    bool diagnostic = false;  // retain the full per-step trajectory
};

// Execute T steps of the given optimizer on the problem, drawing
// g_t = ∇f(x_t; xi_t), with the output iterate pre-sampled so only one
// iterate is retained outside diagnostic mode.
RunReport run(const Problem& problem, const HyperParams& hp, long T, std::uint64_t seed,
              OptimizerKind kind = OptimizerKind::Padam, RunOptions opts = {});

}  // namespace padam
