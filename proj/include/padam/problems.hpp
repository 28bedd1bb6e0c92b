#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "padam/vec.hpp"

namespace padam {

// One stochastic gradient draw together with its draw identifier.
struct GradSample {
    std::uint64_t xi_seed = 0;
    Vec g;
};

// Stochastic problem oracle: f(x) = E_xi[f(x; xi)] with certified constants.
// Oracles are pure functions of (x, xi_seed); instances are immutable after
// construction and safe to share across threads.
class Problem {
public:
    virtual ~Problem() = default;

    const std::string& name() const { return name_; }
    int dim() const { return dim_; }
    double g_inf() const { return g_inf_; }          // Assumption-1 constant
    double smoothness() const { return smoothness_; } // Assumption-2 constant
    double sparsity() const { return sparsity_; }     // expected active fraction per draw
    double f_lower_bound() const { return f_lower_bound_; }
    const Vec& x_init() const { return x_init_; }

    // f(x₁) − inf f, the Δf of the convergence bound.
    double delta_f() const { return mean_value(x_init_) - f_lower_bound_; }

    // Deterministic mean objective f(x).
    virtual double mean_value(const Vec& x) const = 0;

    // Closed-form full gradient of the mean objective.
    virtual void exact_grad_into(const Vec& x, Vec& out) const = 0;

    // One stochastic gradient draw; deterministic in (x, xi_seed).
    virtual void stoch_grad_into(const Vec& x, std::uint64_t xi_seed, Vec& out) const = 0;

    Vec exact_grad(const Vec& x) const {
        Vec out(static_cast<std::size_t>(dim_));
        exact_grad_into(x, out);
        return out;
    }

    Vec stoch_grad(const Vec& x, std::uint64_t xi_seed) const {
        Vec out(static_cast<std::size_t>(dim_));
        stoch_grad_into(x, xi_seed, out);
        return out;
    }

    GradSample sample_grad(const Vec& x, std::uint64_t xi_seed) const {
        GradSample s{xi_seed, stoch_grad(x, xi_seed)};
        require_finite(s.g, "sample_grad");
        return s;
    }

protected:
    Problem(std::string name, int dim, double g_inf, double smoothness, double sparsity,
            double f_lower_bound, Vec x_init)
        : name_(std::move(name)),
          dim_(dim),
          g_inf_(g_inf),
          smoothness_(smoothness),
          sparsity_(sparsity),
          f_lower_bound_(f_lower_bound),
          x_init_(std::move(x_init)) {}

    void check_dim(const Vec& x, const char* where) const {
        if (static_cast<int>(x.size()) != dim_) {
            throw std::invalid_argument(std::string(where) + ": expected dim " +
                                        std::to_string(dim_) + ", got " +
                                        std::to_string(x.size()));
        }
    }

private:
    std::string name_;
    int dim_;
    double g_inf_;
    double smoothness_;
    double sparsity_;
    double f_lower_bound_;
    Vec x_init_;
};

using ProblemPtr = std::shared_ptr<const Problem>;

// Separable nonconvex objective f(x; xi) = sum_i a_i(xi) log(1 + x_i^2) with
// a_i(xi) in [0, 1] and E a_i = abar_i > 0. Coordinates activate independently
// with probability `sparsity`; active weights are rescaled so the gradient
// estimator stays unbiased. Certified: G_inf = 1, L = 2 max_i abar_i.
//
// Default weights: abar_i = sparsity * u_i with u_i ~ U[0.5, 1] * weight_scale,
// so the active-draw magnitude is u_i regardless of sparsity. weight_scale
// dials the gradient scale of the instance (small scales reach the
// sparse-gradient regime).
ProblemPtr make_log_smooth(int dim, double sparsity, std::uint64_t seed,
                           double weight_scale = 1.0);

// Same family with explicit mean weights abar (fails if sparsity < max abar,
// since unbiased rescaling would force an active weight above 1).
ProblemPtr make_log_smooth(int dim, double sparsity, std::uint64_t seed, Vec mean_weights);

// Convex calibration objective f(x; xi) = sum_i h_i rho(x_i) + <b(xi), x> with
// rho the pseudo-Huber potential sqrt(1+x^2) - 1 and b(xi) ~ U[-w, w]^d
// zero-mean noise. Certified: G_inf = max_i h_i + w, L = max_i h_i.
ProblemPtr make_noisy_quadratic_bounded(int dim, std::uint64_t seed,
                                        double noise_half_width = 0.1);

// Central finite differences on the mean objective against exact_grad:
// max_i |(f(x+h e_i) - f(x-h e_i))/(2h) - g_i| / (1 + |g_i|).
double fd_check(const Problem& problem, const Vec& x, double h);

}  // namespace padam
