#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace padam {

// Step-size schedule: either a constant alpha or alpha_t = alpha0/sqrt(t).
struct AlphaSchedule {
    enum class Kind { Constant, InvSqrtT };

    Kind kind = Kind::Constant;
    double base = 1e-3;  // alpha for Constant, alpha0 for InvSqrtT

    static AlphaSchedule constant(double alpha) { return {Kind::Constant, alpha}; }
    static AlphaSchedule inv_sqrt(double alpha0) { return {Kind::InvSqrtT, alpha0}; }

    bool is_constant() const { return kind == Kind::Constant; }

    // Step size at step t (1-based).
    double at(long t) const {
        if (t < 1) throw std::invalid_argument("AlphaSchedule::at: t must be >= 1");
        return kind == Kind::Constant ? base : base / std::sqrt(static_cast<double>(t));
    }
};

struct HyperParams {
    AlphaSchedule alpha = AlphaSchedule::constant(1e-3);
    double beta1 = 0.9;
    double beta2 = 0.999;
    double p = 0.25;          // partial adaptivity exponent, in [0, 1/2]
    double eps_floor = 1e-12; // clamp applied inside v_hat^{-p}, never stored

    // gamma = beta1 / beta2^{2p}; the convergence analysis needs gamma < 1.
    double gamma() const {
        if (beta1 == 0.0) return 0.0;
        if (p == 0.0) return beta1;
        const double denom = std::pow(beta2, 2.0 * p);
        if (denom == 0.0) return std::numeric_limits<double>::infinity();
        return beta1 / denom;
    }

    void validate() const {
        if (!(alpha.base > 0.0) || !std::isfinite(alpha.base))
            throw std::invalid_argument("hyperparams: alpha must be positive and finite");
        if (!(beta1 >= 0.0 && beta1 < 1.0))
            throw std::invalid_argument("hyperparams: beta1 must lie in [0, 1)");
        if (!(beta2 >= 0.0 && beta2 < 1.0))
            throw std::invalid_argument("hyperparams: beta2 must lie in [0, 1)");
        if (!(p >= 0.0 && p <= 0.5))
            throw std::invalid_argument("hyperparams: p = " + std::to_string(p) +
                                        " violates the p in [0, 1/2] constraint");
        if (!(eps_floor > 0.0))
            throw std::invalid_argument("hyperparams: eps_floor must be > 0");
    }

    HyperParams with_p(double new_p) const {
        HyperParams h = *this;
        h.p = new_p;
        return h;
    }

    HyperParams with_beta1(double new_beta1) const {
        HyperParams h = *this;
        h.beta1 = new_beta1;
        return h;
    }

    HyperParams with_alpha(AlphaSchedule sched) const {
        HyperParams h = *this;
        h.alpha = sched;
        return h;
    }
};

}  // namespace padam
