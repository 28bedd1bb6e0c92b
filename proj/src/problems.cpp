#include "padam/problems.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "padam/rng.hpp"

namespace padam {

namespace {

constexpr std::uint64_t kWeightStreamTag = 0x6c6f67u;  // weight-init substream
constexpr std::uint64_t kNoiseStreamTag = 0x6e6f69u;   // per-draw noise substream

class LogSmoothProblem final : public Problem {
public:
    LogSmoothProblem(int dim, double sparsity, std::uint64_t seed, Vec active_weights)
        : Problem("log_smooth", dim, /*g_inf=*/1.0,
                  /*smoothness=*/2.0 * sparsity *
                      *std::max_element(active_weights.begin(), active_weights.end()),
                  sparsity,
                  /*f_lower_bound=*/0.0, Vec(static_cast<std::size_t>(dim), 2.0)),
          seed_(seed),
          sparsity_(sparsity),
          active_weights_(std::move(active_weights)) {
        mean_weights_.resize(active_weights_.size());
        for (std::size_t i = 0; i < active_weights_.size(); ++i)
            mean_weights_[i] = sparsity_ * active_weights_[i];
    }

    double mean_value(const Vec& x) const override {
        check_dim(x, "log_smooth::mean_value");
        double f = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            f += mean_weights_[i] * std::log1p(x[i] * x[i]);
        return f;
    }

    void exact_grad_into(const Vec& x, Vec& out) const override {
        check_dim(x, "log_smooth::exact_grad");
        out.resize(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            out[i] = mean_weights_[i] * 2.0 * x[i] / (1.0 + x[i] * x[i]);
    }

    void stoch_grad_into(const Vec& x, std::uint64_t xi_seed, Vec& out) const override {
        check_dim(x, "log_smooth::stoch_grad");
        out.resize(x.size());
        SeededRng rng(derive_seed(derive_seed(seed_, kNoiseStreamTag), xi_seed));
        for (std::size_t i = 0; i < x.size(); ++i) {
            // one draw per coordinate regardless of outcome, so the stream
            // layout is independent of x
            const bool active = rng.bernoulli(sparsity_);
            out[i] = active ? active_weights_[i] * 2.0 * x[i] / (1.0 + x[i] * x[i]) : 0.0;
        }
    }

private:
    std::uint64_t seed_;
    double sparsity_;
    Vec active_weights_;  // a_i value when the coordinate is active (= abar_i / sparsity)
    Vec mean_weights_;    // abar_i
};

class NoisyQuadraticProblem final : public Problem {
public:
    NoisyQuadraticProblem(int dim, std::uint64_t seed, double noise_half_width, Vec h)
        : Problem("noisy_quadratic_bounded", dim,
                  /*g_inf=*/*std::max_element(h.begin(), h.end()) + noise_half_width,
                  /*smoothness=*/*std::max_element(h.begin(), h.end()),
                  /*sparsity=*/1.0,
                  /*f_lower_bound=*/0.0, Vec(static_cast<std::size_t>(dim), 2.0)),
          seed_(seed),
          noise_half_width_(noise_half_width),
          h_(std::move(h)) {}

    double mean_value(const Vec& x) const override {
        check_dim(x, "noisy_quadratic::mean_value");
        double f = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            f += h_[i] * (std::sqrt(1.0 + x[i] * x[i]) - 1.0);
        return f;
    }

    void exact_grad_into(const Vec& x, Vec& out) const override {
        check_dim(x, "noisy_quadratic::exact_grad");
        out.resize(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            out[i] = h_[i] * x[i] / std::sqrt(1.0 + x[i] * x[i]);
    }

    void stoch_grad_into(const Vec& x, std::uint64_t xi_seed, Vec& out) const override {
        check_dim(x, "noisy_quadratic::stoch_grad");
        exact_grad_into(x, out);
        if (noise_half_width_ == 0.0) return;
        SeededRng rng(derive_seed(derive_seed(seed_, kNoiseStreamTag), xi_seed));
        for (std::size_t i = 0; i < x.size(); ++i)
            out[i] += rng.uniform(-noise_half_width_, noise_half_width_);
    }

private:
    std::uint64_t seed_;
    double noise_half_width_;
    Vec h_;
};

}  // namespace

ProblemPtr make_log_smooth(int dim, double sparsity, std::uint64_t seed,
                           double weight_scale) {
    if (dim < 1) throw std::invalid_argument("make_log_smooth: dim must be >= 1");
    if (!(sparsity > 0.0 && sparsity <= 1.0))
        throw std::invalid_argument("make_log_smooth: sparsity must lie in (0, 1]");
    if (!(weight_scale > 0.0 && weight_scale <= 1.0))
        throw std::invalid_argument("make_log_smooth: weight_scale must lie in (0, 1]");
    SeededRng rng(derive_seed(seed, kWeightStreamTag));
    Vec active(static_cast<std::size_t>(dim));
    for (double& u : active) u = weight_scale * rng.uniform(0.5, 1.0);
    return std::make_shared<LogSmoothProblem>(dim, sparsity, seed, std::move(active));
}

ProblemPtr make_log_smooth(int dim, double sparsity, std::uint64_t seed, Vec mean_weights) {
    if (dim < 1) throw std::invalid_argument("make_log_smooth: dim must be >= 1");
    if (!(sparsity > 0.0 && sparsity <= 1.0))
        throw std::invalid_argument("make_log_smooth: sparsity must lie in (0, 1]");
    if (static_cast<int>(mean_weights.size()) != dim)
        throw std::invalid_argument("make_log_smooth: mean_weights size != dim");
    Vec active(mean_weights.size());
    for (std::size_t i = 0; i < mean_weights.size(); ++i) {
        if (!(mean_weights[i] > 0.0))
            throw std::invalid_argument("make_log_smooth: mean weights must be > 0");
        if (mean_weights[i] > sparsity)
            throw std::invalid_argument(
                "make_log_smooth: sparsity " + std::to_string(sparsity) +
                " < max mean weight " + std::to_string(mean_weights[i]) +
                "; unbiased rescaling would violate the G_inf bound");
        active[i] = mean_weights[i] / sparsity;
    }
    return std::make_shared<LogSmoothProblem>(dim, sparsity, seed, std::move(active));
}

ProblemPtr make_noisy_quadratic_bounded(int dim, std::uint64_t seed, double noise_half_width) {
    if (dim < 1) throw std::invalid_argument("make_noisy_quadratic_bounded: dim must be >= 1");
    if (!(noise_half_width >= 0.0))
        throw std::invalid_argument("make_noisy_quadratic_bounded: noise must be >= 0");
    SeededRng rng(derive_seed(seed, kWeightStreamTag));
    Vec h(static_cast<std::size_t>(dim));
    for (double& hi : h) hi = rng.uniform(0.5, 1.5);
    return std::make_shared<NoisyQuadraticProblem>(dim, seed, noise_half_width, std::move(h));
}

double fd_check(const Problem& problem, const Vec& x, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("fd_check: h must be > 0");
    const Vec g = problem.exact_grad(x);
    Vec probe = x;
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        probe[i] = x[i] + h;
        const double fp = problem.mean_value(probe);
        probe[i] = x[i] - h;
        const double fm = problem.mean_value(probe);
        probe[i] = x[i];
        const double fd = (fp - fm) / (2.0 * h);
        const double rel = std::abs(fd - g[i]) / (1.0 + std::abs(g[i]));
        worst = std::max(worst, rel);
    }
    return worst;
}

}  // namespace padam
