#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "padam/problems.hpp"
#include "padam/rng.hpp"
#include "padam/stats.hpp"

using namespace padam;

namespace {

Vec random_point(SeededRng& rng, int d, double r) {
    Vec x(static_cast<std::size_t>(d));
    for (double& xi : x) xi = rng.uniform(-r, r);
    return x;
}

}  // namespace

TEST_CASE("log_smooth: gradient at the origin vanishes") {
    const ProblemPtr p = make_log_smooth(6, 0.5, 1);
    const Vec g = p->exact_grad(zeros(6));
    for (double gi : g) CHECK(gi == 0.0);
    CHECK(p->mean_value(zeros(6)) == 0.0);
}

TEST_CASE("log_smooth: dim-1 instance with mean weight 1 at x = 1") {
    const ProblemPtr p = make_log_smooth(1, 1.0, 1, Vec{1.0});
    const Vec g = p->exact_grad({1.0});
    CHECK(g[0] == doctest::Approx(1.0).epsilon(1e-15));  // 2*1*1/(1+1)
    CHECK(p->g_inf() == 1.0);
    CHECK(p->smoothness() == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("log_smooth: constructor rejects sparsity below the max mean weight") {
    CHECK_THROWS_WITH_AS(make_log_smooth(2, 0.3, 1, Vec{0.5, 0.2}),
                         doctest::Contains("sparsity"), std::invalid_argument);
    CHECK_NOTHROW(make_log_smooth(2, 0.5, 1, Vec{0.5, 0.2}));
    CHECK_THROWS_AS(make_log_smooth(0, 0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_log_smooth(2, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_log_smooth(2, 0.5, 1, 1.5), std::invalid_argument);
}

TEST_CASE("log_smooth: stochastic gradients are unbiased (Monte Carlo oracle)") {
    const int d = 5;
    const ProblemPtr p = make_log_smooth(d, 0.4, 17);
    SeededRng rng(99);
    const Vec x = random_point(rng, d, 3.0);
    const Vec exact = p->exact_grad(x);

    const int n = 100000;
    std::vector<std::vector<double>> samples(static_cast<std::size_t>(d));
    Vec g(static_cast<std::size_t>(d));
    for (int k = 0; k < n; ++k) {
        p->stoch_grad_into(x, static_cast<std::uint64_t>(k), g);
        for (int i = 0; i < d; ++i) samples[static_cast<std::size_t>(i)].push_back(g[i]);
    }
    for (int i = 0; i < d; ++i) {
        const auto& si = samples[static_cast<std::size_t>(i)];
        const double mean = mean_of(si);
        const double se = stderr_of(si);
        CHECK(std::abs(mean - exact[static_cast<std::size_t>(i)]) <= 4.0 * se + 1e-12);
    }
}

TEST_CASE("log_smooth: Monte Carlo error decays at the 1/sqrt(N) rate") {
    const int d = 4;
    const ProblemPtr p = make_log_smooth(d, 0.4, 23);
    SeededRng rng(5);
    const Vec x = random_point(rng, d, 2.0);
    const Vec exact = p->exact_grad(x);

    std::vector<double> errs;
    std::vector<double> logn;
    Vec g(static_cast<std::size_t>(d));
    std::uint64_t xi = 0;
    for (const int n : {1000, 10000, 100000}) {
        Vec acc = zeros(static_cast<std::size_t>(d));
        for (int k = 0; k < n; ++k) {
            p->stoch_grad_into(x, xi++, g);
            for (int i = 0; i < d; ++i) acc[static_cast<std::size_t>(i)] += g[i];
        }
        double err_sq = 0.0;
        for (int i = 0; i < d; ++i) {
            const double e = acc[static_cast<std::size_t>(i)] / n - exact[i];
            err_sq += e * e;
        }
        errs.push_back(std::log(std::sqrt(err_sq)));
        logn.push_back(std::log(static_cast<double>(n)));
    }
    const LinearFit fit = linear_fit(logn, errs);
    CHECK(fit.slope < -0.2);
    CHECK(fit.slope > -0.9);
}

TEST_CASE("log_smooth: boundedness audit over random probes") {
    const int d = 8;
    const ProblemPtr p = make_log_smooth(d, 0.3, 31);
    SeededRng rng(8);
    Vec g(static_cast<std::size_t>(d));
    long violations = 0;
    for (int trial = 0; trial < 20000; ++trial) {
        const Vec x = random_point(rng, d, 50.0);
        p->stoch_grad_into(x, rng.next_u64(), g);
        if (norm_linf(g) > p->g_inf()) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("log_smooth: smoothness audit on random pairs") {
    const int d = 6;
    const ProblemPtr p = make_log_smooth(d, 0.7, 37);
    SeededRng rng(21);
    long violations = 0;
    for (int trial = 0; trial < 5000; ++trial) {
        const Vec x = random_point(rng, d, 10.0);
        const Vec y = random_point(rng, d, 10.0);
        const Vec gx = p->exact_grad(x);
        const Vec gy = p->exact_grad(y);
        double diff_sq = 0.0, dist_sq = 0.0;
        for (int i = 0; i < d; ++i) {
            diff_sq += (gx[i] - gy[i]) * (gx[i] - gy[i]);
            dist_sq += (x[i] - y[i]) * (x[i] - y[i]);
        }
        const double lhs = std::sqrt(diff_sq);
        const double rhs = p->smoothness() * std::sqrt(dist_sq);
        if (lhs > rhs + 1e-12 * (lhs + rhs)) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("log_smooth: empirical sparsity matches the dial within 2%") {
    const int d = 50;
    const double sparsity = 0.2;
    const ProblemPtr p = make_log_smooth(d, sparsity, 41);
    SeededRng rng(3);
    const Vec x = constant_vec(static_cast<std::size_t>(d), 1.5);
    Vec g(static_cast<std::size_t>(d));
    long nonzero = 0;
    const int draws = 10000;
    for (int k = 0; k < draws; ++k) {
        p->stoch_grad_into(x, static_cast<std::uint64_t>(k), g);
        for (double gi : g)
            if (gi != 0.0) ++nonzero;
    }
    const double frac = static_cast<double>(nonzero) / (static_cast<double>(draws) * d);
    CHECK(std::abs(frac - sparsity) < 0.02 * sparsity + 0.002);
}

TEST_CASE("log_smooth: x_init is all twos (inside the nonconvex region)") {
    const ProblemPtr p = make_log_smooth(3, 1.0, 1);
    CHECK(p->x_init() == Vec{2.0, 2.0, 2.0});
    CHECK(p->f_lower_bound() == 0.0);
    CHECK(p->delta_f() > 0.0);
}

TEST_CASE("fd_check: log_smooth gradient matches central differences") {
    const ProblemPtr p = make_log_smooth(10, 0.5, 43);
    SeededRng rng(17);
    const Vec x = random_point(rng, 10, 3.0);
    CHECK(fd_check(*p, x, 1e-5) < 1e-6);
    CHECK(fd_check(*p, zeros(10), 1e-5) < 1e-12);  // both sides vanish at 0
}

TEST_CASE("fd_check: quadratic family error dominated by the O(h^2) term") {
    const ProblemPtr p = make_noisy_quadratic_bounded(7, 5, 0.1);
    SeededRng rng(29);
    const Vec x = random_point(rng, 7, 4.0);
    CHECK(fd_check(*p, x, 1e-4) < 1e-7);
}

TEST_CASE("noisy quadratic: zero-noise draws are deterministic") {
    const ProblemPtr p = make_noisy_quadratic_bounded(5, 13, 0.0);
    SeededRng rng(1);
    const Vec x = random_point(rng, 5, 2.0);
    const Vec g1 = p->stoch_grad(x, 111);
    const Vec g2 = p->stoch_grad(x, 222);
    CHECK(g1 == g2);
    CHECK(g1 == p->exact_grad(x));
}

TEST_CASE("noisy quadratic: certified constants from interval arithmetic") {
    const ProblemPtr p = make_noisy_quadratic_bounded(6, 19, 0.1);
    // G_inf = max_i h_i + 0.1 and the slope bound |rho'| < 1 make every draw safe
    CHECK(p->g_inf() == doctest::Approx(p->smoothness() + 0.1).epsilon(1e-15));
    SeededRng rng(11);
    Vec g(6);
    long violations = 0;
    for (int trial = 0; trial < 20000; ++trial) {
        const Vec x = random_point(rng, 6, 100.0);
        p->stoch_grad_into(x, rng.next_u64(), g);
        if (norm_linf(g) > p->g_inf()) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("noisy quadratic: exact gradient vanishes at the analytic minimizer") {
    const ProblemPtr p = make_noisy_quadratic_bounded(4, 3, 0.1);
    const Vec g = p->exact_grad(zeros(4));
    for (double gi : g) CHECK(gi == 0.0);
    CHECK(p->mean_value(zeros(4)) == 0.0);
}

TEST_CASE("noisy quadratic: stochastic gradients are unbiased") {
    const int d = 4;
    const ProblemPtr p = make_noisy_quadratic_bounded(d, 7, 0.1);
    SeededRng rng(41);
    const Vec x = random_point(rng, d, 2.0);
    const Vec exact = p->exact_grad(x);
    Vec acc = zeros(d);
    Vec g(d);
    const int n = 100000;
    for (int k = 0; k < n; ++k) {
        p->stoch_grad_into(x, static_cast<std::uint64_t>(k), g);
        for (int i = 0; i < d; ++i) acc[i] += g[i];
    }
    // noise is U[-0.1, 0.1]: se = 0.1/sqrt(3n)
    const double se = 0.1 / std::sqrt(3.0 * n);
    for (int i = 0; i < d; ++i) CHECK(std::abs(acc[i] / n - exact[i]) < 4.0 * se);
}

TEST_CASE("sample_grad pairs the draw identifier with the gradient") {
    const ProblemPtr p = make_log_smooth(4, 0.5, 3);
    const Vec x = constant_vec(4, 1.0);
    const GradSample s = p->sample_grad(x, 123);
    CHECK(s.xi_seed == 123);
    CHECK(s.g == p->stoch_grad(x, 123));
}

TEST_CASE("problems reject dimension mismatches") {
    const ProblemPtr p = make_log_smooth(3, 0.5, 1);
    CHECK_THROWS_AS(p->exact_grad({1.0}), std::invalid_argument);
    CHECK_THROWS_AS(p->mean_value({1.0, 2.0}), std::invalid_argument);
}
