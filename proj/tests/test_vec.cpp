#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "padam/rng.hpp"
#include "padam/vec.hpp"

using namespace padam;

namespace {

Vec random_vec(SeededRng& rng, std::size_t d, double lo, double hi) {
    Vec v(d);
    for (double& x : v) x = rng.uniform(lo, hi);
    return v;
}

}  // namespace

TEST_CASE("ew_max hand cases") {
    CHECK(ew_max({4.0}, {1.0}) == Vec{4.0});
    CHECK(ew_max({0.0, 0.0}, {0.0, 0.0}) == Vec{0.0, 0.0});
    CHECK(ew_max({0.09, 0.16}, {0.04, 0.25}) == Vec{0.09, 0.25});
    CHECK_THROWS_AS(ew_max({1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("ew_max is idempotent, commutative, monotone") {
    SeededRng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t d = 1 + rng.below(8);
        const Vec a = random_vec(rng, d, -5.0, 5.0);
        const Vec b = random_vec(rng, d, -5.0, 5.0);
        const Vec ab = ew_max(a, b);
        CHECK(ew_max(a, ab) == ab);
        CHECK(ew_max(b, a) == ab);
        for (std::size_t i = 0; i < d; ++i) {
            CHECK(ab[i] >= a[i]);
            CHECK(ab[i] >= b[i]);
        }
    }
}

TEST_CASE("ew_pow hand cases") {
    const Vec r = ew_pow({0.09, 0.16}, -0.5);
    CHECK(r[0] == doctest::Approx(10.0 / 3.0).epsilon(1e-14));
    CHECK(r[1] == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(ew_pow({5.0, 7.0}, 0.0) == Vec{1.0, 1.0});
    CHECK(ew_pow({4.0}, 1.0) == Vec{4.0});
    CHECK_THROWS_AS(ew_pow({0.0}, -0.5), std::domain_error);
    CHECK_THROWS_AS(ew_pow({-1.0}, -0.25), std::domain_error);
    CHECK_THROWS_AS(ew_pow({1.0}, 1.5), std::invalid_argument);
}

TEST_CASE("ew_pow round-trips through the inverse exponent") {
    // the inverse exponent 1/p leaves the op's [-1, 1] domain for p < 1, so
    // the inversion is applied oracle-side
    SeededRng rng(11);
    for (double p : {0.25, 0.5, 1.0}) {
        for (int trial = 0; trial < 100; ++trial) {
            const Vec a = random_vec(rng, 1 + rng.below(6), 1e-6, 50.0);
            const Vec fwd = ew_pow(a, p);
            for (std::size_t i = 0; i < a.size(); ++i)
                CHECK(std::pow(fwd[i], 1.0 / p) == doctest::Approx(a[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("norms hand cases") {
    const Norms n = norms({3.0, -4.0});
    CHECK(n.l1 == 7.0);
    CHECK(n.l2 == 5.0);
    CHECK(n.linf == 4.0);
    const Norms z = norms({0.0, 0.0});
    CHECK(z.l1 == 0.0);
    CHECK(z.l2 == 0.0);
    CHECK(z.linf == 0.0);
    const Norms s = norms({-2.0});
    CHECK(s.l1 == 2.0);
    CHECK(s.l2 == 2.0);
    CHECK(s.linf == 2.0);
}

TEST_CASE("norm ordering linf <= l2 <= sqrt(d) linf") {
    SeededRng rng(13);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t d = 1 + rng.below(16);
        const Vec a = random_vec(rng, d, -10.0, 10.0);
        const Norms n = norms(a);
        CHECK(n.linf <= n.l2 * (1.0 + 1e-15));
        CHECK(n.l2 <= std::sqrt(static_cast<double>(d)) * n.linf * (1.0 + 1e-15));
    }
}

TEST_CASE("finite checks") {
    CHECK(all_finite({1.0, 2.0}));
    CHECK_FALSE(all_finite({1.0, std::nan("")}));
    CHECK_FALSE(all_finite({1.0, INFINITY}));
    CHECK_THROWS_AS(require_finite({INFINITY}, "test"), std::domain_error);
}
