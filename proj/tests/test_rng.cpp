#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "padam/rng.hpp"

using namespace padam;

TEST_CASE("identical seed gives a bit-identical sequence") {
    SeededRng a(42), b(42);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct seeds diverge") {
    SeededRng a(1), b(2);
    int same = 0;
    for (int i = 0; i < 1000; ++i)
        if (a.next_u64() == b.next_u64()) ++same;
    CHECK(same == 0);
}

TEST_CASE("known first value pins the counter-based construction") {
    // sample k of seed s is mix64(s + k * golden); freeze one value so an
    // accidental change to the stream layout cannot slip through
    SeededRng r(0);
    CHECK(r.next_u64() == detail::mix64(detail::kGolden));
}

TEST_CASE("doubles live in [0, 1) and fill the range") {
    SeededRng r(9);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = r.next_double();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo < 0.01);
    CHECK(hi > 0.99);
}

TEST_CASE("uniform mean is roughly centred") {
    SeededRng r(5);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) sum += r.uniform(-1.0, 3.0);
    CHECK(sum / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("bernoulli frequency matches the probability") {
    SeededRng r(17);
    int hits = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i)
        if (r.bernoulli(0.2)) ++hits;
    // 4 sigma band around 0.2
    const double se = std::sqrt(0.2 * 0.8 / n);
    CHECK(std::abs(double(hits) / n - 0.2) < 4.0 * se);
}

TEST_CASE("substreams with different tags are unrelated") {
    SeededRng base(123);
    SeededRng s1 = base.substream(1);
    SeededRng s2 = base.substream(2);
    int same = 0;
    for (int i = 0; i < 1000; ++i)
        if (s1.next_u64() == s2.next_u64()) ++same;
    CHECK(same == 0);
    // and re-deriving reproduces the stream
    SeededRng s1_again = SeededRng(123).substream(1);
    SeededRng s1_ref = SeededRng(123).substream(1);
    for (int i = 0; i < 100; ++i) CHECK(s1_again.next_u64() == s1_ref.next_u64());
}

TEST_CASE("normal draws have the requested moments") {
    SeededRng r(31);
    const int n = 200000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = r.normal(2.0, 3.0);
        sum += x;
        sumsq += x * x;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(mean == doctest::Approx(2.0).epsilon(0.02));
    CHECK(var == doctest::Approx(9.0).epsilon(0.05));
}
