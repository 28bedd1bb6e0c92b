#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace padam {

// Dense real vector. Parameters, gradients and moment estimates all share
// this representation; every binary op requires equal dimension.
using Vec = std::vector<double>;

struct Norms {
    double l1 = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
};

inline void require_same_dim(const Vec& a, const Vec& b, const char* where) {
    if (a.size() != b.size()) {
        throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                    std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
    }
}

inline bool all_finite(const Vec& a) {
    for (double x : a) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

inline void require_finite(const Vec& a, const char* where) {
    if (!all_finite(a)) {
        throw std::domain_error(std::string(where) + ": non-finite entry");
    }
}

inline Vec zeros(std::size_t d) { return Vec(d, 0.0); }

inline Vec constant_vec(std::size_t d, double value) { return Vec(d, value); }

// Element-wise maximum. Ties keep either operand (values are equal).
inline Vec ew_max(const Vec& a, const Vec& b) {
    require_same_dim(a, b, "ew_max");
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max(a[i], b[i]);
    return out;
}

// Element-wise power a[i]^p for p in [-1, 1]. Negative exponents require
// strictly positive entries; callers must floor beforehand.
inline Vec ew_pow(const Vec& a, double p) {
    if (!(p >= -1.0 && p <= 1.0)) {
        throw std::invalid_argument("ew_pow: exponent " + std::to_string(p) +
                                    " outside [-1, 1]");
    }
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (p < 0.0 && !(a[i] > 0.0)) {
            throw std::domain_error("ew_pow: nonpositive entry " + std::to_string(a[i]) +
                                    " at index " + std::to_string(i) +
                                    " with negative exponent");
        }
        out[i] = std::pow(a[i], p);
    }
    return out;
}

inline Norms norms(const Vec& a) {
    Norms n;
    double sq = 0.0;
    for (double x : a) {
        const double ax = std::abs(x);
        n.l1 += ax;
        sq += x * x;
        if (ax > n.linf) n.linf = ax;
    }
    n.l2 = std::sqrt(sq);
    return n;
}

inline double norm_l2_sq(const Vec& a) {
    double sq = 0.0;
    for (double x : a) sq += x * x;
    return sq;
}

inline double norm_linf(const Vec& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

inline double norm_l1(const Vec& a) {
    double s = 0.0;
    for (double x : a) s += std::abs(x);
    return s;
}

inline Vec sub(const Vec& a, const Vec& b) {
    require_same_dim(a, b, "sub");
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

inline Vec add(const Vec& a, const Vec& b) {
    require_same_dim(a, b, "add");
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

inline Vec scale(const Vec& a, double c) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
    return out;
}

inline Vec ew_mul(const Vec& a, const Vec& b) {
    require_same_dim(a, b, "ew_mul");
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

}  // namespace padam
