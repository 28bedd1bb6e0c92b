#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace padam {

inline double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) throw std::invalid_argument("mean_of: empty sample");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

// Sample standard deviation (n-1 denominator).
inline double stddev_of(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean_of(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

inline double stderr_of(const std::vector<double>& xs) {
    return stddev_of(xs) / std::sqrt(static_cast<double>(xs.size()));
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("linear_fit: need >= 2 paired points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("linear_fit: degenerate abscissae");
    LinearFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (f.intercept + f.slope * x[i]);
        ss_res += e * e;
    }
    f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

// Pearson chi-square statistic for observed counts against probabilities.
inline double chi_square_stat(const std::vector<long>& observed,
                              const std::vector<double>& probs) {
    if (observed.size() != probs.size() || observed.empty())
        throw std::invalid_argument("chi_square_stat: size mismatch");
    long total = 0;
    for (long o : observed) total += o;
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double expected = probs[i] * static_cast<double>(total);
        if (!(expected > 0.0)) throw std::invalid_argument("chi_square_stat: zero expectation");
        const double diff = static_cast<double>(observed[i]) - expected;
        stat += diff * diff / expected;
    }
    return stat;
}

// Wilson-Hilferty approximation of the chi-square 0.99 quantile; accurate to
// a few parts in 1e3 for df >= 3, plenty for a goodness-of-fit gate.
inline double chi_square_crit99(int df) {
    if (df < 1) throw std::invalid_argument("chi_square_crit99: df must be >= 1");
    const double z99 = 2.3263478740408408;  // standard normal 0.99 quantile
    const double k = static_cast<double>(df);
    const double a = 2.0 / (9.0 * k);
    const double c = 1.0 - a + z99 * std::sqrt(a);
    return k * c * c * c;
}

}  // namespace padam
