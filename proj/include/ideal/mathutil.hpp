// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

namespace ideal {

inline constexpr double kLogTwoPi = 1.8378770664093454836;  // ln(2*pi)
inline constexpr double kSqrtTwo = 1.4142135623730950488;

// log(1 + exp(t)) without overflow.
inline double softplus(double t) {
    if (t > 35.0) return t;
    if (t < -35.0) return std::exp(t);
    return std::log1p(std::exp(t));
}

inline double logistic_cdf(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double norm_pdf(double x) { return std::exp(-0.5 * x * x - 0.5 * kLogTwoPi); }

inline double norm_log_pdf(double x) { return -0.5 * x * x - 0.5 * kLogTwoPi; }

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / kSqrtTwo); }

// log Phi(x), stable deep into both tails. erfc underflows near x = -37.5,
// below that an asymptotic expansion of the Mills ratio takes over.
inline double log_norm_cdf(double x) {
    if (x > 5.0) return std::log1p(-0.5 * std::erfc(x / kSqrtTwo));
    if (x > -37.0) return std::log(0.5 * std::erfc(-x / kSqrtTwo));
    const double x2 = x * x;
    const double series = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
    return norm_log_pdf(x) - std::log(-x) + std::log(series);
}

// phi(x)/Phi(x); both logs are stable so the ratio survives far tails.
inline double inverse_mills(double x) {
    return std::exp(norm_log_pdf(x) - log_norm_cdf(x));
}

// Two-sided normal p-value for a z statistic.
inline double normal_two_sided_p(double z) { return std::erfc(std::fabs(z) / kSqrtTwo); }

// Survival function of chi-square with 1 degree of freedom.
inline double chisq1_sf(double x) {
    if (x <= 0.0) return 1.0;
    return std::erfc(std::sqrt(0.5 * x));
}

inline double logit(double p) { return std::log(p / (1.0 - p)); }

// Compensated (Kahan) accumulator; keeps grid reductions order-stable.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double v) {
        const double y = v - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

inline double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Sample variance, divisor n-1.
inline double sample_var(const std::vector<double>& v) {
    const std::size_t n = v.size();
    if (n < 2) return 0.0;
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return ss / static_cast<double>(n - 1);
}

inline double sample_sd(const std::vector<double>& v) { return std::sqrt(sample_var(v)); }

// Linear-interpolation order statistic at index h = (n-1)p over a sorted
// vector (R type 7). CI endpoints depend on this exact rule.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 0) return std::nan("");
    if (n == 1) return sorted[0];
    const double h = static_cast<double>(n - 1) * p;
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline double quantile_of(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    return quantile_sorted(v, p);
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) return std::nan("");
    const double mx = mean_of(x), my = mean_of(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return std::nan("");
    return sxy / std::sqrt(sxx * syy);
}

// Average ranks; ties share the mean of the rank positions they span.
inline std::vector<double> rank_average(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    return pearson(rank_average(x), rank_average(y));
}

}  // namespace ideal
