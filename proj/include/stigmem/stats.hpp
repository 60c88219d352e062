#pragma once
// Small statistics toolbox: Welch's unequal-variance t-test with a
// continued-fraction Student-t tail, and Spearman rank correlation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "stigmem/errors.hpp"

namespace stigmem {

namespace detail {

// Lentz continued fraction for the regularized incomplete beta function.
inline double ibeta_cf(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-15;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 500; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

} // namespace detail

// Regularized incomplete beta I_x(a, b), accurate to ~1e-14.
inline double regularized_incomplete_beta(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0) throw argument_error("stats: beta parameters must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::ibeta_cf(a, b, x) / a;
    return 1.0 - front * detail::ibeta_cf(b, a, 1.0 - x) / b;
}

// Two-tailed p-value of a Student-t statistic with `df` degrees of freedom:
// P(|T| >= |t|) = I_{df/(df+t^2)}(df/2, 1/2).
inline double student_t_two_tailed_p(double t, double df) {
    if (df <= 0.0) throw argument_error("stats: degrees of freedom must be positive");
    if (!std::isfinite(t)) return 0.0;
    const double x = df / (df + t * t);
    return regularized_incomplete_beta(df / 2.0, 0.5, x);
}

inline double mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

// Unbiased sample variance (n - 1 denominator).
inline double sample_variance(const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / double(v.size() - 1);
}

inline double sample_stddev(const std::vector<double>& v) {
    return std::sqrt(sample_variance(v));
}

struct WelchResult {
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;
};

// Welch's unequal-variance t-test with Welch-Satterthwaite degrees of
// freedom and a two-tailed p-value.
inline WelchResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2)
        throw argument_error("stats: welch test needs at least two samples per group");
    const double na = double(a.size());
    const double nb = double(b.size());
    const double va = sample_variance(a);
    const double vb = sample_variance(b);
    const double se2 = va / na + vb / nb;
    if (se2 <= 0.0) throw argument_error("stats: welch test needs nonzero variance");
    WelchResult r;
    r.t = (mean(a) - mean(b)) / std::sqrt(se2);
    const double qa = va / na;
    const double qb = vb / nb;
    r.df = se2 * se2 / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
    r.p = student_t_two_tailed_p(r.t, r.df);
    return r;
}

// Mid-ranks (ties get the average rank).
inline std::vector<double> ranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t(0));
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        if (v[i] != v[j]) return v[i] < v[j];
        return i < j;
    });
    std::vector<double> out(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double r = 0.5 * double(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) out[order[k]] = r;
        i = j + 1;
    }
    return out;
}

struct SpearmanResult {
    double rho = 0.0;
    double t = 0.0;
    double p = 1.0;
};

// Spearman rank correlation; significance via the t approximation with
// n - 2 degrees of freedom.
inline SpearmanResult spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw argument_error("stats: spearman needs paired samples");
    if (x.size() < 3) throw argument_error("stats: spearman needs at least three pairs");
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    const double mx = mean(rx);
    const double my = mean(ry);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        const double dx = rx[i] - mx;
        const double dy = ry[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) throw argument_error("stats: spearman needs rank variation");
    SpearmanResult r;
    r.rho = sxy / std::sqrt(sxx * syy);
    const double n = double(rx.size());
    const double denom = 1.0 - r.rho * r.rho;
    if (denom < 1e-15) {
        r.t = std::copysign(std::numeric_limits<double>::infinity(), r.rho);
        r.p = 0.0;
        return r;
    }
    r.t = r.rho * std::sqrt((n - 2.0) / denom);
    r.p = student_t_two_tailed_p(r.t, n - 2.0);
    return r;
}

} // namespace stigmem
