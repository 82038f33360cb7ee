#pragma once

#include <cmath>
#include <cstddef>

namespace focir::simd::detail {

// Knuth TwoSum: s + err == a + b exactly.
inline void two_sum(double a, double b, double& s, double& err) noexcept {
    s = a + b;
    const double bb = s - a;
    err = (a - (s - bb)) + (b - bb);
}

// One Dot2 step: TwoProd by FMA, TwoSum into p, errors gathered in c.
inline void dot2_step(double x, double y, double& p, double& c) noexcept {
    const double h = x * y;
    const double r = std::fma(x, y, -h);
    double q;
    two_sum(p, h, p, q);
    c += q + r;
}

// Folds per-lane (sum, compensation) pairs into one unrounded pair (p, c).
inline void fold_lanes(const double* sums, const double* comps, int lanes, double& p,
                       double& c) noexcept {
    p = 0.0;
    c = 0.0;
    for (int l = 0; l < lanes; ++l) {
        double e;
        two_sum(p, sums[l], p, e);
        c += e + comps[l];
    }
}

// Vector body followed by the scalar remainder, rounded once at the end.
inline double finish(const double* sums, const double* comps, int lanes, const double* a,
                     const double* b, std::size_t n) noexcept {
    double p;
    double c;
    fold_lanes(sums, comps, lanes, p, c);
    for (std::size_t i = 0; i < n; ++i) dot2_step(a[i], b[i], p, c);
    return p + c;
}

}  // namespace focir::simd::detail
