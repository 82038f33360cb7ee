#pragma once

// Shared test helpers: seeded generators for random circuits and
// high-precision reference values computed with MPFR.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <mpfr.h>

#include "focir/ecm_models.hpp"

namespace focir::test {

constexpr mpfr_prec_t kPrec = 256;

/// RAII wrapper over one mpfr_t.
class Big {
public:
    Big() { mpfr_init2(v_, kPrec); mpfr_set_zero(v_, 1); }
    explicit Big(double x) { mpfr_init2(v_, kPrec); mpfr_set_d(v_, x, MPFR_RNDN); }
    Big(const Big& o) { mpfr_init2(v_, kPrec); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Big& operator=(const Big& o) {
        mpfr_set(v_, o.v_, MPFR_RNDN);
        return *this;
    }
    ~Big() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    [[nodiscard]] double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    friend Big operator+(const Big& a, const Big& b) {
        Big r;
        mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend Big operator-(const Big& a, const Big& b) {
        Big r;
        mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend Big operator*(const Big& a, const Big& b) {
        Big r;
        mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend Big operator/(const Big& a, const Big& b) {
        Big r;
        mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }

private:
    mpfr_t v_;
};

inline Big big_gamma(const Big& x) {
    Big r;
    mpfr_gamma(r.get(), x.get(), MPFR_RNDN);
    return r;
}

inline double ref_log_gamma(double x) {
    Big r;
    int sign = 0;
    mpfr_lgamma(r.get(), &sign, Big(x).get(), MPFR_RNDN);
    return r.to_double();
}

/// a_j(alpha) = -Gamma(j + 1 - alpha) / (Gamma(-alpha) Gamma(j + 2)).
inline Big ref_a(double alpha, std::size_t j) {
    const Big a(alpha);
    const Big jj(static_cast<double>(j));
    const Big num = big_gamma(jj + Big(1.0) - a);
    const Big den = big_gamma(Big(0.0) - a) * big_gamma(jj + Big(2.0));
    return Big(0.0) - num / den;
}

/// binom(alpha, k) = Gamma(alpha + 1) / (Gamma(k + 1) Gamma(alpha - k + 1)),
/// written as a product so integer alpha is covered too.
inline double ref_binomial(double alpha, std::size_t k) {
    Big acc(1.0);
    const Big a(alpha);
    for (std::size_t m = 0; m < k; ++m) {
        const Big md(static_cast<double>(m));
        acc = acc * (a - md) / (md + Big(1.0));
    }
    return acc.to_double();
}

/// Lowest three coefficients of (sum-form) D1 D2 for two branches.
struct RefLowG {
    double g0;
    double g1;
    double g2;
};

inline RefLowG ref_low_g(double a1, double a2, std::size_t t) {
    const Big x0 = ref_a(a1, t), x1 = ref_a(a1, t - 1), x2 = ref_a(a1, t - 2);
    const Big y0 = ref_a(a2, t), y1 = ref_a(a2, t - 1), y2 = ref_a(a2, t - 2);
    return {(x0 * y0).to_double(), (x0 * y1 + x1 * y0).to_double(),
            (x0 * y2 + x1 * y1 + x2 * y0).to_double()};
}

/// Exact dot product rounded once.
inline double ref_dot(const std::vector<double>& a, const std::vector<double>& b) {
    mpfr_t p;
    mpfr_init2(p, 4096);
    mpfr_t s;
    mpfr_init2(s, 4096);
    mpfr_set_zero(s, 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        mpfr_set_d(p, a[i], MPFR_RNDN);
        mpfr_mul_d(p, p, b[i], MPFR_RNDN);
        mpfr_add(s, s, p, MPFR_RNDN);
    }
    const double out = mpfr_get_d(s, MPFR_RNDN);
    mpfr_clear(p);
    mpfr_clear(s);
    return out;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }
    std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen_); }
    template <typename T>
    T choice(const std::vector<T>& v) { return v[pick(v.size())]; }

    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
};

/// Random finite branch with R C / ts^alpha in [1, 100], so that
/// a_0 = alpha - ts^alpha / (R C) stays in [alpha - 1, alpha - 0.01].
inline BranchParams random_branch(Rng& rng, double alpha, double ts) {
    const double r = rng.log_uniform(1e-3, 1.0);
    const double rc_over = rng.log_uniform(1.0, 100.0);  // R C / ts^alpha
    const double c = rc_over * std::pow(ts, alpha) / r;
    return {Resistance::finite(r), c, FractionalOrder(alpha)};
}

inline FoEcmParams random_single_cpe(Rng& rng) {
    const double ts = rng.choice<double>({0.01, 0.1, 1.0});
    const double alpha = rng.uniform(0.1, 0.9);
    return FoEcmParams(rng.log_uniform(1e-3, 1.0), {random_branch(rng, alpha, ts)}, ts);
}

inline FoEcmParams random_two_cpe(Rng& rng, double min_gap) {
    const double ts = rng.choice<double>({0.01, 0.1, 1.0});
    double a1 = 0.0;
    double a2 = 0.0;
    do {
        a1 = rng.uniform(0.1, 0.9);
        a2 = rng.uniform(0.1, 0.9);
    } while (std::abs(a1 - a2) <= min_gap);
    return FoEcmParams(rng.log_uniform(1e-3, 1.0),
                       {random_branch(rng, a1, ts), random_branch(rng, a2, ts)}, ts);
}

}  // namespace focir::test
