#include "focir/frac_core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "focir/errors.hpp"

namespace focir {

FractionalOrder::FractionalOrder(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("fractional order must lie in the open interval (0, 1), got " +
                          std::to_string(alpha));
    }
}

double log_gamma(double x) {
    if (!(x > 0.0)) {
        throw DomainError("log_gamma requires x > 0");
    }
    if (std::isinf(x)) {
        return x;
    }
    if (x == 1.0 || x == 2.0) {
        return 0.0;
    }

    // Extended precision keeps the result within half an ulp up to x ~ 200,
    // where ln Γ is already in the hundreds.
    long double z = x;
    long double shift = 1.0L;
    while (z < 16.0L) {
        shift *= z;
        z += 1.0L;
    }

    constexpr long double half_log_two_pi = 0.918938533204672741780329736405617639861L;
    const long double inv = 1.0L / z;
    const long double inv2 = inv * inv;
    // Stirling tail B_{2k} / (2k (2k-1) z^{2k-1}), k = 1..8.
    const long double series =
        inv * (1.0L / 12.0L -
               inv2 * (1.0L / 360.0L -
                       inv2 * (1.0L / 1260.0L -
                               inv2 * (1.0L / 1680.0L -
                                       inv2 * (1.0L / 1188.0L -
                                               inv2 * (691.0L / 360360.0L -
                                                       inv2 * (1.0L / 156.0L -
                                                               inv2 * (3617.0L / 122400.0L))))))));

    const long double result =
        (z - 0.5L) * std::log(z) - z + half_log_two_pi + series - std::log(shift);
    return static_cast<double>(result);
}

double frac_binomial(double alpha, std::size_t j) {
    double c = 1.0;
    for (std::size_t m = 0; m < j; ++m) {
        c *= (alpha - static_cast<double>(m)) / static_cast<double>(m + 1);
    }
    return c;
}

GlWeightSequence::GlWeightSequence(FractionalOrder alpha, std::size_t j_max)
    : alpha_(alpha), weights_(j_max + 1) {
    const double a = alpha.value();
    weights_[0] = 1.0;
    for (std::size_t j = 1; j <= j_max; ++j) {
        const auto jd = static_cast<double>(j);
        weights_[j] = weights_[j - 1] * (jd - 1.0 - a) / jd;
    }
}

GlWeightSequence gl_weights(FractionalOrder alpha, std::size_t j_max) {
    return GlWeightSequence(alpha, j_max);
}

std::vector<double> a_coefficients(double alpha, std::size_t j_max) {
    std::vector<double> a(j_max);
    if (j_max == 0) {
        return a;
    }
    a[0] = alpha * (1.0 - alpha) / 2.0;
    for (std::size_t j = 1; j < j_max; ++j) {
        const auto jd = static_cast<double>(j);
        a[j] = -(alpha - jd - 1.0) / (jd + 2.0) * a[j - 1];
    }
    return a;
}

ASequence::ASequence(FractionalOrder alpha, std::size_t j_max)
    : alpha_(alpha), values_(a_coefficients(alpha.value(), j_max)) {
    if (j_max < 1) {
        throw std::invalid_argument("a_sequence requires j_max >= 1");
    }
}

double ASequence::operator[](std::size_t j) const {
    if (j < 1 || j > values_.size()) {
        throw std::out_of_range("a_sequence index " + std::to_string(j) + " outside 1.." +
                                std::to_string(values_.size()));
    }
    return values_[j - 1];
}

ASequence a_sequence(FractionalOrder alpha, std::size_t j_max) {
    return ASequence(alpha, j_max);
}

double a_coefficient(double alpha, std::size_t j) {
    if (j < 1) {
        throw std::invalid_argument("a_coefficient requires j >= 1");
    }
    double a = alpha * (1.0 - alpha) / 2.0;
    for (std::size_t m = 1; m < j; ++m) {
        const auto md = static_cast<double>(m);
        a *= (md + 1.0 - alpha) / (md + 2.0);
    }
    return a;
}

double a_log_derivative(double alpha, std::size_t j) {
    double sum = 0.0;
    for (std::size_t k = j; k >= 1; --k) {
        sum += 1.0 / (static_cast<double>(k) - alpha);
    }
    return 1.0 / alpha - sum;
}

bool is_commensurate(std::span<const double> alphas, double base, double tol) {
    if (!(base > 0.0)) {
        throw DomainError("commensurability base order must be positive");
    }
    for (double a : alphas) {
        if (!(a > 0.0)) {
            throw DomainError("derivative orders must be positive");
        }
    }
    for (double a : alphas) {
        const double ratio = a / base;
        const double nearest = std::round(ratio);
        if (nearest < 1.0 || std::abs(ratio - nearest) > tol) {
            return false;
        }
    }
    return true;
}

}  // namespace focir
