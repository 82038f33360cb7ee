#pragma once

// Special-function kernel for Grünwald-Letnikov fractional calculus:
// log-gamma, generalized binomial coefficients, GL weight sequences, the
// state-transition tail a_j(alpha) and commensurability testing.

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

namespace focir {

/// A derivative order strictly inside (0, 1).
class FractionalOrder {
public:
    /// Throws DomainError unless 0 < alpha < 1.
    explicit FractionalOrder(double alpha);

    [[nodiscard]] double value() const noexcept { return alpha_; }

    friend auto operator<=>(const FractionalOrder&, const FractionalOrder&) = default;

private:
    double alpha_;
};

/// ln Γ(x) for x > 0. Throws DomainError for x <= 0 or NaN.
[[nodiscard]] double log_gamma(double x);

/// Generalized binomial coefficient binom(alpha, j) by the finite product
/// prod_{m<j} (alpha - m) / (m + 1). Total for every real alpha and j >= 0.
[[nodiscard]] double frac_binomial(double alpha, std::size_t j);

/// GL weights w_j = (-1)^j binom(alpha, j), j = 0..j_max.
class GlWeightSequence {
public:
    GlWeightSequence(FractionalOrder alpha, std::size_t j_max);

    [[nodiscard]] FractionalOrder alpha() const noexcept { return alpha_; }
    [[nodiscard]] std::size_t j_max() const noexcept { return weights_.size() - 1; }
    [[nodiscard]] double operator[](std::size_t j) const { return weights_.at(j); }
    [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }

private:
    FractionalOrder alpha_;
    std::vector<double> weights_;
};

[[nodiscard]] GlWeightSequence gl_weights(FractionalOrder alpha, std::size_t j_max);

/// Raw tail coefficients a_1..a_{j_max} with a_j = -(-1)^{j+1} binom(alpha, j+1),
/// seeded with a_1 = alpha(1 - alpha)/2 and advanced by
/// a_{j+1} = -(alpha - j - 1)/(j + 2) a_j. Element [0] holds a_1.
/// Accepts any real order, including the integer limit alpha = 1 (all zero).
[[nodiscard]] std::vector<double> a_coefficients(double alpha, std::size_t j_max);

/// The tail sequence of a fractional order, 1-based: seq[j] = a_j.
class ASequence {
public:
    ASequence(FractionalOrder alpha, std::size_t j_max);

    [[nodiscard]] FractionalOrder alpha() const noexcept { return alpha_; }
    [[nodiscard]] std::size_t j_max() const noexcept { return values_.size(); }
    /// a_j for 1 <= j <= j_max; throws std::out_of_range otherwise.
    [[nodiscard]] double operator[](std::size_t j) const;
    /// a_1..a_{j_max}, contiguous.
    [[nodiscard]] std::span<const double> tail() const noexcept { return values_; }

private:
    FractionalOrder alpha_;
    std::vector<double> values_;
};

/// Requires j_max >= 1.
[[nodiscard]] ASequence a_sequence(FractionalOrder alpha, std::size_t j_max);

/// Single tail coefficient a_j(alpha), j >= 1, by the direct product in O(j).
[[nodiscard]] double a_coefficient(double alpha, std::size_t j);

/// d/dalpha ln a_j(alpha) = 1/alpha - sum_{k=1}^{j} 1/(k - alpha), for 0 < alpha < 1.
/// Strictly decreasing in alpha, so a_j is log-concave and unimodal on (0, 1).
[[nodiscard]] double a_log_derivative(double alpha, std::size_t j);

inline constexpr double kDefaultCommensurateTol = 1e-9;

/// True iff every alphas[i] / base lies within tol of a positive integer.
/// Throws DomainError for base <= 0 or any alpha <= 0.
[[nodiscard]] bool is_commensurate(std::span<const double> alphas, double base,
                                   double tol = kDefaultCommensurateTol);

}  // namespace focir
