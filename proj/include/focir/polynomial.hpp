#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace focir {

/// Dense real polynomial in z; coeffs()[i] multiplies z^i.
/// Trailing zero high-order coefficients are trimmed, so the leading
/// coefficient is nonzero unless this is the zero polynomial.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs);
    Polynomial(std::initializer_list<double> coeffs);

    /// c z^power.
    [[nodiscard]] static Polynomial monomial(double c, std::size_t power);

    [[nodiscard]] bool is_zero() const noexcept { return coeffs_.empty(); }
    /// Degree; 0 for the zero polynomial.
    [[nodiscard]] std::size_t degree() const noexcept;
    [[nodiscard]] std::span<const double> coeffs() const noexcept { return coeffs_; }
    /// Coefficient of z^power, 0 beyond the degree.
    [[nodiscard]] double operator[](std::size_t power) const noexcept;

    [[nodiscard]] std::complex<double> evaluate(std::complex<double> z) const noexcept;

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    void trim();
    std::vector<double> coeffs_;
};

/// Exact convolution of the coefficient arrays.
[[nodiscard]] Polynomial poly_mul(const Polynomial& p, const Polynomial& q);

[[nodiscard]] Polynomial poly_add(const Polynomial& p, const Polynomial& q);

[[nodiscard]] Polynomial poly_scale(const Polynomial& p, double c);

}  // namespace focir
