#pragma once

// Monic rational transfer functions of FO-ECMs and their coefficient maps.
//
// One branch contributes b z^T / (z^{T+1} - sum_{j=0}^{T} a_j z^{T-j}); the
// assembled model d + sum_i branch_i is brought over the product of the
// (monic) branch denominators, so the result has degree n(T+1).

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "focir/ecm_models.hpp"
#include "focir/polynomial.hpp"

namespace focir {

struct BranchTF {
    double b = 0.0;
    Polynomial denominator;  ///< monic, degree T+1
    std::size_t horizon = 0;

    [[nodiscard]] Polynomial numerator() const { return Polynomial::monomial(b, horizon); }
};

/// `a_tail[j-1]` is a_j; needs at least T entries (DimensionError otherwise).
[[nodiscard]] BranchTF branch_tf(double b, double a0, std::span<const double> a_tail,
                                 std::size_t horizon);

class MonicRationalTF {
public:
    /// f: numerator coefficients by power (size deg+1); g: denominator
    /// coefficients by power excluding the implicit leading 1 (size deg).
    MonicRationalTF(std::vector<double> f, std::vector<double> g);

    [[nodiscard]] std::size_t degree() const noexcept { return g_.size(); }
    [[nodiscard]] std::span<const double> f() const noexcept { return f_; }
    [[nodiscard]] std::span<const double> g() const noexcept { return g_; }
    [[nodiscard]] double f(std::size_t power) const { return f_.at(power); }
    [[nodiscard]] double g(std::size_t power) const { return g_.at(power); }

    [[nodiscard]] Polynomial numerator() const { return Polynomial(f_); }
    [[nodiscard]] Polynomial denominator() const;
    [[nodiscard]] std::complex<double> evaluate(std::complex<double> z) const;

private:
    std::vector<double> f_;
    std::vector<double> g_;
};

/// d + sum of branches over the product denominator. Throws DimensionError
/// when branches have different horizons or the list is empty.
[[nodiscard]] MonicRationalTF assemble_tf(double d, std::span<const BranchTF> branches);

/// First `count` Markov parameters h_k of the expansion H(z) = sum h_k z^{-k},
/// by long division.
[[nodiscard]] std::vector<double> impulse_response(const MonicRationalTF& tf, std::size_t count);

enum class Structure { randles, single_cpe, two_cpe, unsupported };

[[nodiscard]] std::string_view to_string(Structure s) noexcept;
/// Throws std::invalid_argument for an unknown tag.
[[nodiscard]] Structure structure_from_string(std::string_view tag);

/// Image of the coefficient map: (f_deg..f_0, g_{deg-1}..g_0), highest power first.
class CoefficientVector {
public:
    /// values.size() must be odd (2 deg + 1).
    CoefficientVector(std::vector<double> values, Structure structure, std::size_t horizon,
                      double ts);

    [[nodiscard]] static CoefficientVector from_tf(const MonicRationalTF& tf, Structure structure,
                                                   std::size_t horizon, double ts);

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] Structure structure() const noexcept { return structure_; }
    [[nodiscard]] std::size_t horizon() const noexcept { return horizon_; }
    [[nodiscard]] double ts() const noexcept { return ts_; }
    [[nodiscard]] std::size_t degree() const noexcept { return (values_.size() - 1) / 2; }

    /// Numerator coefficient of z^power, 0 <= power <= degree().
    [[nodiscard]] double f(std::size_t power) const;
    /// Denominator coefficient of z^power, 0 <= power < degree().
    [[nodiscard]] double g(std::size_t power) const;
    /// Both blocks indexed by power (f size deg+1, g size deg).
    [[nodiscard]] std::vector<double> f_by_power() const;
    [[nodiscard]] std::vector<double> g_by_power() const;

    [[nodiscard]] MonicRationalTF to_tf() const;

private:
    std::vector<double> values_;
    Structure structure_;
    std::size_t horizon_;
    double ts_;
};

/// Tags 1 branch as single_cpe, 2 as two_cpe, more as unsupported.
[[nodiscard]] CoefficientVector coefficient_map(const FoEcmParams& params, std::size_t horizon);

/// Randles circuit, length-3 vector (f1, f0, g0).
[[nodiscard]] CoefficientVector coefficient_map(const RandlesParams& params, double ts);

/// Per-branch intermediate coordinates (b_i, a_{i,0}, alpha_i) of an FO-ECM plus
/// the feed-through d. The coefficient map factors through these.
struct LiftedBranch {
    double b;
    double a0;
    double alpha;
};

struct LiftedParams {
    double d;
    std::vector<LiftedBranch> branches;
};

[[nodiscard]] LiftedParams lift(const FoEcmParams& params);

[[nodiscard]] MonicRationalTF assemble_lifted(const LiftedParams& lifted, std::size_t horizon);

/// Analytic Jacobian of the highest-first coefficient vector with respect to
/// the lifted coordinates ordered [d, b_1, a_{1,0}, alpha_1, b_2, ...].
[[nodiscard]] Eigen::MatrixXd lifted_jacobian(const LiftedParams& lifted, std::size_t horizon);

/// Jacobian of the coefficient map with respect to theta (open branches omit
/// their resistance column), ordered as FoEcmParams::theta().
[[nodiscard]] Eigen::MatrixXd theta_jacobian(const FoEcmParams& params, std::size_t horizon);

}  // namespace focir
