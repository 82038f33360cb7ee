#pragma once

// Battery equivalent-circuit models: the integer-order Randles circuit and the
// fractional-order ECM (series R_inf plus n parallel R || CPE branches), with
// the forward maps from circuit parameters to state-space matrices and
// transfer-function building blocks.

#include <cstddef>
#include <vector>

#include "focir/frac_core.hpp"
#include "focir/state_space.hpp"

namespace focir {

/// Branch resistance: finite and positive, or an open circuit (Warburg branch).
class Resistance {
public:
    /// Throws DomainError unless ohms is finite and > 0.
    [[nodiscard]] static Resistance finite(double ohms);
    [[nodiscard]] static Resistance open() noexcept { return Resistance(); }

    [[nodiscard]] bool is_open() const noexcept { return open_; }
    /// Throws std::logic_error for an open circuit.
    [[nodiscard]] double ohms() const;
    /// ohms() or +inf.
    [[nodiscard]] double value() const noexcept;

private:
    Resistance() = default;
    double ohms_ = 0.0;
    bool open_ = true;
};

struct RandlesParams {
    double r_inf;
    double r1;
    double c1;

    /// Throws DomainError unless every value is finite and > 0.
    RandlesParams(double r_inf, double r1, double c1);
};

struct BranchParams {
    Resistance r;
    double c;  ///< CPE constant, F cm^-2 s^(alpha-1); > 0
    FractionalOrder alpha;
};

class FoEcmParams {
public:
    /// Throws DomainError for r_inf < 0, ts <= 0, C <= 0 or no branches.
    FoEcmParams(double r_inf, std::vector<BranchParams> branches, double ts);

    [[nodiscard]] double r_inf() const noexcept { return r_inf_; }
    [[nodiscard]] const std::vector<BranchParams>& branches() const noexcept { return branches_; }
    [[nodiscard]] std::size_t branch_count() const noexcept { return branches_.size(); }
    [[nodiscard]] double ts() const noexcept { return ts_; }

    /// theta = [R_inf, R_1..R_n, C_1..C_n, alpha_1..alpha_n]; open branches give +inf.
    [[nodiscard]] std::vector<double> theta() const;

    /// Copy with branches reordered by the given permutation.
    [[nodiscard]] FoEcmParams permuted(const std::vector<std::size_t>& order) const;

private:
    double r_inf_;
    std::vector<BranchParams> branches_;
    double ts_;
};

struct RandlesCoefficients {
    double f1;
    double f0;
    double g0;
};

/// H(z) = (f1 z + f0) / (z + g0) of the sampled Randles circuit.
[[nodiscard]] RandlesCoefficients randles_tf_coeffs(const RandlesParams& p, double ts);

struct BranchCoefficients {
    double a0;
    std::vector<double> a_tail;  ///< a_1..a_T
    double b;
    double d;
    double m = 1.0;
};

/// a0 = alpha - Ts^alpha / (R C); alpha for an open branch. Any alpha in (0, 1].
[[nodiscard]] double branch_a0(double alpha, double ts, const Resistance& r, double c);

/// b = Ts^alpha / C.
[[nodiscard]] double branch_gain(double alpha, double ts, double c);

/// Per-branch coefficients of branch i with tail horizon T >= 1.
[[nodiscard]] BranchCoefficients branch_coefficients(const FoEcmParams& p, std::size_t i,
                                                     std::size_t horizon);

/// Diagonal discrete model: A_j = diag(a_{i,j}), B = [b_i], M = ones, D = R_inf.
[[nodiscard]] DiscreteFoSystem to_state_space(const FoEcmParams& p, std::size_t horizon);

/// Continuous branch dynamics: Abar = diag(-1/(R_i C_i)), Bbar = [1/C_i].
[[nodiscard]] ContinuousFoSystem to_continuous(const FoEcmParams& p);

}  // namespace focir
