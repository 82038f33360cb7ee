#pragma once

// Inversion of FO-ECM coefficient maps and structural identifiability
// classification.
//
//   randles     closed-form inverse, one solution
//   single_cpe  recursive inverse of the coefficient layer, then alpha from the
//               common preimage of two unimodal a_j(alpha) equations
//   two_cpe     (alpha_1, alpha_2) from the three lowest denominator
//               coefficients, then the backward chain through the top
//               coefficients; two solutions related by branch exchange

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "focir/ecm_models.hpp"
#include "focir/frac_core.hpp"
#include "focir/transfer_function.hpp"

namespace focir {

enum class Identifiability { globally_identifiable, identifiable, unidentifiable };

struct Classification {
    Identifiability kind = Identifiability::unidentifiable;
    std::size_t count = 0;
    /// > 1 when a single returned solution stands for coinciding roots
    /// (two-CPE with alpha_1 == alpha_2).
    std::size_t multiplicity = 1;

    /// "globally_identifiable", "identifiable(k)", "identifiable(1,multiplicity=2)"
    /// or "unidentifiable".
    [[nodiscard]] std::string to_string() const;
    friend bool operator==(const Classification&, const Classification&) = default;
};

/// Tolerances of the inversion procedures.
struct IdentOptions {
    double alpha_tol = 1e-12;        ///< bisection bracket width in alpha
    double alpha_match_tol = 1e-8;   ///< relative mismatch for a common alpha root
    double recursion_tol = 1e-9;     ///< relative residual of the a_j ratio recursion
    double residual_tol = 1e-8;      ///< accepted coefficient reconstruction error
    double open_circuit_tol = 1e-10; ///< |alpha - a0| below this means R = inf
    double rank_tol = 1e-9;          ///< relative singular value cut for the Jacobian rank
    double degenerate_alpha_tol = 1e-6;  ///< |alpha_1 - alpha_2| treated as coincident
    std::size_t scan_points = 4000;  ///< alpha_1 grid of the two-CPE solve
    bool polish = true;              ///< Gauss-Newton refinement of two-CPE solutions
};

using ParameterSet = std::variant<RandlesParams, FoEcmParams>;

struct IdentifiabilityResult {
    Structure structure = Structure::unsupported;
    std::vector<ParameterSet> solutions;
    std::vector<double> residuals;  ///< per solution, see reconstruction_residual
    Classification classification;
};

/// 1 -> globally identifiable, k > 1 -> identifiable(k), continuum -> unidentifiable.
[[nodiscard]] Classification classify(std::size_t solution_count, bool continuum = false,
                                      std::size_t multiplicity = 1);

/// Numerical rank of `jac` after scaling its columns to unit norm.
[[nodiscard]] Eigen::Index scaled_rank(const Eigen::MatrixXd& jac, double rank_tol);

/// True when the forward map is locally rank deficient at `params`.
[[nodiscard]] bool has_flat_direction(const FoEcmParams& params, std::size_t horizon,
                                      double rank_tol = IdentOptions{}.rank_tol);

/// max_k |c_k - c*_k| / max_k |c*_k|.
[[nodiscard]] double reconstruction_residual(const CoefficientVector& reconstructed,
                                             const CoefficientVector& target);

/// max_k |theta_k - theta*_k| / |theta*_k| (absolute where theta*_k == 0,
/// 0 where both are open circuits), minimised over branch orderings of
/// `estimate`. +inf when the kinds or branch counts differ.
[[nodiscard]] double parameter_error(const ParameterSet& estimate, const ParameterSet& truth);

// --- Randles -------------------------------------------------------------

/// Throws SingularStructureError when 1 + g0 or f0 - f1 g0 vanishes and
/// InconsistentCoefficientsError when the inverse leaves the positive orthant.
[[nodiscard]] RandlesParams invert_randles(double f1, double f0, double g0, double ts);

[[nodiscard]] IdentifiabilityResult invert_randles(const CoefficientVector& c,
                                                   const IdentOptions& opts = {});

// --- single CPE ----------------------------------------------------------

/// argmax of a_j on (0, 1), by bisection on the log-derivative.
[[nodiscard]] double a_peak(std::size_t j);

/// All alpha in (0, 1) with a_j(alpha) == value (one or two roots). Throws
/// NoSolutionError when value is non-positive or exceeds the peak.
[[nodiscard]] std::vector<double> alpha_preimage(std::size_t j, double value,
                                                 const IdentOptions& opts = {});

/// The alpha common to the preimages of every probe j -> a_j. Requires at
/// least two distinct indices j >= 1 (std::invalid_argument otherwise);
/// throws InconsistentCoefficientsError when no common root exists.
[[nodiscard]] FractionalOrder recover_alpha_single(const std::map<std::size_t, double>& probes,
                                                   const IdentOptions& opts = {});

[[nodiscard]] IdentifiabilityResult invert_single_cpe(const CoefficientVector& c,
                                                      const IdentOptions& opts = {});

// --- two CPE -------------------------------------------------------------

struct LemmaSystem {
    double g0;
    double g1;
    double g2;
    std::size_t horizon;

    /// Reads g_0, g_1, g_2 of a two-CPE vector.
    [[nodiscard]] static LemmaSystem from(const CoefficientVector& c);
};

struct LemmaResiduals {
    double r1;
    double r2;
};

/// The two lowest-order relations between g_0, g_1, g_2 and the orders, each
/// divided by g_0:
///   r1 = g1/g0 + (T+1) (1/(a1-T) + 1/(a2-T))
///   r2 = g2/g0 - (T+1) (ahat + bhat + chat)
[[nodiscard]] LemmaResiduals lemma_residuals(double alpha1, double alpha2, const LemmaSystem& sys);

/// Every (alpha_1, alpha_2) in (0,1)^2 solving both relations, sorted by
/// alpha_1. Throws InconsistentCoefficientsError when none exists.
[[nodiscard]] std::vector<std::pair<double, double>> solve_two_cpe_alphas(
    const LemmaSystem& sys, const IdentOptions& opts = {});

[[nodiscard]] IdentifiabilityResult invert_two_cpe(const CoefficientVector& c,
                                                   const IdentOptions& opts = {});

/// Dispatches on the structure tag. Throws UnsupportedStructureError for
/// more than two branches.
[[nodiscard]] IdentifiabilityResult identify(const CoefficientVector& c,
                                             const IdentOptions& opts = {});

}  // namespace focir
