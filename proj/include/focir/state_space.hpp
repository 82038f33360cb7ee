#pragma once

// Discrete-time non-Markov fractional-order state-space model
//
//   x_{k+1} = sum_{j=0}^{k} A_j x_{k-j} + B u_k
//   y_k     = M x_k + D u_k
//
// with A_0 = diag(alpha) + diag(Ts^alpha) Abar, A_j = diag(a_j(alpha_i)) for
// j >= 1 and B = diag(Ts^alpha) Bbar. States before k = 0 are zero.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace focir {

/// Continuous model d^alpha x/dt^alpha = Abar x + Bbar u, y = M x + D u.
///
/// Orders may be any value in (0, 1]; alpha = 1 is the integer-order limit
/// where the discretization reduces to forward Euler.
struct ContinuousFoSystem {
    Eigen::MatrixXd a_bar;
    Eigen::VectorXd b_bar;
    Eigen::RowVectorXd m;
    double d = 0.0;
    std::vector<double> orders;
};

class DiscreteFoSystem {
public:
    /// `tails[i]` holds a_1..a_{j_max} of state i. Throws DimensionError on
    /// shape mismatch and DomainError for Ts <= 0 or orders outside (0, 1].
    DiscreteFoSystem(std::vector<double> orders, Eigen::MatrixXd a0,
                     std::vector<std::vector<double>> tails, Eigen::VectorXd b,
                     Eigen::RowVectorXd m, double d, double ts);

    [[nodiscard]] std::size_t state_dim() const noexcept { return orders_.size(); }
    [[nodiscard]] std::span<const double> orders() const noexcept { return orders_; }
    [[nodiscard]] const Eigen::MatrixXd& a0() const noexcept { return a0_; }
    /// Diagonal of A_j for state i, j = 1..tail_length(); [0] is a_1.
    [[nodiscard]] std::span<const double> tail(std::size_t i) const { return tails_.at(i); }
    [[nodiscard]] std::size_t tail_length() const noexcept;
    [[nodiscard]] const Eigen::VectorXd& b() const noexcept { return b_; }
    [[nodiscard]] const Eigen::RowVectorXd& m() const noexcept { return m_; }
    [[nodiscard]] double d() const noexcept { return d_; }
    [[nodiscard]] double ts() const noexcept { return ts_; }

private:
    std::vector<double> orders_;
    Eigen::MatrixXd a0_;
    std::vector<std::vector<double>> tails_;
    Eigen::VectorXd b_;
    Eigen::RowVectorXd m_;
    double d_;
    double ts_;
};

/// Requires Ts > 0 and j_max >= 1.
[[nodiscard]] DiscreteFoSystem discretize(const ContinuousFoSystem& sys, double ts,
                                          std::size_t j_max);

struct SimulationTrace {
    std::vector<double> u;   ///< u_0..u_T
    Eigen::MatrixXd x;       ///< row k holds x_k, (T+1) x n
    std::vector<double> y;   ///< y_k = M x_k + D u_k
    double ts = 0.0;
};

struct SimulationOptions {
    /// Keep only the most recent `memory_window` history terms (j <= window).
    /// Unset means the full history, which is exact.
    std::optional<std::size_t> memory_window;
};

/// Runs the full-history convolution. The history sums are accumulated with
/// a compensated dot-product kernel. Tail coefficients beyond the system's
/// stored length are generated from the orders on demand.
[[nodiscard]] SimulationTrace simulate(const DiscreteFoSystem& sys, std::span<const double> u,
                                       const Eigen::VectorXd& x0,
                                       const SimulationOptions& options = {});

/// Zero initial state.
[[nodiscard]] SimulationTrace simulate(const DiscreteFoSystem& sys, std::span<const double> u,
                                       const SimulationOptions& options = {});

}  // namespace focir
