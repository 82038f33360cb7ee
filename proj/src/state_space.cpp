#include "focir/state_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "focir/errors.hpp"
#include "focir/frac_core.hpp"
#include "focir/simd/dot.hpp"

namespace focir {

namespace {

void check_order(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("derivative order must lie in (0, 1], got " + std::to_string(alpha));
    }
}

}  // namespace

DiscreteFoSystem::DiscreteFoSystem(std::vector<double> orders, Eigen::MatrixXd a0,
                                   std::vector<std::vector<double>> tails, Eigen::VectorXd b,
                                   Eigen::RowVectorXd m, double d, double ts)
    : orders_(std::move(orders)),
      a0_(std::move(a0)),
      tails_(std::move(tails)),
      b_(std::move(b)),
      m_(std::move(m)),
      d_(d),
      ts_(ts) {
    const auto n = static_cast<Eigen::Index>(orders_.size());
    if (n == 0) {
        throw DimensionError("state dimension must be at least 1");
    }
    if (a0_.rows() != n || a0_.cols() != n || b_.size() != n || m_.size() != n ||
        static_cast<Eigen::Index>(tails_.size()) != n) {
        throw DimensionError("discrete system matrices do not match the state dimension");
    }
    for (const auto& t : tails_) {
        if (t.size() != tails_.front().size()) {
            throw DimensionError("all tail sequences must have the same length");
        }
    }
    std::for_each(orders_.begin(), orders_.end(), check_order);
    if (!(ts_ > 0.0)) {
        throw DomainError("sample time must be positive");
    }
}

std::size_t DiscreteFoSystem::tail_length() const noexcept { return tails_.front().size(); }

DiscreteFoSystem discretize(const ContinuousFoSystem& sys, double ts, std::size_t j_max) {
    if (!(ts > 0.0)) {
        throw DomainError("sample time must be positive");
    }
    if (j_max < 1) {
        throw std::invalid_argument("discretize requires j_max >= 1");
    }
    const auto n = static_cast<Eigen::Index>(sys.orders.size());
    if (sys.a_bar.rows() != n || sys.a_bar.cols() != n || sys.b_bar.size() != n ||
        sys.m.size() != n) {
        throw DimensionError("continuous system matrices do not match the number of orders");
    }
    std::for_each(sys.orders.begin(), sys.orders.end(), check_order);

    Eigen::VectorXd scale(n);
    Eigen::VectorXd alpha(n);
    std::vector<std::vector<double>> tails;
    tails.reserve(sys.orders.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        const double a = sys.orders[static_cast<std::size_t>(i)];
        alpha(i) = a;
        scale(i) = std::pow(ts, a);
        tails.push_back(a_coefficients(a, j_max));
    }
    Eigen::MatrixXd a0 = scale.asDiagonal() * sys.a_bar;
    a0.diagonal() += alpha;
    Eigen::VectorXd b = scale.asDiagonal() * sys.b_bar;
    return DiscreteFoSystem(sys.orders, std::move(a0), std::move(tails), std::move(b), sys.m,
                            sys.d, ts);
}

SimulationTrace simulate(const DiscreteFoSystem& sys, std::span<const double> u,
                         const Eigen::VectorXd& x0, const SimulationOptions& options) {
    const std::size_t n = sys.state_dim();
    if (u.empty()) {
        throw std::invalid_argument("simulate requires at least one input sample");
    }
    if (static_cast<std::size_t>(x0.size()) != n) {
        throw DimensionError("initial state dimension does not match the system");
    }
    const std::size_t samples = u.size();
    const std::size_t steps = samples - 1;

    // Longest history lag ever used: j <= k <= steps-1, capped by the window.
    std::size_t lag = steps > 0 ? steps - 1 : 0;
    if (options.memory_window) {
        lag = std::min(lag, *options.memory_window);
    }

    // Reversed tails so that each history sum is one contiguous dot product:
    // rev[lag - j] = a_j, paired with x_{k-j} stored in ascending time order.
    std::vector<std::vector<double>> rev(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> tail;
        if (sys.tail_length() >= lag) {
            auto t = sys.tail(i);
            tail.assign(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(lag));
        } else {
            tail = a_coefficients(sys.orders()[i], lag);
        }
        rev[i].assign(tail.rbegin(), tail.rend());
    }

    // Per-state histories in time order, contiguous for the kernel.
    std::vector<std::vector<double>> hist(n, std::vector<double>(samples, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        hist[i][0] = x0(static_cast<Eigen::Index>(i));
    }

    const Eigen::MatrixXd& a0 = sys.a0();
    const Eigen::VectorXd& b = sys.b();
    Eigen::VectorXd xk(static_cast<Eigen::Index>(n));
    Eigen::VectorXd next(static_cast<Eigen::Index>(n));

    for (std::size_t k = 0; k < steps; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            xk(static_cast<Eigen::Index>(i)) = hist[i][k];
        }
        next.noalias() = a0 * xk;
        next += b * u[k];
        const std::size_t depth = std::min(k, lag);
        if (depth > 0) {
            for (std::size_t i = 0; i < n; ++i) {
                const std::span<const double> coeffs(rev[i].data() + (lag - depth), depth);
                const std::span<const double> past(hist[i].data() + (k - depth), depth);
                next(static_cast<Eigen::Index>(i)) += simd::dot_compensated(coeffs, past);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            hist[i][k + 1] = next(static_cast<Eigen::Index>(i));
        }
    }

    SimulationTrace trace;
    trace.ts = sys.ts();
    trace.u.assign(u.begin(), u.end());
    trace.x.resize(static_cast<Eigen::Index>(samples), static_cast<Eigen::Index>(n));
    trace.y.resize(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        double y = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double xi = hist[i][k];
            trace.x(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = xi;
            y += sys.m()(static_cast<Eigen::Index>(i)) * xi;
        }
        trace.y[k] = y + sys.d() * u[k];
    }
    return trace;
}

SimulationTrace simulate(const DiscreteFoSystem& sys, std::span<const double> u,
                         const SimulationOptions& options) {
    return simulate(sys, u, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sys.state_dim())),
                    options);
}

}  // namespace focir
