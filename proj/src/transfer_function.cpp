#include "focir/transfer_function.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "focir/errors.hpp"
#include "focir/frac_core.hpp"

namespace focir {

namespace {

Polynomial branch_denominator(double a0, std::span<const double> a_tail, std::size_t horizon) {
    // z^{T+1} - a0 z^T - sum_{j=1}^{T} a_j z^{T-j}
    std::vector<double> den(horizon + 2, 0.0);
    den[horizon + 1] = 1.0;
    den[horizon] = -a0;
    for (std::size_t j = 1; j <= horizon; ++j) {
        den[horizon - j] = -a_tail[j - 1];
    }
    return Polynomial(std::move(den));
}

// Product of all denominators whose index is not in `skip`.
Polynomial product_except(const std::vector<Polynomial>& dens, std::size_t skip_a,
                          std::size_t skip_b = static_cast<std::size_t>(-1)) {
    Polynomial out{1.0};
    for (std::size_t k = 0; k < dens.size(); ++k) {
        if (k != skip_a && k != skip_b) {
            out = poly_mul(out, dens[k]);
        }
    }
    return out;
}

Polynomial shift(const Polynomial& p, std::size_t power) {
    return poly_mul(p, Polynomial::monomial(1.0, power));
}

// Writes dN / dD into column `col` of a highest-first coefficient Jacobian.
void put_column(Eigen::MatrixXd& jac, Eigen::Index col, const Polynomial& dnum,
                const Polynomial& dden, std::size_t degree) {
    for (std::size_t p = 0; p <= degree; ++p) {
        jac(static_cast<Eigen::Index>(degree - p), col) = dnum[p];
    }
    for (std::size_t p = 0; p < degree; ++p) {
        jac(static_cast<Eigen::Index>(degree + 1 + (degree - 1 - p)), col) = dden[p];
    }
}

}  // namespace

BranchTF branch_tf(double b, double a0, std::span<const double> a_tail, std::size_t horizon) {
    if (horizon < 1) {
        throw std::invalid_argument("branch_tf requires T >= 1");
    }
    if (a_tail.size() < horizon) {
        throw DimensionError("a-sequence shorter than the horizon: " +
                             std::to_string(a_tail.size()) + " < " + std::to_string(horizon));
    }
    return BranchTF{b, branch_denominator(a0, a_tail, horizon), horizon};
}

MonicRationalTF::MonicRationalTF(std::vector<double> f, std::vector<double> g)
    : f_(std::move(f)), g_(std::move(g)) {
    if (f_.size() != g_.size() + 1) {
        throw DimensionError("numerator must have exactly one more coefficient than g");
    }
}

Polynomial MonicRationalTF::denominator() const {
    std::vector<double> den(g_);
    den.push_back(1.0);
    return Polynomial(std::move(den));
}

std::complex<double> MonicRationalTF::evaluate(std::complex<double> z) const {
    return numerator().evaluate(z) / denominator().evaluate(z);
}

MonicRationalTF assemble_tf(double d, std::span<const BranchTF> branches) {
    if (branches.empty()) {
        throw DimensionError("assemble_tf needs at least one branch");
    }
    const std::size_t horizon = branches.front().horizon;
    std::vector<Polynomial> dens;
    dens.reserve(branches.size());
    for (const auto& br : branches) {
        if (br.horizon != horizon) {
            throw DimensionError("all branches must share the same horizon");
        }
        dens.push_back(br.denominator);
    }

    const Polynomial den = product_except(dens, static_cast<std::size_t>(-1));
    Polynomial num = poly_scale(den, d);
    for (std::size_t i = 0; i < branches.size(); ++i) {
        num = poly_add(num, poly_mul(branches[i].numerator(), product_except(dens, i)));
    }

    const std::size_t degree = den.degree();
    std::vector<double> f(degree + 1, 0.0);
    for (std::size_t p = 0; p <= degree; ++p) f[p] = num[p];
    std::vector<double> g(degree, 0.0);
    for (std::size_t p = 0; p < degree; ++p) g[p] = den[p];
    return MonicRationalTF(std::move(f), std::move(g));
}

std::vector<double> impulse_response(const MonicRationalTF& tf, std::size_t count) {
    const std::size_t deg = tf.degree();
    std::vector<double> h(count, 0.0);
    for (std::size_t k = 0; k < count; ++k) {
        double v = k <= deg ? tf.f(deg - k) : 0.0;
        for (std::size_t i = 1; i <= std::min(k, deg); ++i) {
            v -= tf.g(deg - i) * h[k - i];
        }
        h[k] = v;
    }
    return h;
}

std::string_view to_string(Structure s) noexcept {
    switch (s) {
        case Structure::randles: return "randles";
        case Structure::single_cpe: return "single_cpe";
        case Structure::two_cpe: return "two_cpe";
        case Structure::unsupported: break;
    }
    return "unsupported";
}

Structure structure_from_string(std::string_view tag) {
    if (tag == "randles") return Structure::randles;
    if (tag == "single_cpe") return Structure::single_cpe;
    if (tag == "two_cpe") return Structure::two_cpe;
    if (tag == "unsupported") return Structure::unsupported;
    throw std::invalid_argument("unknown structure tag: " + std::string(tag));
}

CoefficientVector::CoefficientVector(std::vector<double> values, Structure structure,
                                     std::size_t horizon, double ts)
    : values_(std::move(values)), structure_(structure), horizon_(horizon), ts_(ts) {
    if (values_.size() % 2 == 0) {
        throw DimensionError("coefficient vector length must be 2 deg + 1");
    }
    if (!(ts_ > 0.0)) {
        throw DomainError("sample time must be positive");
    }
}

CoefficientVector CoefficientVector::from_tf(const MonicRationalTF& tf, Structure structure,
                                             std::size_t horizon, double ts) {
    const std::size_t deg = tf.degree();
    std::vector<double> values;
    values.reserve(2 * deg + 1);
    for (std::size_t p = deg + 1; p-- > 0;) values.push_back(tf.f(p));
    for (std::size_t p = deg; p-- > 0;) values.push_back(tf.g(p));
    return CoefficientVector(std::move(values), structure, horizon, ts);
}

double CoefficientVector::f(std::size_t power) const {
    const std::size_t deg = degree();
    if (power > deg) {
        throw std::out_of_range("numerator power out of range");
    }
    return values_[deg - power];
}

double CoefficientVector::g(std::size_t power) const {
    const std::size_t deg = degree();
    if (power >= deg) {
        throw std::out_of_range("denominator power out of range");
    }
    return values_[deg + 1 + (deg - 1 - power)];
}

std::vector<double> CoefficientVector::f_by_power() const {
    std::vector<double> out(degree() + 1);
    for (std::size_t p = 0; p < out.size(); ++p) out[p] = f(p);
    return out;
}

std::vector<double> CoefficientVector::g_by_power() const {
    std::vector<double> out(degree());
    for (std::size_t p = 0; p < out.size(); ++p) out[p] = g(p);
    return out;
}

MonicRationalTF CoefficientVector::to_tf() const {
    return MonicRationalTF(f_by_power(), g_by_power());
}

LiftedParams lift(const FoEcmParams& params) {
    LiftedParams out{params.r_inf(), {}};
    for (const auto& br : params.branches()) {
        const double alpha = br.alpha.value();
        out.branches.push_back({branch_gain(alpha, params.ts(), br.c),
                                branch_a0(alpha, params.ts(), br.r, br.c), alpha});
    }
    return out;
}

MonicRationalTF assemble_lifted(const LiftedParams& lifted, std::size_t horizon) {
    std::vector<BranchTF> branches;
    branches.reserve(lifted.branches.size());
    for (const auto& br : lifted.branches) {
        const auto tail = a_coefficients(br.alpha, horizon);
        branches.push_back(branch_tf(br.b, br.a0, tail, horizon));
    }
    return assemble_tf(lifted.d, branches);
}

CoefficientVector coefficient_map(const FoEcmParams& params, std::size_t horizon) {
    const std::size_t n = params.branch_count();
    const Structure tag = n == 1 ? Structure::single_cpe
                        : n == 2 ? Structure::two_cpe
                                 : Structure::unsupported;
    return CoefficientVector::from_tf(assemble_lifted(lift(params), horizon), tag, horizon,
                                      params.ts());
}

CoefficientVector coefficient_map(const RandlesParams& params, double ts) {
    const auto c = randles_tf_coeffs(params, ts);
    return CoefficientVector({c.f1, c.f0, c.g0}, Structure::randles, 1, ts);
}

Eigen::MatrixXd lifted_jacobian(const LiftedParams& lifted, std::size_t horizon) {
    const std::size_t n = lifted.branches.size();
    std::vector<Polynomial> dens;
    std::vector<Polynomial> dalpha;  // dD_i / dalpha_i
    for (const auto& br : lifted.branches) {
        const auto tail = a_coefficients(br.alpha, horizon);
        dens.push_back(branch_denominator(br.a0, tail, horizon));
        std::vector<double> da(horizon + 2, 0.0);
        double ld = 1.0 / br.alpha;
        for (std::size_t j = 1; j <= horizon; ++j) {
            ld -= 1.0 / (static_cast<double>(j) - br.alpha);
            da[horizon - j] = -tail[j - 1] * ld;
        }
        dalpha.emplace_back(std::move(da));
    }
    const Polynomial den = product_except(dens, static_cast<std::size_t>(-1));
    const std::size_t degree = den.degree();
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(2 * degree + 1),
                                                static_cast<Eigen::Index>(1 + 3 * n));

    put_column(jac, 0, den, Polynomial{}, degree);

    // Response of (N, D) to a change `delta` in D_i.
    auto denominator_variation = [&](std::size_t i, const Polynomial& delta, Eigen::Index col) {
        const Polynomial dden = poly_mul(delta, product_except(dens, i));
        Polynomial dnum = poly_scale(dden, lifted.d);
        for (std::size_t l = 0; l < n; ++l) {
            if (l == i) continue;
            const Polynomial term = poly_mul(delta, product_except(dens, l, i));
            dnum = poly_add(dnum, poly_scale(shift(term, horizon), lifted.branches[l].b));
        }
        put_column(jac, col, dnum, dden, degree);
    };

    for (std::size_t i = 0; i < n; ++i) {
        const auto base = static_cast<Eigen::Index>(1 + 3 * i);
        put_column(jac, base, shift(product_except(dens, i), horizon), Polynomial{}, degree);
        denominator_variation(i, Polynomial::monomial(-1.0, horizon), base + 1);
        denominator_variation(i, dalpha[i], base + 2);
    }
    return jac;
}

Eigen::MatrixXd theta_jacobian(const FoEcmParams& params, std::size_t horizon) {
    const LiftedParams lifted = lift(params);
    const Eigen::MatrixXd jl = lifted_jacobian(lifted, horizon);
    const std::size_t n = params.branch_count();

    std::size_t finite_r = 0;
    for (const auto& br : params.branches()) finite_r += br.r.is_open() ? 0 : 1;
    const auto cols = static_cast<Eigen::Index>(1 + finite_r + 2 * n);

    // d lifted / d theta
    Eigen::MatrixXd jr = Eigen::MatrixXd::Zero(jl.cols(), cols);
    jr(0, 0) = 1.0;
    const double log_ts = std::log(params.ts());
    Eigen::Index r_col = 1;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& br = params.branches()[i];
        const auto& lb = lifted.branches[i];
        const auto base = static_cast<Eigen::Index>(1 + 3 * i);
        const auto c_col = static_cast<Eigen::Index>(1 + finite_r + i);
        const auto a_col = static_cast<Eigen::Index>(1 + finite_r + n + i);
        jr(base, c_col) = -lb.b / br.c;
        jr(base, a_col) = lb.b * log_ts;
        jr(base + 2, a_col) = 1.0;
        if (br.r.is_open()) {
            jr(base + 1, a_col) = 1.0;
        } else {
            const double r = br.r.ohms();
            jr(base + 1, r_col) = lb.b / (r * r);
            jr(base + 1, c_col) = lb.b / (r * br.c);
            jr(base + 1, a_col) = 1.0 - lb.b / r * log_ts;
            ++r_col;
        }
    }
    return jl * jr;
}

}  // namespace focir
