#include "focir/ecm_models.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "focir/errors.hpp"

namespace focir {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

Resistance Resistance::finite(double ohms) {
    if (!positive_finite(ohms)) {
        throw DomainError("branch resistance must be finite and positive");
    }
    Resistance r;
    r.ohms_ = ohms;
    r.open_ = false;
    return r;
}

double Resistance::ohms() const {
    if (open_) {
        throw std::logic_error("open-circuit branch has no finite resistance");
    }
    return ohms_;
}

double Resistance::value() const noexcept {
    return open_ ? std::numeric_limits<double>::infinity() : ohms_;
}

RandlesParams::RandlesParams(double r_inf_, double r1_, double c1_)
    : r_inf(r_inf_), r1(r1_), c1(c1_) {
    if (!positive_finite(r_inf) || !positive_finite(r1) || !positive_finite(c1)) {
        throw DomainError("Randles parameters must be finite and positive");
    }
}

FoEcmParams::FoEcmParams(double r_inf, std::vector<BranchParams> branches, double ts)
    : r_inf_(r_inf), branches_(std::move(branches)), ts_(ts) {
    if (!(std::isfinite(r_inf_) && r_inf_ >= 0.0)) {
        throw DomainError("ohmic resistance must be finite and non-negative");
    }
    if (!positive_finite(ts_)) {
        throw DomainError("sample time must be positive");
    }
    if (branches_.empty()) {
        throw DomainError("an FO-ECM needs at least one R||CPE branch");
    }
    for (const auto& b : branches_) {
        if (!positive_finite(b.c)) {
            throw DomainError("CPE constant must be finite and positive");
        }
    }
}

std::vector<double> FoEcmParams::theta() const {
    std::vector<double> out;
    out.reserve(1 + 3 * branches_.size());
    out.push_back(r_inf_);
    for (const auto& b : branches_) out.push_back(b.r.value());
    for (const auto& b : branches_) out.push_back(b.c);
    for (const auto& b : branches_) out.push_back(b.alpha.value());
    return out;
}

FoEcmParams FoEcmParams::permuted(const std::vector<std::size_t>& order) const {
    if (order.size() != branches_.size()) {
        throw DimensionError("permutation length does not match the branch count");
    }
    std::vector<BranchParams> out;
    out.reserve(order.size());
    for (std::size_t i : order) out.push_back(branches_.at(i));
    return FoEcmParams(r_inf_, std::move(out), ts_);
}

RandlesCoefficients randles_tf_coeffs(const RandlesParams& p, double ts) {
    if (!positive_finite(ts)) {
        throw DomainError("sample time must be positive");
    }
    const double pole = 1.0 - ts / (p.r1 * p.c1);
    return {p.r_inf, -p.r_inf * pole + ts / p.c1, -pole};
}

double branch_a0(double alpha, double ts, const Resistance& r, double c) {
    if (r.is_open()) {
        return alpha;
    }
    return alpha - std::pow(ts, alpha) / (r.ohms() * c);
}

double branch_gain(double alpha, double ts, double c) { return std::pow(ts, alpha) / c; }

BranchCoefficients branch_coefficients(const FoEcmParams& p, std::size_t i, std::size_t horizon) {
    if (horizon < 1) {
        throw std::invalid_argument("branch_coefficients requires T >= 1");
    }
    const BranchParams& br = p.branches().at(i);
    const double alpha = br.alpha.value();
    return {branch_a0(alpha, p.ts(), br.r, br.c), a_coefficients(alpha, horizon),
            branch_gain(alpha, p.ts(), br.c), p.r_inf(), 1.0};
}

DiscreteFoSystem to_state_space(const FoEcmParams& p, std::size_t horizon) {
    const std::size_t n = p.branch_count();
    std::vector<double> orders(n);
    Eigen::MatrixXd a0 = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                               static_cast<Eigen::Index>(n));
    Eigen::VectorXd b(static_cast<Eigen::Index>(n));
    std::vector<std::vector<double>> tails;
    tails.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto bc = branch_coefficients(p, i, horizon);
        const auto ii = static_cast<Eigen::Index>(i);
        orders[i] = p.branches()[i].alpha.value();
        a0(ii, ii) = bc.a0;
        b(ii) = bc.b;
        tails.push_back(std::move(bc.a_tail));
    }
    return DiscreteFoSystem(std::move(orders), std::move(a0), std::move(tails), std::move(b),
                            Eigen::RowVectorXd::Ones(static_cast<Eigen::Index>(n)), p.r_inf(),
                            p.ts());
}

ContinuousFoSystem to_continuous(const FoEcmParams& p) {
    const auto n = static_cast<Eigen::Index>(p.branch_count());
    ContinuousFoSystem sys;
    sys.a_bar = Eigen::MatrixXd::Zero(n, n);
    sys.b_bar.resize(n);
    sys.m = Eigen::RowVectorXd::Ones(n);
    sys.d = p.r_inf();
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& br = p.branches()[static_cast<std::size_t>(i)];
        sys.a_bar(i, i) = br.r.is_open() ? 0.0 : -1.0 / (br.r.ohms() * br.c);
        sys.b_bar(i) = 1.0 / br.c;
        sys.orders.push_back(br.alpha.value());
    }
    return sys;
}

}  // namespace focir
