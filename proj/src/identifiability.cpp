#include "focir/identifiability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "focir/errors.hpp"

namespace focir {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

void require_structure(const CoefficientVector& c, Structure expected) {
    if (c.structure() != expected) {
        throw StructureMismatchError("coefficient vector is tagged " +
                                     std::string(to_string(c.structure())) + ", expected " +
                                     std::string(to_string(expected)));
    }
}

// Bisection on a sign change of `fn` over [lo, hi], stopping once the bracket
// is narrower than `tol` (or cannot shrink further).
template <typename Fn>
double bisect(Fn&& fn, double lo, double hi, double tol) {
    double flo = fn(lo);
    for (int it = 0; it < 400 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = fn(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

bool same_theta(const FoEcmParams& a, const FoEcmParams& b, double tol) {
    const auto ta = a.theta();
    const auto tb = b.theta();
    if (ta.size() != tb.size()) return false;
    for (std::size_t i = 0; i < ta.size(); ++i) {
        if (std::isinf(ta[i]) || std::isinf(tb[i])) {
            if (ta[i] != tb[i]) return false;
            continue;
        }
        if (std::abs(ta[i] - tb[i]) > tol * std::max(std::abs(ta[i]), std::abs(tb[i]))) {
            return false;
        }
    }
    return true;
}

// Builds circuit parameters from lifted coordinates; nullopt when they leave
// the physical domain (alpha outside (0,1), non-positive gain, negative R).
std::optional<FoEcmParams> to_params(const LiftedParams& lifted, double ts,
                                     const IdentOptions& opts) {
    if (!(std::isfinite(lifted.d) && lifted.d >= 0.0)) return std::nullopt;
    std::vector<BranchParams> branches;
    for (const auto& br : lifted.branches) {
        if (!(br.alpha > 0.0 && br.alpha < 1.0) || !(br.b > 0.0) || !std::isfinite(br.b)) {
            return std::nullopt;
        }
        const double scale = std::pow(ts, br.alpha);
        const double c = scale / br.b;
        const double gap = br.alpha - br.a0;
        Resistance r = Resistance::open();
        if (std::abs(gap) > opts.open_circuit_tol * std::max(1.0, br.alpha)) {
            if (gap < 0.0) return std::nullopt;
            const double ohms = scale / (gap * c);
            if (!std::isfinite(ohms)) return std::nullopt;
            r = Resistance::finite(ohms);
        }
        if (!(std::isfinite(c) && c > 0.0)) return std::nullopt;
        branches.push_back({r, c, FractionalOrder(br.alpha)});
    }
    return FoEcmParams(lifted.d, std::move(branches), ts);
}

Classification classify_with_rank(const std::vector<ParameterSet>& solutions,
                                  std::size_t horizon, const IdentOptions& opts,
                                  std::size_t multiplicity) {
    bool continuum = false;
    for (const auto& s : solutions) {
        if (const auto* p = std::get_if<FoEcmParams>(&s)) {
            continuum = continuum || has_flat_direction(*p, horizon, opts.rank_tol);
        }
    }
    return classify(solutions.size(), continuum, multiplicity);
}

}  // namespace

// --- classification ------------------------------------------------------

std::string Classification::to_string() const {
    switch (kind) {
        case Identifiability::globally_identifiable: return "globally_identifiable";
        case Identifiability::identifiable:
            if (multiplicity > 1) {
                return "identifiable(" + std::to_string(count) +
                       ",multiplicity=" + std::to_string(multiplicity) + ")";
            }
            return "identifiable(" + std::to_string(count) + ")";
        case Identifiability::unidentifiable: break;
    }
    return "unidentifiable";
}

Classification classify(std::size_t solution_count, bool continuum, std::size_t multiplicity) {
    if (continuum) {
        return {Identifiability::unidentifiable, solution_count, multiplicity};
    }
    if (solution_count == 1 && multiplicity <= 1) {
        return {Identifiability::globally_identifiable, 1, 1};
    }
    if (solution_count == 0) {
        return {Identifiability::unidentifiable, 0, 1};
    }
    return {Identifiability::identifiable, solution_count, multiplicity};
}

Eigen::Index scaled_rank(const Eigen::MatrixXd& jac, double rank_tol) {
    Eigen::MatrixXd scaled = jac;
    for (Eigen::Index k = 0; k < scaled.cols(); ++k) {
        const double nrm = scaled.col(k).norm();
        if (nrm > 0.0) scaled.col(k) /= nrm;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    Eigen::Index rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
        if (sv(k) > rank_tol * sv(0)) ++rank;
    }
    return rank;
}

bool has_flat_direction(const FoEcmParams& params, std::size_t horizon, double rank_tol) {
    const Eigen::MatrixXd jac = theta_jacobian(params, horizon);
    return scaled_rank(jac, rank_tol) < jac.cols();
}

double reconstruction_residual(const CoefficientVector& reconstructed,
                               const CoefficientVector& target) {
    const auto a = reconstructed.values();
    const auto b = target.values();
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
    const double scale = max_abs(b);
    return scale > 0.0 ? diff / scale : diff;
}

namespace {

double theta_error(const std::vector<double>& est, const std::vector<double>& truth) {
    double worst = 0.0;
    for (std::size_t k = 0; k < truth.size(); ++k) {
        if (std::isinf(truth[k]) || std::isinf(est[k])) {
            if (est[k] != truth[k]) return std::numeric_limits<double>::infinity();
            continue;
        }
        const double diff = std::abs(est[k] - truth[k]);
        worst = std::max(worst, truth[k] != 0.0 ? diff / std::abs(truth[k]) : diff);
    }
    return worst;
}

}  // namespace

double parameter_error(const ParameterSet& estimate, const ParameterSet& truth) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (estimate.index() != truth.index()) return inf;
    if (const auto* t = std::get_if<RandlesParams>(&truth)) {
        const auto& e = std::get<RandlesParams>(estimate);
        return theta_error({e.r_inf, e.r1, e.c1}, {t->r_inf, t->r1, t->c1});
    }
    const auto& t = std::get<FoEcmParams>(truth);
    const auto& e = std::get<FoEcmParams>(estimate);
    if (e.branch_count() != t.branch_count()) return inf;
    std::vector<std::size_t> order(e.branch_count());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const auto target = t.theta();
    double best = inf;
    do {
        best = std::min(best, theta_error(e.permuted(order).theta(), target));
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
}

// --- Randles -------------------------------------------------------------

RandlesParams invert_randles(double f1, double f0, double g0, double ts) {
    const double pole_gap = 1.0 + g0;
    const double gain = f0 - f1 * g0;
    if (pole_gap == 0.0 || gain == 0.0 || !std::isfinite(pole_gap) || !std::isfinite(gain)) {
        throw SingularStructureError(
            "Randles inverse is singular (1 + g0 = 0 or f0 - f1 g0 = 0): parameters on the "
            "domain boundary");
    }
    const double c1 = ts / gain;
    const double r1 = ts / (pole_gap * c1);
    if (!(f1 > 0.0 && c1 > 0.0 && r1 > 0.0)) {
        throw InconsistentCoefficientsError("Randles inverse yields non-positive parameters");
    }
    return RandlesParams(f1, r1, c1);
}

IdentifiabilityResult invert_randles(const CoefficientVector& c, const IdentOptions& opts) {
    require_structure(c, Structure::randles);
    if (c.degree() != 1) {
        throw StructureMismatchError("Randles coefficient vector must have 3 entries");
    }
    const RandlesParams p = invert_randles(c.f(1), c.f(0), c.g(0), c.ts());
    const double res = reconstruction_residual(coefficient_map(p, c.ts()), c);
    if (res > opts.residual_tol) {
        throw InconsistentCoefficientsError("Randles inverse does not reproduce the coefficients");
    }
    IdentifiabilityResult out;
    out.structure = Structure::randles;
    out.solutions.emplace_back(p);
    out.residuals.push_back(res);
    out.classification = classify(1);
    return out;
}

// --- single CPE ----------------------------------------------------------

double a_peak(std::size_t j) {
    if (j < 1) throw std::invalid_argument("a_peak requires j >= 1");
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (a_log_derivative(mid, j) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> alpha_preimage(std::size_t j, double value, const IdentOptions& opts) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw NoSolutionError("a_" + std::to_string(j) + " = " + std::to_string(value) +
                              " is outside the attainable range (0, max]");
    }
    const double peak = a_peak(j);
    const double top = a_coefficient(peak, j);
    if (value > top * (1.0 + 1e-12)) {
        throw NoSolutionError("a_" + std::to_string(j) + " = " + std::to_string(value) +
                              " exceeds the unimodal maximum " + std::to_string(top));
    }
    if (value >= top) {
        return {peak};
    }

    auto fn = [&](double a) { return a_coefficient(a, j) - value; };
    auto solve_side = [&](double lo, double hi) {
        double root = bisect(fn, lo, hi, opts.alpha_tol);
        // One Newton step with the analytic derivative, kept inside the bracket.
        const double aj = a_coefficient(root, j);
        const double slope = aj * a_log_derivative(root, j);
        if (slope != 0.0) {
            const double next = root - (aj - value) / slope;
            const double half = 0.5 * opts.alpha_tol;
            if (std::abs(next - root) <= half) root = next;
        }
        return root;
    };
    return {solve_side(0.0, peak), solve_side(peak, 1.0)};
}

FractionalOrder recover_alpha_single(const std::map<std::size_t, double>& probes,
                                     const IdentOptions& opts) {
    if (probes.size() < 2) {
        throw std::invalid_argument("alpha recovery needs at least two distinct indices");
    }
    if (probes.begin()->first < 1) {
        throw std::invalid_argument("probe indices must satisfy j >= 1");
    }

    struct Candidate {
        double alpha;
        std::size_t j;
    };
    std::vector<Candidate> candidates;
    for (const auto& [j, v] : probes) {
        for (double a : alpha_preimage(j, v, opts)) candidates.push_back({a, j});
    }

    std::vector<Candidate> accepted;
    for (const auto& cand : candidates) {
        double mismatch = 0.0;
        for (const auto& [q, v] : probes) {
            mismatch = std::max(mismatch, std::abs(a_coefficient(cand.alpha, q) / v - 1.0));
        }
        if (mismatch <= opts.alpha_match_tol) accepted.push_back(cand);
    }
    if (accepted.empty()) {
        throw InconsistentCoefficientsError(
            "the a_j probes have no common fractional order within tolerance");
    }
    std::sort(accepted.begin(), accepted.end(),
              [](const Candidate& a, const Candidate& b) { return a.alpha < b.alpha; });
    constexpr double cluster_gap = 1e-6;
    if (accepted.back().alpha - accepted.front().alpha > cluster_gap) {
        throw InconsistentCoefficientsError("the a_j probes admit more than one fractional order");
    }
    // Best-conditioned representative: steepest relative slope of its own equation.
    const auto best = std::max_element(
        accepted.begin(), accepted.end(), [](const Candidate& a, const Candidate& b) {
            return std::abs(a_log_derivative(a.alpha, a.j)) <
                   std::abs(a_log_derivative(b.alpha, b.j));
        });
    return FractionalOrder(best->alpha);
}

IdentifiabilityResult invert_single_cpe(const CoefficientVector& c, const IdentOptions& opts) {
    require_structure(c, Structure::single_cpe);
    const std::size_t horizon = c.horizon();
    if (horizon < 2) {
        throw std::invalid_argument("single-CPE inversion requires T >= 2");
    }
    if (c.degree() != horizon + 1) {
        throw StructureMismatchError("single-CPE vector must have degree T + 1");
    }

    // Coefficient layer: (f, g) -> (d, b1, a_{1,0}, a_{1,1..T}).
    const double d = c.f(horizon + 1);
    const double a10 = -c.g(horizon);
    const double b1 = c.f(horizon) - c.g(horizon) * c.f(horizon + 1);
    std::vector<double> a(horizon);
    for (std::size_t j = 1; j <= horizon; ++j) {
        a[j - 1] = -c.g(horizon - j);
        if (!(a[j - 1] > 0.0)) {
            throw StructureMismatchError("a_{1," + std::to_string(j) +
                                         "} is not positive: not a single-CPE structure");
        }
    }

    const double alpha = recover_alpha_single({{1, a[0]}, {2, a[1]}}, opts).value();

    for (std::size_t j = 1; j < horizon; ++j) {
        const double jd = static_cast<double>(j);
        const double resid = a[j] + (alpha - jd - 1.0) / (jd + 2.0) * a[j - 1];
        if (std::abs(resid) > opts.recursion_tol * std::abs(a[j])) {
            throw StructureMismatchError(
                "a-sequence breaks the ratio recursion at j = " + std::to_string(j) +
                ": not a single-CPE structure");
        }
    }

    const auto params = to_params({d, {{b1, a10, alpha}}}, c.ts(), opts);
    if (!params) {
        throw InconsistentCoefficientsError(
            "single-CPE inverse leaves the physical parameter domain");
    }
    const double res = reconstruction_residual(coefficient_map(*params, horizon), c);
    if (res > opts.residual_tol) {
        throw InconsistentCoefficientsError(
            "single-CPE inverse does not reproduce the coefficients (residual " +
            std::to_string(res) + ")");
    }

    IdentifiabilityResult out;
    out.structure = Structure::single_cpe;
    out.solutions.emplace_back(*params);
    out.residuals.push_back(res);
    out.classification = classify_with_rank(out.solutions, horizon, opts, 1);
    return out;
}

// --- two CPE -------------------------------------------------------------

LemmaSystem LemmaSystem::from(const CoefficientVector& c) {
    require_structure(c, Structure::two_cpe);
    if (c.degree() != 2 * c.horizon() + 2) {
        throw StructureMismatchError("two-CPE vector must have degree 2T + 2");
    }
    return {c.g(0), c.g(1), c.g(2), c.horizon()};
}

LemmaResiduals lemma_residuals(double alpha1, double alpha2, const LemmaSystem& sys) {
    const double t = static_cast<double>(sys.horizon);
    for (double a : {alpha1, alpha2}) {
        if (a == t || a == t - 1.0) {
            throw DomainError("lemma relations have a pole at alpha = T or T - 1");
        }
    }
    if (sys.g0 == 0.0) {
        throw DomainError("lemma relations need g0 != 0");
    }
    const double u = alpha1 - t;
    const double v = alpha2 - t;
    const double ahat = t / (v * (v + 1.0));
    const double bhat = (t + 1.0) / (u * v);
    const double chat = t / (u * (u + 1.0));
    return {sys.g1 / sys.g0 + (t + 1.0) * (1.0 / u + 1.0 / v),
            sys.g2 / sys.g0 - (t + 1.0) * (ahat + bhat + chat)};
}

std::vector<std::pair<double, double>> solve_two_cpe_alphas(const LemmaSystem& sys,
                                                            const IdentOptions& opts) {
    if (sys.g0 == 0.0 || !std::isfinite(sys.g0)) {
        throw InconsistentCoefficientsError("two-CPE inversion needs g0 != 0");
    }
    if (sys.horizon < 2) {
        throw std::invalid_argument("two-CPE alpha solve requires T >= 2");
    }
    const double t = static_cast<double>(sys.horizon);
    const double ratio = sys.g1 / sys.g0;

    // First relation, solved for alpha_2 given alpha_1.
    auto partner = [&](double a1) -> std::optional<double> {
        const double inv = -ratio / (t + 1.0) - 1.0 / (a1 - t);
        if (inv == 0.0 || !std::isfinite(inv)) return std::nullopt;
        const double a2 = t + 1.0 / inv;
        if (!(a2 > 0.0 && a2 < 1.0)) return std::nullopt;
        return a2;
    };
    auto r2_of = [&](double a1) { return lemma_residuals(a1, *partner(a1), sys).r2; };

    std::vector<double> grid;
    const std::size_t n = std::max<std::size_t>(opts.scan_points, 16);
    grid.reserve(n + 1);
    for (std::size_t k = 0; k < n; ++k) {
        grid.push_back((static_cast<double>(k) + 0.5) / static_cast<double>(n));
    }
    // Symmetric point alpha_1 == alpha_2; a double root sits here when the
    // orders coincide.
    const double sym = t - 2.0 * (t + 1.0) / ratio;
    const bool sym_valid = sym > 0.0 && sym < 1.0 && partner(sym).has_value();
    if (sym_valid) {
        grid.insert(std::lower_bound(grid.begin(), grid.end(), sym), sym);
    }

    std::vector<std::pair<double, double>> samples;  // (alpha1, r2), valid points only
    for (double a1 : grid) {
        if (partner(a1)) samples.emplace_back(a1, r2_of(a1));
    }

    if (sym_valid) {
        const double noise = 256.0 * kEps * std::max(1.0, std::abs(sys.g2 / sys.g0));
        if (std::abs(r2_of(sym)) <= noise) {
            return {{sym, sym}};
        }
    }

    std::vector<double> roots;
    for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
        const auto [x0, y0] = samples[k];
        const auto [x1, y1] = samples[k + 1];
        if (y0 == 0.0) {
            roots.push_back(x0);
        } else if ((y0 < 0.0) != (y1 < 0.0) && y1 != 0.0) {
            roots.push_back(bisect(r2_of, x0, x1, opts.alpha_tol));
        }
    }
    if (!samples.empty() && samples.back().second == 0.0) roots.push_back(samples.back().first);

    std::vector<std::pair<double, double>> out;
    for (double a1 : roots) {
        const double a2 = *partner(a1);
        if (std::abs(a1 - a2) <= opts.degenerate_alpha_tol) {
            return {{0.5 * (a1 + a2), 0.5 * (a1 + a2)}};
        }
        out.emplace_back(a1, a2);
    }
    if (out.empty()) {
        throw InconsistentCoefficientsError(
            "the lowest denominator coefficients admit no pair of orders in (0, 1)");
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Gauss-Newton on the lifted coordinates with d held at its exact read-off.
LiftedParams polish_lifted(LiftedParams x, const CoefficientVector& target) {
    const std::size_t horizon = target.horizon();
    const auto t = target.values();
    const Eigen::Map<const Eigen::VectorXd> tv(t.data(), static_cast<Eigen::Index>(t.size()));

    auto residual = [&](const LiftedParams& p) -> std::optional<Eigen::VectorXd> {
        for (const auto& br : p.branches) {
            if (!(br.alpha > 0.0 && br.alpha < 1.0)) return std::nullopt;
        }
        const auto cv = CoefficientVector::from_tf(assemble_lifted(p, horizon),
                                                   target.structure(), horizon, target.ts());
        const auto v = cv.values();
        return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())) -
               tv;
    };

    auto r = residual(x);
    if (!r) return x;
    double norm = r->norm();
    for (int it = 0; it < 30 && norm > 0.0; ++it) {
        const Eigen::MatrixXd jac = lifted_jacobian(x, horizon).rightCols(
            static_cast<Eigen::Index>(3 * x.branches.size()));
        const Eigen::VectorXd step = jac.colPivHouseholderQr().solve(-*r);
        LiftedParams next = x;
        for (std::size_t i = 0; i < x.branches.size(); ++i) {
            const auto k = static_cast<Eigen::Index>(3 * i);
            next.branches[i].b += step(k);
            next.branches[i].a0 += step(k + 1);
            next.branches[i].alpha += step(k + 2);
        }
        const auto rn = residual(next);
        if (!rn || !(rn->norm() < norm)) break;
        x = next;
        r = rn;
        norm = rn->norm();
    }
    return x;
}

struct TwoCpeCandidate {
    FoEcmParams params;
    double residual;
};

std::optional<TwoCpeCandidate> recover_branches(const CoefficientVector& c, double alpha1,
                                                double alpha2, const IdentOptions& opts) {
    const std::size_t horizon = c.horizon();
    const std::size_t top = 2 * horizon + 2;
    const double d = c.f(top);
    const auto tail1 = a_coefficients(alpha1, horizon);
    const auto tail2 = a_coefficients(alpha2, horizon);

    // g_{2T+1} = -(a10 + a20), g_{2T} = a10 a20 - a11 - a21.
    const double sum0 = -c.g(top - 1);
    const double prod0 = c.g(top - 2) + tail1[0] + tail2[0];
    double disc = sum0 * sum0 - 4.0 * prod0;
    if (disc < 0.0) {
        if (disc < -64.0 * kEps * (sum0 * sum0 + 4.0 * std::abs(prod0))) return std::nullopt;
        disc = 0.0;
    }
    const double q = 0.5 * (sum0 + std::copysign(std::sqrt(disc), sum0));
    const double u = q;
    const double v = q != 0.0 ? prod0 / q : 0.0;

    // f_{2T+1} = b1 + b2 + d g_{2T+1}, f_{2T} = -b1 a20 - b2 a10 + d g_{2T}.
    const double beta = c.f(top - 1) - d * c.g(top - 1);
    const double gamma = d * c.g(top - 2) - c.f(top - 2);

    std::optional<std::pair<LiftedParams, double>> best;
    for (const auto& [a10, a20] : {std::pair{u, v}, std::pair{v, u}}) {
        double b1;
        double b2;
        const double det = a20 - a10;
        if (std::abs(det) > 1e-12 * std::max(std::abs(a10), std::abs(a20))) {
            b1 = (gamma - a10 * beta) / det;
            b2 = beta - b1;
        } else {
            // Coinciding a_{i,0}: split the gain by least squares over the
            // whole numerator, N - d D1 D2 = b1 z^T D2 + b2 z^T D1.
            const BranchTF br1 = branch_tf(1.0, a10, tail1, horizon);
            const BranchTF br2 = branch_tf(1.0, a20, tail2, horizon);
            const Polynomial col1 = poly_mul(br1.numerator(), br2.denominator);
            const Polynomial col2 = poly_mul(br2.numerator(), br1.denominator);
            const Polynomial dd = poly_mul(br1.denominator, br2.denominator);
            Eigen::MatrixXd a(static_cast<Eigen::Index>(top + 1), 2);
            Eigen::VectorXd rhs(static_cast<Eigen::Index>(top + 1));
            for (std::size_t p = 0; p <= top; ++p) {
                const auto row = static_cast<Eigen::Index>(p);
                a(row, 0) = col1[p];
                a(row, 1) = col2[p];
                rhs(row) = c.f(p) - d * dd[p];
            }
            const auto qr = a.colPivHouseholderQr();
            if (qr.rank() < 2) {
                b1 = b2 = 0.5 * beta;
            } else {
                const Eigen::Vector2d sol = qr.solve(rhs);
                b1 = sol(0);
                b2 = sol(1);
            }
        }

        LiftedParams lifted{d, {{b1, a10, alpha1}, {b2, a20, alpha2}}};
        const double res = reconstruction_residual(
            CoefficientVector::from_tf(assemble_lifted(lifted, horizon), c.structure(), horizon,
                                       c.ts()),
            c);
        if (!best || res < best->second) best = std::pair{lifted, res};
    }
    if (!best) return std::nullopt;

    // Polish only the chosen assignment: started from the wrong one, the
    // iteration can slide onto the permuted solution.
    LiftedParams lifted = best->first;
    if (opts.polish) lifted = polish_lifted(lifted, c);
    const auto params = to_params(lifted, c.ts(), opts);
    if (!params) return std::nullopt;
    return TwoCpeCandidate{*params,
                           reconstruction_residual(coefficient_map(*params, horizon), c)};
}

}  // namespace

IdentifiabilityResult invert_two_cpe(const CoefficientVector& c, const IdentOptions& opts) {
    const LemmaSystem sys = LemmaSystem::from(c);
    if (c.horizon() < 3) {
        throw std::invalid_argument("two-CPE inversion requires T >= 3");
    }
    const auto pairs = solve_two_cpe_alphas(sys, opts);
    const bool coincident = pairs.size() == 1 && pairs.front().first == pairs.front().second;

    std::vector<TwoCpeCandidate> found;
    for (const auto& [a1, a2] : pairs) {
        auto cand = recover_branches(c, a1, a2, opts);
        if (!cand || cand->residual > opts.residual_tol) continue;
        const bool duplicate = std::any_of(found.begin(), found.end(), [&](const auto& f) {
            return same_theta(f.params, cand->params, 1e-9);
        });
        if (!duplicate) found.push_back(std::move(*cand));
    }
    if (found.empty()) {
        throw InconsistentCoefficientsError(
            "no two-CPE parameter vector reproduces the coefficients");
    }
    std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) {
        const double ax = x.params.branches()[0].alpha.value();
        const double ay = y.params.branches()[0].alpha.value();
        return ax != ay ? ax < ay : x.params.theta() < y.params.theta();
    });

    IdentifiabilityResult out;
    out.structure = Structure::two_cpe;
    for (auto& f : found) {
        out.solutions.emplace_back(f.params);
        out.residuals.push_back(f.residual);
    }
    out.classification = classify_with_rank(out.solutions, c.horizon(), opts, coincident ? 2 : 1);
    return out;
}

IdentifiabilityResult identify(const CoefficientVector& c, const IdentOptions& opts) {
    switch (c.structure()) {
        case Structure::randles: return invert_randles(c, opts);
        case Structure::single_cpe: return invert_single_cpe(c, opts);
        case Structure::two_cpe: return invert_two_cpe(c, opts);
        case Structure::unsupported: break;
    }
    throw UnsupportedStructureError(
        "no inversion procedure for FO-ECMs with more than two CPE branches");
}

}  // namespace focir
