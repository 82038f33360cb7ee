#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "focir/ecm_models.hpp"
#include "focir/errors.hpp"
#include "focir/frac_core.hpp"
#include "focir/polynomial.hpp"
#include "focir/state_space.hpp"
#include "focir/transfer_function.hpp"
#include "support.hpp"

using namespace focir;

namespace {

FoEcmParams two_branch(double ts = 0.1) {
    return FoEcmParams(0.05,
                       {{Resistance::finite(0.3), 20.0, FractionalOrder(0.6)},
                        {Resistance::finite(0.1), 500.0, FractionalOrder(0.85)}},
                       ts);
}

}  // namespace

TEST_CASE("Polynomial arithmetic") {
    const Polynomial p{1.0, 2.0};       // 1 + 2z
    const Polynomial q{-1.0, 0.0, 3.0};  // -1 + 3z^2
    CHECK(p.degree() == 1);
    CHECK(poly_mul(p, q) == Polynomial{-1.0, -2.0, 3.0, 6.0});
    CHECK(poly_add(p, q) == Polynomial{0.0, 2.0, 3.0});
    CHECK(poly_scale(p, 0.5) == Polynomial{0.5, 1.0});
    CHECK(Polynomial{1.0, 0.0, 0.0}.degree() == 0);
    CHECK(Polynomial::monomial(4.0, 3)[3] == 4.0);
    CHECK(std::abs(q.evaluate({0.0, 1.0}) - std::complex<double>(-4.0, 0.0)) < 1e-15);
    CHECK(poly_mul(p, Polynomial{}).is_zero());
}

TEST_CASE("branch transfer function layout") {
    const auto tail = a_coefficients(0.4, 5);
    const auto br = branch_tf(2.0, 0.3, tail, 5);
    CHECK(br.denominator.degree() == 6);
    CHECK(br.denominator[6] == 1.0);
    CHECK(br.denominator[5] == -0.3);
    for (std::size_t j = 1; j <= 5; ++j) CHECK(br.denominator[5 - j] == -tail[j - 1]);
    CHECK(br.numerator() == Polynomial::monomial(2.0, 5));
    CHECK_THROWS_AS((void)branch_tf(1.0, 0.3, tail, 6), DimensionError);
}

TEST_CASE("coefficient vector lengths and structure tags") {
    for (std::size_t t : {1, 2, 7, 40}) {
        const FoEcmParams one(0.05, {{Resistance::finite(0.3), 20.0, FractionalOrder(0.6)}}, 0.1);
        const auto c1 = coefficient_map(one, t);
        CHECK(c1.values().size() == 2 * t + 3);
        CHECK(c1.structure() == Structure::single_cpe);
        const auto c2 = coefficient_map(two_branch(), t);
        CHECK(c2.values().size() == 4 * t + 5);
        CHECK(c2.structure() == Structure::two_cpe);
    }
    const auto cr = coefficient_map(RandlesParams(0.1, 0.2, 30.0), 0.1);
    CHECK(cr.values().size() == 3);
    CHECK(cr.structure() == Structure::randles);

    const FoEcmParams three(0.05,
                            {{Resistance::finite(0.3), 20.0, FractionalOrder(0.6)},
                             {Resistance::finite(0.1), 500.0, FractionalOrder(0.85)},
                             {Resistance::open(), 90.0, FractionalOrder(0.5)}},
                            0.1);
    const auto c3 = coefficient_map(three, 4);
    CHECK(c3.structure() == Structure::unsupported);
    CHECK(c3.degree() == 15);

    CHECK(structure_from_string("two_cpe") == Structure::two_cpe);
    CHECK(to_string(Structure::randles) == "randles");
    CHECK_THROWS_AS((void)structure_from_string("three"), std::invalid_argument);
}

TEST_CASE("lowest denominator coefficient is a_{1,T} a_{2,T}") {
    for (std::size_t t : {3, 10, 60}) {
        const auto c = coefficient_map(two_branch(), t);
        const double ref = test::ref_a(0.6, t).to_double() * test::ref_a(0.85, t).to_double();
        CHECK(c.g(0) == doctest::Approx(ref).epsilon(1e-13));
    }
}

TEST_CASE("highest-first ordering and by-power accessors agree") {
    const auto c = coefficient_map(two_branch(), 4);
    const auto v = c.values();
    const std::size_t deg = c.degree();
    CHECK(v[0] == c.f(deg));
    CHECK(v[deg] == c.f(0));
    CHECK(v[deg + 1] == c.g(deg - 1));
    CHECK(v.back() == c.g(0));
    const auto f = c.f_by_power();
    const auto g = c.g_by_power();
    CHECK(f.size() == deg + 1);
    CHECK(g.size() == deg);
    CHECK(f[2] == c.f(2));
    // Leading numerator coefficient is R_inf (feed-through).
    CHECK(c.f(deg) == 0.05);
    CHECK_THROWS((void)c.g(deg));
    CHECK_THROWS_AS(CoefficientVector({1.0, 2.0}, Structure::randles, 1, 0.1), DimensionError);
}

TEST_CASE("assembled transfer function") {
    const auto p = two_branch();
    const std::size_t t = 6;
    const auto c = coefficient_map(p, t);
    const auto tf = c.to_tf();
    CHECK(tf.degree() == 2 * (t + 1));

    SUBCASE("evaluates as d plus the branch sum") {
        std::vector<BranchTF> brs;
        for (std::size_t i = 0; i < 2; ++i) {
            const auto bc = branch_coefficients(p, i, t);
            brs.push_back(branch_tf(bc.b, bc.a0, bc.a_tail, t));
        }
        for (const std::complex<double> z : {std::complex<double>(1.3, 0.2),
                                             std::complex<double>(-0.4, 1.1),
                                             std::complex<double>(2.0, -0.7)}) {
            std::complex<double> ref = p.r_inf();
            for (const auto& br : brs) ref += br.numerator().evaluate(z) / br.denominator.evaluate(z);
            CHECK(std::abs(tf.evaluate(z) - ref) <= 1e-12 * std::abs(ref));
        }
    }

    SUBCASE("Markov parameters equal the simulated impulse response with memory T") {
        const std::size_t count = 80;
        const auto h = impulse_response(tf, count);
        std::vector<double> u(count, 0.0);
        u[0] = 1.0;
        SimulationOptions opts;
        opts.memory_window = t;
        const auto y = simulate(to_state_space(p, t), u, opts).y;
        for (std::size_t k = 0; k < count; ++k) {
            CHECK(h[k] == doctest::Approx(y[k]).epsilon(1e-10).scale(1e-12));
        }
    }

    CHECK_THROWS_AS((void)assemble_tf(0.0, std::span<const BranchTF>{}), DimensionError);
}

TEST_CASE("Jacobians against central differences") {
    const std::size_t t = 5;
    const auto p = FoEcmParams(0.05,
                               {{Resistance::finite(0.3), 2.0, FractionalOrder(0.6)},
                                {Resistance::open(), 5.0, FractionalOrder(0.35)}},
                               0.1);

    SUBCASE("lifted coordinates") {
        const auto lifted = lift(p);
        const auto jac = lifted_jacobian(lifted, t);
        REQUIRE(jac.cols() == 7);
        auto eval = [&](const LiftedParams& l) {
            const auto cv = CoefficientVector::from_tf(assemble_lifted(l, t), Structure::two_cpe, t, 0.1);
            return std::vector<double>(cv.values().begin(), cv.values().end());
        };
        auto coord = [](LiftedParams& l, int k) -> double& {
            if (k == 0) return l.d;
            auto& br = l.branches[static_cast<std::size_t>((k - 1) / 3)];
            return (k - 1) % 3 == 0 ? br.b : (k - 1) % 3 == 1 ? br.a0 : br.alpha;
        };
        for (int k = 0; k < 7; ++k) {
            const double h = 1e-6;
            auto up = lifted;
            auto dn = lifted;
            coord(up, k) += h;
            coord(dn, k) -= h;
            const auto cu = eval(up);
            const auto cd = eval(dn);
            for (std::size_t r = 0; r < cu.size(); ++r) {
                const double fd = (cu[r] - cd[r]) / (2 * h);
                CHECK(jac(static_cast<Eigen::Index>(r), k) == doctest::Approx(fd).epsilon(1e-6).scale(1e-9));
            }
        }
    }

    SUBCASE("theta omits the open resistance") {
        const auto jac = theta_jacobian(p, t);
        CHECK(jac.cols() == 6);
        CHECK(jac.rows() == 4 * static_cast<Eigen::Index>(t) + 5);
        // column for C_1 (index 2 after R_inf, R_1)
        const double h = 1e-7 * 2.0;
        auto with_c = [&](double c) {
            const FoEcmParams q(0.05,
                                {{Resistance::finite(0.3), c, FractionalOrder(0.6)},
                                 {Resistance::open(), 5.0, FractionalOrder(0.35)}},
                                0.1);
            const auto cv = coefficient_map(q, t);
            return std::vector<double>(cv.values().begin(), cv.values().end());
        };
        const auto cu = with_c(2.0 + h);
        const auto cd = with_c(2.0 - h);
        for (std::size_t r = 0; r < cu.size(); ++r) {
            const double fd = (cu[r] - cd[r]) / (2 * h);
            CHECK(jac(static_cast<Eigen::Index>(r), 2) == doctest::Approx(fd).epsilon(1e-6).scale(1e-9));
        }
    }
}
