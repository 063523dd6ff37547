#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ymb/grid.hpp"
#include "ymb/harmonic.hpp"
#include "ymb/poly.hpp"

using namespace ymb;

TEST_CASE("exact monomial integrals over the ball and sphere") {
    // vol(B^4) = pi^2/2, vol(S^3) = 2 pi^2
    CHECK(Poly::constant(1.0).integral_ball() == doctest::Approx(M_PI * M_PI / 2).epsilon(1e-14));
    CHECK(Poly::constant(1.0).integral_sphere() ==
          doctest::Approx(2 * M_PI * M_PI).epsilon(1e-14));
    // int_B x0^2 = vol * <x0^2> = pi^2/2 * 1/6 (by symmetry int r^2 = 4 int x0^2,
    // int_B r^2 dx = 2 pi^2 int_0^1 r^5 dr = pi^2/3)
    CHECK(Poly::monomial({2, 0, 0, 0}, 1.0).integral_ball() ==
          doctest::Approx(M_PI * M_PI / 12).epsilon(1e-14));
    CHECK(Poly::monomial({1, 0, 0, 0}, 1.0).integral_ball() == 0.0);
    // int_{S^3} x0^2 = 2 pi^2 / 4
    CHECK(Poly::monomial({2, 0, 0, 0}, 1.0).integral_sphere() ==
          doctest::Approx(M_PI * M_PI / 2).epsilon(1e-14));
    // int_{S^3} x0^4: moments of a uniform point: E[x0^4] = 3/(4*6) = 1/8
    CHECK(Poly::monomial({4, 0, 0, 0}, 1.0).integral_sphere() ==
          doctest::Approx(2 * M_PI * M_PI / 8).epsilon(1e-14));
}

TEST_CASE("poly arithmetic, derivative, laplacian, eval") {
    const Poly x0 = Poly::variable(0), x1 = Poly::variable(1);
    Poly p = x0 * x0 * x1 + x1 * 3.0;
    CHECK(p.degree() == 3);
    CHECK(p.eval({2, 5, 0, 0}) == doctest::Approx(4 * 5 + 15));
    CHECK(p.derivative(0).eval({2, 5, 0, 0}) == doctest::Approx(2 * 2 * 5));
    CHECK(p.derivative(1).eval({2, 5, 0, 0}) == doctest::Approx(4 + 3));
    CHECK(p.laplacian().eval({2, 5, 0, 0}) == doctest::Approx(2 * 5));

    // gradient via dual eval
    std::array<Dual4, 4> xd{Dual4(2.0, 0), Dual4(5.0, 1), Dual4(0.0, 2), Dual4(0.0, 3)};
    const Dual4 v = p.eval_dual(xd);
    CHECK(v.v == doctest::Approx(35.0));
    CHECK(v.d[0] == doctest::Approx(20.0));
    CHECK(v.d[1] == doctest::Approx(7.0));
}

TEST_CASE("harmonic extension of polynomial boundary data") {
    std::mt19937_64 rng(3);
    auto u = [&] { return std::uniform_real_distribution<double>(-1.0, 1.0)(rng); };

    // degree <= 1 data is already harmonic
    const Poly lin = Poly::variable(1, 2.5) + Poly::constant(0.5);
    CHECK(harmonic_extension(lin).degree() == lin.degree());

    // generic data up to degree 6: extension is harmonic and matches on S^3
    Poly f;
    for (int trial = 0; trial < 3; ++trial) {
        f = Poly();
        std::array<int, 4> e{};
        for (int t = 0; t < 12; ++t) {
            int rem = 6;
            for (int a = 0; a < 4; ++a) {
                e[a] = std::uniform_int_distribution<int>(0, rem)(rng);
                rem -= e[a];
            }
            f += Poly::monomial(e, u());
        }
        const Poly h = harmonic_extension(f);
        CHECK(h.laplacian().max_abs_coeff() < 1e-10 * std::max(1.0, f.max_abs_coeff()));
        // agreement on random boundary points
        for (int t = 0; t < 40; ++t) {
            Vec4 z{u(), u(), u(), u()};
            const double n = std::sqrt(norm2(z));
            for (auto& c : z) c /= n;
            CHECK(h.eval({z[0], z[1], z[2], z[3]}) ==
                  doctest::Approx(f.eval({z[0], z[1], z[2], z[3]})).epsilon(1e-10));
        }
    }
}

TEST_CASE("poly form calculus: d o d = 0 and bracket symmetry") {
    std::mt19937_64 rng(11);
    auto u = [&] { return std::uniform_real_distribution<double>(-1.0, 1.0)(rng); };
    PolyLie1 a;
    for (int m = 0; m < 4; ++m)
        for (int l = 0; l < 3; ++l) {
            a.comp[m][l] = Poly::monomial({1, 1, 0, 0}, u()) + Poly::monomial({0, 0, 2, 0}, u()) +
                           Poly::variable(3, u());
        }
    const PolyLie2 da = exterior_d(a);
    // d(dA) = 0 for every 3-index combination
    for (int mu = 0; mu < 4; ++mu)
        for (int nu = mu + 1; nu < 4; ++nu)
            for (int rho = nu + 1; rho < 4; ++rho)
                for (int l = 0; l < 3; ++l) {
                    double s1, s2, s3;
                    Poly dd = da.comp[pair_slot(nu, rho, s1)][l].derivative(mu) * s1 -
                              da.comp[pair_slot(mu, rho, s2)][l].derivative(nu) * s2 +
                              da.comp[pair_slot(mu, nu, s3)][l].derivative(rho) * s3;
                    CHECK(dd.max_abs_coeff() < 1e-14);
                }

    // graded symmetry [a, b] = [b, a] for 1-forms
    PolyLie1 b;
    for (int m = 0; m < 4; ++m)
        for (int l = 0; l < 3; ++l) b.comp[m][l] = Poly::variable(m, u()) + Poly::constant(u());
    const PolyLie2 ab = bracket_wedge(a, b);
    const PolyLie2 ba = bracket_wedge(b, a);
    for (int s = 0; s < 6; ++s)
        for (int l = 0; l < 3; ++l) {
            const Poly diff = ab.comp[s][l] - ba.comp[s][l];
            CHECK(diff.max_abs_coeff() < 1e-13);
        }
}

TEST_CASE("S^3 product rule integrates monomials exactly") {
    const S3Rule rule = S3Rule::build(12, 12, 24);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        std::array<int, 4> e{};
        int deg = std::uniform_int_distribution<int>(0, 16)(rng);
        int rem = deg;
        for (int a = 0; a < 4; ++a) {
            e[a] = std::uniform_int_distribution<int>(0, rem)(rng);
            rem -= e[a];
        }
        const Poly mono = Poly::monomial(e, 1.0);
        double q = 0.0;
        for (size_t i = 0; i < rule.size(); ++i) {
            const Vec4& z = rule.xs[i];
            q += rule.ws[i] * mono.eval({z[0], z[1], z[2], z[3]});
        }
        CHECK(q == doctest::Approx(mono.integral_sphere()).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("gauss-legendre sanity") {
    std::vector<double> x, w;
    gauss_legendre(8, x, w);
    double s = 0, s2 = 0;
    for (int i = 0; i < 8; ++i) {
        s += w[i];
        s2 += w[i] * std::pow(x[i], 14);
    }
    CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(s2 == doctest::Approx(2.0 / 15).epsilon(1e-13));
}

TEST_CASE("grid volumes") {
    const S3Rule ang = S3Rule::build(6, 6, 12);
    auto ball = ball_grid({0, 0, 0, 0}, 1.0, 4, 8, ang);
    CHECK(ball.weight_sum() == doctest::Approx(M_PI * M_PI / 2).epsilon(1e-12));

    auto bubble = bubble_ball_grid({0.3, 0, 0, 0}, 0.05, 8, 8, ang);
    CHECK(bubble.weight_sum() == doctest::Approx(M_PI * M_PI / 2).epsilon(1e-10));

    // quadrature exactness of low-degree polynomials on the bubble-fitted grid
    const Poly p = Poly::monomial({2, 0, 1, 0}, 1.0) + Poly::constant(0.3);
    double q = 0.0;
    for (const auto& n : bubble.nodes) q += n.w * p.eval({n.x[0], n.x[1], n.x[2], n.x[3]});
    CHECK(q == doctest::Approx(p.integral_ball()).epsilon(1e-9));
}
