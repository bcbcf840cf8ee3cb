#include <doctest.h>

#include <cmath>
#include <random>

#include "drttp/spectral.hpp"
#include "drttp/wavefunction.hpp"

using namespace drttp;

TEST_CASE("asymptotically levelled closed forms at mu_o = 5, z_T = 2") {
    const RayIdentifiers ri = make_rays(0.0, 5.0);
    const TangentPoly tp = make_tangent(2.0);
    const std::vector<AehSolution> sp = spectrum(ri, tp);
    REQUIRE(sp.size() == 2);
    const double l0 = (-6.0 + std::sqrt(804.0)) / 16.0;
    CHECK(sp[0].epsilon == doctest::Approx(-l0 * l0).epsilon(1e-12));
    CHECK(sp[0].epsilon == doctest::Approx(-1.952114355).epsilon(1e-9));
    CHECK(sp[1].epsilon == doctest::Approx(-0.465265917).epsilon(1e-8));
    CHECK(sp[0].epsilon < sp[1].epsilon);
}

TEST_CASE("bound state count") {
    CHECK(bound_state_count(1.0) == 0);
    CHECK(bound_state_count(3.0) == 1);
    CHECK(bound_state_count(5.0) == 2);
    CHECK(bound_state_count(7.3) == 4);
    CHECK(spectrum(make_rays(0.0, 1.0), make_tangent(2.0)).empty());
}

TEST_CASE("real cubic roots") {
    CubicRoots r = real_cubic_roots(1.0, -6.0, 11.0, -6.0);
    REQUIRE(r.roots.size() == 3);
    CHECK(r.roots[0] == doctest::Approx(1.0));
    CHECK(r.roots[1] == doctest::Approx(2.0));
    CHECK(r.roots[2] == doctest::Approx(3.0));
    r = real_cubic_roots(1.0, 0.0, 0.0, -8.0);
    REQUIRE(r.roots.size() == 1);
    CHECK(r.roots[0] == doctest::Approx(2.0));
    // badly scaled: roots 1e-4, 1, 1e4
    r = real_cubic_roots(1.0, -(1e4 + 1 + 1e-4), 1e4 + 1 + 1e-4, -1.0);
    REQUIRE(r.roots.size() == 3);
    CHECK(r.roots[0] == doctest::Approx(1e-4).epsilon(1e-10));
    CHECK(r.roots[2] == doctest::Approx(1e4).epsilon(1e-12));
}

TEST_CASE("cubic roots are zeros of the defining quartics") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> L(0.0, 3.0), M(0.5, 10.0), Z(1.2, 6.0);
    for (int i = 0; i < 100; ++i) {
        const RayIdentifiers ri = make_rays(L(rng), M(rng));
        const double zt = (i % 2 ? Z(rng) : 1.0 - Z(rng));
        const TangentPoly tp = make_tangent(zt);
        const int m = i % 4;
        for (const AehSolution& s : aeh_solutions(m, ri, tp)) {
            const double q1 = quartic_lambda1(s.lambda1, m, ri, tp.c0, tp.a2);
            const double q0 = quartic_lambda0(s.lambda0, m, ri, tp.c0, tp.a2);
            const double scale1 = std::pow(1.0 + std::fabs(s.lambda1) + ri.mu_o + ri.lambda_o + m, 4);
            const double scale0 = std::pow(1.0 + std::fabs(s.lambda0) + ri.mu_o + ri.lambda_o + m, 4);
            CHECK(std::fabs(q1) / scale1 < 1e-9);
            CHECK(std::fabs(q0) / scale0 < 1e-9);
            CHECK(s.mu == doctest::Approx(s.lambda0 + s.lambda1 + 2 * m + 1));
            CHECK(s.epsilon == doctest::Approx(-s.lambda1 * s.lambda1));
        }
    }
}

TEST_CASE("eigenfunction exponents are positive and polynomials nodeless only at m = 0") {
    const RayIdentifiers ri = make_rays(0.5, 7.3);
    const TangentPoly tp = make_tangent(-1.0);
    const std::vector<AehSolution> sp = spectrum(ri, tp);
    for (size_t n = 0; n < sp.size(); ++n) {
        CHECK(sp[n].m == static_cast<int>(n));
        CHECK(sp[n].lambda0 > 0.0);
        CHECK(sp[n].lambda1 > 0.0);
        CHECK(poly_factor(sp[n]).roots_in_01 == static_cast<int>(n));
    }
}

TEST_CASE("census agrees with direct zero counting of the t- polynomials") {
    // the census describes potentials that support bound states, mu_o > 1
    for (double zt : {2.0, -1.0, 4.0, -3.0})
        for (double mo = 1.05; mo < 14.0; mo += 0.61) {
            const TangentPoly tp = make_tangent(zt);
            const RayIdentifiers ri = make_rays(0.0, mo);
            const Census cs = nodeless_census(ri, tp);
            for (int m = 0; m <= 8; ++m) {
                const AehSolution t = wl_solve(m, mo, tp)[0];
                const int zeros = count_nodes([&](double z) { return poly_factor_eval(t, z); }, 0.0, 1.0);
                CHECK_MESSAGE(census_predicts_nodeless(m, cs) == (zeros == 0), "zt=", zt, " mu_o=", mo, " m=", m);
            }
        }
}
