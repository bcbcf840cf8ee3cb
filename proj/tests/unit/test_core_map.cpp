#include <doctest.h>

#include <cmath>
#include <random>

#include "drttp/core_map.hpp"
#include "drttp/errors.hpp"

using namespace drttp;

namespace {

// inverse of the closed-form z -> x by bisection; x(z) is increasing on (0,1)
double z_by_bisection(double x, const TangentPoly& tp) {
    double lo = 1e-300, hi = 1.0 - 1e-16;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (map_z_to_x(mid, tp) < x ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("tangent polynomial normalisation") {
    for (double zt : {2.0, -1.0, 5.0, -0.3}) {
        const TangentPoly tp = make_tangent(zt);
        CHECK(tangent_poly_eval(zt, tp) == doctest::Approx(0.0));
        CHECK(tangent_poly_eval(1.0, tp) == doctest::Approx(1.0));
        CHECK(tangent_poly_eval(0.0, tp) == doctest::Approx(tp.c0));
        CHECK(tp.c0 == doctest::Approx(std::pow(zt / (zt - 1.0), 2)));
        CHECK(tp.x_tilde_T == doctest::Approx(2.0 * (zt - 1.0)));
    }
}

TEST_CASE("double root inside the quantization interval is rejected") {
    for (double zt : {0.0, 0.5, 1.0}) CHECK_THROWS_AS(make_tangent(zt), ParamError);
    CHECK_THROWS_AS(make_rays(-0.1, 3.0), ParamError);
    CHECK_THROWS_AS(make_rays(0.0, 0.0), ParamError);
}

TEST_CASE("inverse map agrees with bisection") {
    for (double zt : {2.0, -1.0, 3.0}) {
        const TangentPoly tp = make_tangent(zt);
        for (double x = -8.0; x <= 8.0; x += 0.37) {
            const MapPoint p = map_x_to_z(x, tp);
            CHECK(p.z == doctest::Approx(z_by_bisection(x, tp)).epsilon(1e-12));
            CHECK(p.z + p.w == doctest::Approx(1.0));
            CHECK(std::exp(p.log_z) == doctest::Approx(p.z).epsilon(1e-13));
        }
    }
}

TEST_CASE("dz/dx is the reciprocal of dx/dz") {
    const TangentPoly tp = make_tangent(-1.0);
    for (double z = 0.05; z < 1.0; z += 0.1) {
        const double h = 1e-5;
        const double dxdz = (map_z_to_x(z + h, tp) - map_z_to_x(z - h, tp)) / (2 * h);
        CHECK(dzdx(z, tp) * dxdz == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("potential asymptotes") {
    for (double zt : {2.0, -1.0})
        for (double lo : {0.0, 1.0, 2.0}) {
            const RayIdentifiers ri = make_rays(lo, 5.0);
            const TangentPoly tp = make_tangent(zt);
            CHECK(potential_eval_x(-80.0, ri, tp) == doctest::Approx(lo * lo / tp.c0).epsilon(1e-10));
            CHECK(std::fabs(potential_eval_x(80.0, ri, tp)) < 1e-20);
            CHECK(potential_asymptote_left(ri, tp) == doctest::Approx(lo * lo / tp.c0));
        }
}

TEST_CASE("x gauge is the scaled z gauge") {
    const RayIdentifiers ri = make_rays(0.5, 7.3);
    const TangentPoly tp = make_tangent(-1.0);
    for (double x = -5.0; x <= 5.0; x += 0.5) {
        const MapPoint p = map_x_to_z(x, tp);
        const double a2 = (1.0 - tp.zt) * (1.0 - tp.zt);
        CHECK(potential_eval_x(x, ri, tp) == doctest::Approx(a2 * potential_eval_zw(p.z, p.w, ri, tp)));
        CHECK(potential_eval_zw(p.z, p.w, ri, tp) == doctest::Approx(potential_eval_z(p.z, ri, tp)));
    }
}

TEST_CASE("DKV parameters round trip") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> L(0.0, 4.0), M(0.5, 12.0);
    for (int i = 0; i < 200; ++i) {
        const double lo = L(rng), mo = M(rng);
        const DkvParams dp = dkv_map(make_rays(lo, mo));
        const RayIdentifiers back = dkv_inverse(dp.A, dp.B);
        CHECK(back.lambda_o == doctest::Approx(lo).epsilon(1e-10));
        CHECK(back.mu_o == doctest::Approx(mo).epsilon(1e-10));
    }
}

TEST_CASE("DKV eta coordinate") {
    // eta_hat = 2/z - 1 along the zt = 2 map
    const TangentPoly tp = make_tangent(2.0);
    for (double x = -4.0; x <= 4.0; x += 0.25)
        CHECK(eta_hat_of_x(x) == doctest::Approx(2.0 / map_x_to_z(x, tp).z - 1.0).epsilon(1e-12));
}
