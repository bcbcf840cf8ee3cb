#include <doctest.h>

#include <cmath>
#include <vector>

#include "drttp/core_map.hpp"
#include "drttp/spectral.hpp"
#include "drttp/wavefunction.hpp"

using namespace drttp;

namespace {

// term-by-term sum of 2F1(-n, a; c; z)
double series_2f1(int n, double a, double c, double z) {
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < n; ++k) {
        term *= (k - n) * (a + k) / ((c + k) * (k + 1)) * z;
        sum += term;
    }
    return sum;
}

double integrate_x(const std::function<double(double)>& f, double a, double b, int n) {
    // composite Simpson
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

}  // namespace

TEST_CASE("terminating hypergeometric representations agree") {
    for (int n : {0, 1, 3, 6})
        for (double a : {2.5, 7.1})
            for (double c : {1.3, 4.0})
                for (double z = 0.05; z < 1.0; z += 0.15) {
                    const double ref = series_2f1(n, a, c, z);
                    const double tol = 1e-11 * (1.0 + std::fabs(ref));
                    CHECK(std::fabs(hypergeom_poly_eval(n, a, c, z) - ref) < tol);
                    CHECK(std::fabs(hypergeom_poly_eval_flipped(n, a, c, z) - ref) < tol * 10);
                    CHECK(std::fabs(hypergeom_poly_eval_jacobi(n, a, c, z) - ref) < tol * 10);
                    CHECK(std::fabs(poly_eval(hypergeom_poly_coeffs(n, a, c), z) - ref) < tol);
                }
}

TEST_CASE("pochhammer and polynomial derivative") {
    CHECK(pochhammer(3.0, 0) == 1.0);
    CHECK(pochhammer(3.0, 4) == doctest::Approx(3.0 * 4 * 5 * 6));
    const std::vector<double> d = poly_derivative({1.0, 2.0, 3.0, 4.0});
    REQUIRE(d.size() == 3);
    CHECK(d[0] == 2.0);
    CHECK(d[1] == 6.0);
    CHECK(d[2] == 12.0);
}

TEST_CASE("eigenfunctions are orthonormal in x") {
    const RayIdentifiers ri = make_rays(1.0, 7.3);
    const TangentPoly tp = make_tangent(2.0);
    const std::vector<AehSolution> sp = spectrum(ri, tp);
    REQUIRE(static_cast<int>(sp.size()) == level_count(ri));
    REQUIRE(sp.size() >= 3);
    for (size_t i = 0; i < sp.size(); ++i)
        for (size_t j = i; j < sp.size(); ++j) {
            const double num = integrate_x(
                [&](double x) {
                    return eigenfunction_eval_x(x, i, ri, tp, true) * eigenfunction_eval_x(x, j, ri, tp, true);
                },
                -60.0, 40.0, 40000);
            CHECK(num == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-8));
            const double z_overlap = overlap(sp[i], sp[j], tp) / std::sqrt(norm2(sp[i], tp) * norm2(sp[j], tp));
            CHECK(std::fabs(z_overlap - (i == j ? 1.0 : 0.0)) < 1e-9);
        }
}

TEST_CASE("eigenfunctions solve the Schrodinger equation and have n nodes") {
    for (double zt : {2.0, -1.0}) {
        const RayIdentifiers ri = make_rays(0.5, 7.3);
        const TangentPoly tp = make_tangent(zt);
        const std::vector<AehSolution> sp = spectrum(ri, tp);
        for (size_t n = 0; n < sp.size(); ++n) {
            auto psi = [&](double x) { return eigenfunction_eval_x(x, n, ri, tp, true); };
            const double h = 1e-3;
            double worst = 0.0;
            for (double x = -6.0; x <= 6.0; x += 0.31) {
                const double d2 = (-psi(x + 2 * h) + 16 * psi(x + h) - 30 * psi(x) + 16 * psi(x - h) - psi(x - 2 * h)) /
                                  (12 * h * h);
                worst = std::max(worst, std::fabs(-d2 + (potential_eval_x(x, ri, tp) - sp[n].epsilon) * psi(x)));
            }
            CHECK(worst < 1e-6);
            CHECK(count_nodes(psi, -40.0, 40.0) == static_cast<int>(n));
        }
    }
}

TEST_CASE("z-gauge and x-gauge representations are related by (z')^{-1/2}") {
    const RayIdentifiers ri = make_rays(2.0, 5.0);
    const TangentPoly tp = make_tangent(-1.0);
    const AehSolution s = spectrum(ri, tp)[0];
    for (double x = -4.0; x <= 4.0; x += 0.5) {
        const MapPoint p = map_x_to_z(x, tp);
        const double direct = aeh_eval(p.z, s) / std::sqrt(dzdx(p.z, tp));
        CHECK(liouville_eval(p, s, tp) == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("polynomial root counting") {
    CHECK(count_poly_roots_01({-0.25, 0.0, 1.0}) == 1);         // z = 0.5
    CHECK(count_poly_roots_01({0.06, -0.5, 1.0}) == 2);         // z = 0.2, 0.3
    CHECK(count_poly_roots_01({6.0, -5.0, 1.0}) == 0);          // z = 2, 3
    CHECK(count_poly_roots_01({1.0, 0.0, 1.0}) == 0);
}
