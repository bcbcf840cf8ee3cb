#include <doctest.h>

#include <cmath>
#include <vector>

#include "drttp/errors.hpp"
#include "drttp/oracle.hpp"

using namespace drttp;

TEST_CASE("harmonic oscillator") {
    OracleOptions o;
    o.h = 1e-3;
    o.asym_left = o.asym_right = 12.0;
    const NumericSpectrum ns = solve_schrodinger([](double x) { return x * x; }, o);
    REQUIRE(ns.eigenvalues.size() == 6);
    for (int n = 0; n < 6; ++n) {
        CHECK(ns.eigenvalues[n] == doctest::Approx(2.0 * n + 1.0).epsilon(1e-9));
        CHECK(ns.node_counts[n] == n);
    }
}

TEST_CASE("Poschl-Teller well") {
    // V = -l(l+1) sech^2 x has E_n = -(l - n)^2
    OracleOptions o;
    o.h = 1e-3;
    o.asym_left = o.asym_right = 0.0;
    const double l = 3.0;
    const NumericSpectrum ns = solve_schrodinger([=](double x) { return -l * (l + 1) / std::pow(std::cosh(x), 2); }, o);
    REQUIRE(ns.eigenvalues.size() == 3);
    for (int n = 0; n < 3; ++n) CHECK(ns.eigenvalues[n] == doctest::Approx(-(l - n) * (l - n)).epsilon(1e-8));
}

TEST_CASE("spectrum comparison") {
    NumericSpectrum ns;
    ns.eigenvalues = {-4.0, -1.0};
    ns.node_counts = {0, 1};
    CompareReport r = compare_spectra({-4.0, -1.0 + 1e-9}, ns, 1e-6);
    CHECK(r.pass);
    CHECK(r.count_match);
    r = compare_spectra({-4.0}, ns, 1e-6);
    CHECK_FALSE(r.pass);
    CHECK_FALSE(r.count_match);
    r = compare_spectra({-4.0, -1.1}, ns, 1e-6);
    CHECK_FALSE(r.pass);
    CHECK(r.max_abs == doctest::Approx(0.1));
}

TEST_CASE("symmetric difference of energy sets") {
    const std::vector<double> d = symmetric_difference({-5.0, -2.0, -1.0}, {-2.0 + 1e-8, -1.0, -0.5}, 1e-6);
    REQUIRE(d.size() == 2);
    CHECK(d[0] == -5.0);
    CHECK(d[1] == -0.5);
    CHECK(subset_within({-2.0}, {-3.0, -2.0 + 1e-9}, 1e-6));
    CHECK_FALSE(subset_within({-2.5}, {-3.0, -2.0}, 1e-6));
}

TEST_CASE("Schrodinger residual detects a detuned energy") {
    const double h = 2e-3, x0 = -10.0;
    std::vector<double> psi;
    for (int i = 0; x0 + i * h <= 10.0; ++i) {
        const double x = x0 + i * h;
        psi.push_back(std::exp(-0.5 * x * x));
    }
    auto V = [](double x) { return x * x; };
    const double good = residual_check(psi, x0, h, 1.0, V, 6);
    const double bad = residual_check(psi, x0, h, 1.1, V, 6);
    CHECK(good < 1e-9);
    CHECK(bad > 100.0 * good);
}
