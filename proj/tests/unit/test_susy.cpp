#include <doctest.h>

#include <cmath>
#include <vector>

#include "drttp/core_map.hpp"
#include "drttp/errors.hpp"
#include "drttp/spectral.hpp"
#include "drttp/susy.hpp"

using namespace drttp;

namespace {

double d2_central(const std::function<double(double)>& f, double x, double h) {
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
}

struct Setup {
    RayIdentifiers ri = make_rays(0.0, 5.0);
    TangentPoly tp = make_tangent(2.0);
    AehSolution c0 = spectrum(ri, tp)[0];
    AehSolution tm0 = wl_solve(0, 5.0, tp)[0];
    AehSolution d0 = basic_solution(Kind::d, ri, tp);
};

}  // namespace

TEST_CASE("single-step partner is V - 2 (ln phi)'' in x") {
    for (double zt : {2.0, -1.0}) {
        const RayIdentifiers ri = make_rays(0.0, 5.0);
        const TangentPoly tp = make_tangent(zt);
        std::vector<AehSolution> ffs = {spectrum(ri, tp)[0], wl_solve(0, 5.0, tp)[0], basic_solution(Kind::d, ri, tp)};
        for (const AehSolution& ff : ffs) {
            auto lnphi = [&](double x) { return basic_ff_log_x(map_x_to_z(x, tp), ff, tp); };
            for (double x = -5.0; x <= 5.0; x += 0.4) {
                const double crum = potential_eval_x(x, ri, tp) - 2.0 * d2_central(lnphi, x, 1e-2);
                CHECK(std::fabs(single_partner_eval_x(x, ff, ri, tp) - crum) < 1e-6);
            }
        }
    }
}

TEST_CASE("double-step partner is V - 2 (ln W)'' in x") {
    const Setup s;
    for (const FFPair& pr : {make_pair(s.c0, s.tm0), make_pair(s.d0, s.tm0)}) {
        auto lnw = [&](double x) { return double_step_log_wronskian(map_x_to_z(x, s.tp), pr); };
        for (double x = -5.0; x <= 5.0; x += 0.4) {
            const double crum = potential_eval_x(x, s.ri, s.tp) - 2.0 * d2_central(lnw, x, 1e-2);
            CHECK(std::fabs(double_partner_eval_x(x, pr, s.ri, s.tp) - crum) < 1e-6);
        }
        for (double z = 0.05; z < 1.0; z += 0.1) {
            const double a = double_partner_eval(z, pr, s.ri, s.tp, DeltaForm::plain);
            CHECK(double_partner_eval(z, pr, s.ri, s.tp, DeltaForm::primed) == doctest::Approx(a).epsilon(1e-12));
            CHECK(double_partner_eval(z, pr, s.ri, s.tp, DeltaForm::symmetric) == doctest::Approx(a).epsilon(1e-12));
        }
    }
}

TEST_CASE("closed-form Wronskian matches the numerical one") {
    const Setup s;
    const FFPair pr = make_pair(s.c0, s.tm0);
    for (int i = 1; i < 10; ++i) {
        const double z = i / 10.0, h = 1e-5;
        auto f = [&](const AehSolution& a, double zz) { return basic_ff_eval(zz, a); };
        const double d1 = (f(s.c0, z + h) - f(s.c0, z - h)) / (2 * h);
        const double d2 = (f(s.tm0, z + h) - f(s.tm0, z - h)) / (2 * h);
        const double w = f(s.c0, z) * d2 - f(s.tm0, z) * d1;
        CHECK(std::fabs(double_step_wronskian(z, pr)) == doctest::Approx(std::fabs(w)).epsilon(1e-7));
    }
}

TEST_CASE("pair gate") {
    const Setup s;
    CHECK(pair_gate(make_pair(s.c0, s.tm0), s.ri, s.tp).admissible);
    CHECK(pair_gate(make_pair(s.d0, s.tm0), s.ri, s.tp).admissible);
    const GateResult rej = pair_gate(make_pair(s.d0, s.c0), s.ri, s.tp);
    CHECK_FALSE(rej.admissible);
    CHECK_FALSE(rej.reason.empty());
    CHECK_THROWS_AS(make_pair(s.c0, s.c0), ParamError);
}

TEST_CASE("expected spectral changes") {
    const Setup s;
    const PartnerSpec del = single_partner_spec(s.c0, s.tp);
    REQUIRE(del.expected_spectral_delta.size() == 1);
    CHECK(del.expected_spectral_delta[0] == doctest::Approx(s.c0.epsilon));
    CHECK(single_partner_spec(s.tm0, s.tp).expected_spectral_delta.empty());
    const PartnerSpec add = single_partner_spec(s.d0, s.tp);
    REQUIRE(add.expected_spectral_delta.size() == 1);
    CHECK(add.expected_spectral_delta[0] == doctest::Approx(-4.61039).epsilon(1e-5));
    CHECK_THROWS_AS(single_partner_eval(0.5, spectrum(s.ri, s.tp)[1], s.ri, s.tp), ParamError);
}

TEST_CASE("Heun polynomials are annihilated by their operator") {
    const RayIdentifiers ri = make_rays(0.0, 12.3);
    const TangentPoly tp = make_tangent(2.0);
    const AehSolution t0 = spectrum(ri, tp)[0];
    const PartnerSpec spec = single_partner_spec(t0, tp);
    std::vector<double> zs;
    for (int i = 1; i < 10; ++i) zs.push_back(i / 10.0);
    int tested = 0;
    for (int m = 1; m <= 4; ++m)
        for (const AehSolution& tq : aeh_solutions(m, ri, tp)) {
            const SignTriple sg = natural_sigma(tq);
            if (!gauge_admissible(sg, tp)) continue;
            const HeunOperator op = heun_operator(tq.epsilon, spec, sg, ri, tp);
            const HeunPoly hp = heun_poly_construct(t0, tq);
            CHECK(heun_residual_poly(op, hp.poly.coeffs, zs) < 1e-10);
            ++tested;
        }
    CHECK(tested > 0);
}

TEST_CASE("structure constant d at z_T = 2") {
    const RayIdentifiers ri = make_rays(0.0, 5.0);
    const TangentPoly tp = make_tangent(2.0);
    for (const AehSolution& s : wl_solve(0, 5.0, tp)) CHECK(derive_d(s, ri, tp) == doctest::Approx(-4.0).epsilon(1e-8));
    CHECK(structure_constants(ri, tp).d == doctest::Approx(-4.0));
}
