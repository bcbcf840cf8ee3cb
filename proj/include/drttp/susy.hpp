#pragma once

#include <functional>
#include <string>
#include <vector>

#include "drttp/core_map.hpp"
#include "drttp/spectral.hpp"
#include "drttp/wavefunction.hpp"

namespace drttp {

// ---- factorization functions and partner potentials ----

double basic_ff_eval(double z, const AehSolution& sol);
double basic_ff_log_derivative(double z, const AehSolution& sol);
// log of the x-gauge factorization function (z')^{-1/2} * FF up to an additive constant
double basic_ff_log_x(const MapPoint& p, const AehSolution& sol, const TangentPoly& tp);

double single_delta_o1(double z, const AehSolution& ff, const TangentPoly& tp);
double single_partner_eval(double z, const AehSolution& ff, const RayIdentifiers& ri, const TangentPoly& tp);
double single_partner_eval_x(double x, const AehSolution& ff, const RayIdentifiers& ri, const TangentPoly& tp);

struct FFPair {
    AehSolution t;
    AehSolution tq;  // t'
    double ztt = 0.0;
};

double outer_root_ztt(const AehSolution& t, const AehSolution& tq);
double outer_root_ztt_from_lambda1(const AehSolution& t, const AehSolution& tq);
FFPair make_pair(const AehSolution& t, const AehSolution& tq);

double double_step_ff_eval(double z, const FFPair& pr, const TangentPoly& tp);
// z-gauge Wronskian of the two basic z-gauge solutions, closed form
double double_step_wronskian(double z, const FFPair& pr);
double double_step_log_wronskian(const MapPoint& p, const FFPair& pr);

enum class DeltaForm { plain, primed, symmetric };
double double_delta_o1(double z, const FFPair& pr, DeltaForm form);
double double_partner_eval(double z, const FFPair& pr, const RayIdentifiers& ri, const TangentPoly& tp,
                           DeltaForm form = DeltaForm::symmetric);
double double_partner_eval_x(double x, const FFPair& pr, const RayIdentifiers& ri, const TangentPoly& tp);

struct GateResult {
    bool admissible = false;
    std::string reason;
};

// Outer pole outside [0,1], nodeless combined FF, and the d-pair threshold on mu_o at lambda_o = 0.
GateResult pair_gate(const FFPair& pr, const RayIdentifiers& ri, const TangentPoly& tp);

// Bose invariant of a z-gauge potential v at energy eps.
double bose_invariant(double z, double eps, double v, const TangentPoly& tp);

// ---- Heun operators ----

struct SignTriple {
    int s0 = 1;
    int s1 = 1;
    int s2 = -1;
};

struct PartnerSpec {
    int steps = 1;
    std::vector<AehSolution> ffs;
    double outer_pole = 0.0;
    std::vector<double> expected_spectral_delta;
};

PartnerSpec single_partner_spec(const AehSolution& ff, const TangentPoly& tp);
PartnerSpec double_partner_spec(const FFPair& pr);

struct HeunOperator {
    double p = 0.0;
    double rho0 = 0.0, rho1 = 0.0;
    double alpha_plus_beta = 0.0;
    double alpha_beta = 0.0;
    bool real_alpha_beta = false;
    double alpha = 0.0, beta = 0.0;
    double q = 0.0;
    double c1_0 = 0.0, c1_1 = 0.0;  // C1(z) = c1_1 z + c1_0
    double linearity_residual = 0.0;
    SignTriple sigma;
    double b2(double z) const;
    double c1(double z) const { return c1_1 * z + c1_0; }
};

bool gauge_admissible(const SignTriple& s, const TangentPoly& tp);
HeunOperator heun_operator(double eps, const PartnerSpec& spec, const SignTriple& sg, const RayIdentifiers& ri,
                           const TangentPoly& tp);

// Relative residual max|P3 f'' + 2 B2 f' + C1 f| / max(|P3 f''| + |2 B2 f'| + |C1 f|) at the sample points.
double heun_residual_poly(const HeunOperator& op, const std::vector<double>& coeffs, const std::vector<double>& zs);

struct HeunPoly {
    PolyFactor poly;         // monic unless degenerate
    bool degenerate = false;
    double raw_leading = 0.0;
};

HeunPoly heun_poly_construct(const AehSolution& t0, const AehSolution& tq);
SignTriple natural_sigma(const AehSolution& tq);

double lambe_ward_eval(double z, const AehSolution& t0, const AehSolution& tq, const SignTriple& sg);
double lambe_ward_residual(const HeunOperator& op, const AehSolution& tq, const HeunPoly& hp,
                           const std::vector<double>& zs);

// ---- B2 factorization of the pair-partner operator ----

struct B2Check {
    double factor_residual = 0.0;  // max |B2 - (mu-1)/2 (z - z_tt')(z - z_tt'')|
    double zero_residual = 0.0;    // |B2(z_tt')|
    double pair_relation = 0.0;    // |z_T^2 (mu'^2 - mu^2) - (l0'^2 - l0^2)|
};

double b2_basic(double z, const AehSolution& t, const TangentPoly& tp);
B2Check b2_factor_check(const AehSolution& t, const AehSolution& tq, const AehSolution& tqq,
                        const TangentPoly& tp, unsigned seed = 7);

// ---- nodelessness predicates of the t- seeded Heun polynomials ----

enum class SeedKind { t_minus, c, d };
enum class Branch { primary, secondary };

bool nodeless_predicate(SeedKind kind, int m, double mu_o, const TangentPoly& tp, Branch branch);
double d_pair_threshold(const TangentPoly& tp);
// Zeros in (0,1) of the partner Heun polynomial seeded by t-_m.
int nodeless_brute_force_zeros(SeedKind kind, int m, double mu_o, const TangentPoly& tp);

// ---- structure constants ----

struct StructureConstants {
    double O00 = 0.0;
    double d = 0.0;
    double C00(double l0, double l1) const { return 0.5 * (l0 + 1.0) * (l1 + 1.0); }
};

StructureConstants structure_constants(const RayIdentifiers& ri, const TangentPoly& tp);
// d obtained by solving d*eps + 8 rho0 rho1 + O00 = 0 on a basic solution.
double derive_d(const AehSolution& basic, const RayIdentifiers& ri, const TangentPoly& tp);

}  // namespace drttp
