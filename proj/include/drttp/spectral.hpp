#pragma once

#include <array>
#include <string>
#include <vector>

#include "drttp/core_map.hpp"

namespace drttp {

enum class Kind { a, b, c, d, a_p, b_p, d_p, d_pp };
std::string kind_name(Kind k);

struct AehSolution {
    Kind kind = Kind::c;
    int m = 0;
    double lambda0 = 0.0;
    double lambda1 = 0.0;
    double mu = 0.0;       // lambda0 + lambda1 + 2m + 1
    double epsilon = 0.0;  // -lambda1^2
};

AehSolution make_solution(Kind kind, int m, double lambda0, double lambda1);

enum class CubicVariable { lambda1, lambda0 };

struct CubicSpec {
    CubicVariable variable = CubicVariable::lambda1;
    std::array<double, 4> coeffs{};  // degree 3, 2, 1, 0
    double discriminant = 0.0;
};

// Test hook: multiplies the leading cubic coefficient by (1 + lead_perturbation).
struct CubicOptions {
    double lead_perturbation = 0.0;
};

CubicSpec cubic_coeffs(int m, const RayIdentifiers& ri, const TangentPoly& tp, CubicVariable var,
                       const CubicOptions& opt = {});
double cubic_eval(const CubicSpec& cs, double x);

struct CubicRoots {
    std::vector<double> roots;  // ascending, with multiplicity
    bool double_root_vicinity = false;
};

CubicRoots real_cubic_roots(const CubicSpec& cs);
CubicRoots real_cubic_roots(double a, double b, double c, double d);

// Defining quartics before the lambda^4 cancellation; a2 and c0 are kept independent.
double quartic_lambda1(double lambda1, int m, const RayIdentifiers& ri, double c0, double a2);
double quartic_lambda0(double lambda0, int m, const RayIdentifiers& ri, double c0, double a2);

enum class TransferDirection { lambda1_to_lambda0, lambda0_to_lambda1 };
double expdiff_transfer(double known, int m, const RayIdentifiers& ri, const TangentPoly& tp,
                        TransferDirection dir, double tol = 1e-10);

// Asymptotically levelled (lambda_o = 0) closed forms: [t-, quadratic +, quadratic -].
std::vector<AehSolution> wl_solve(int m, double mu_o, const TangentPoly& tp);
double wl_discriminant(int m, double mu_o, const TangentPoly& tp);

int bound_state_count(double mu_o);
int level_count(const RayIdentifiers& ri);

enum class Region { A, B, C, D };
std::string region_name(Region r);

struct RegionInfo {
    Region region = Region::D;
    bool sep_AD = false;  // mu_o == lambda_o + 2m + 1
    bool sep_BD = false;  // mu_o + lambda_o == 2m + 1
    bool sep_CD = false;  // mu_o == lambda_o - 2m - 1
    bool on_separatrix() const { return sep_AD || sep_BD || sep_CD; }
};

RegionInfo classify_region(int m, const RayIdentifiers& ri, double tol = 1e-12);

Kind classify_solution(double lambda0, double lambda1, int m, const RayIdentifiers& ri, const TangentPoly& tp);

// All real AEH solutions with polynomial degree m, classified, ascending in lambda1.
std::vector<AehSolution> aeh_solutions(int m, const RayIdentifiers& ri, const TangentPoly& tp,
                                       const CubicOptions& opt = {});
// Basic (m = 0) solution of the requested kind; throws ParamError when absent.
AehSolution basic_solution(Kind kind, const RayIdentifiers& ri, const TangentPoly& tp);

struct Census {
    bool has_bound_states = false;
    double lambda1_c0 = 0.0;   // asymptotically levelled ground-state ExpDiff
    double plus_m = 0.0;       // positive zero of (2m+1)^2 + 2s*l1*(2m+1) - mu_o^2
    double minus_m = 0.0;      // positive zero of (2m+1)^2 - 2s*l1*(2m+1) - mu_o^2
    int n0 = 0;
    int m_a = -1;              // only for c0 > 1
    int m_b = -1;              // only for c0 < 1
    bool m_b_constraint = false;
    bool has_mu_x = false;
    double mu_x0 = 0.0;        // crossing point for m = 0
    double hyperbola_residual = 0.0;  // at m = 0 for the query point
};

Census nodeless_census(const RayIdentifiers& ri, const TangentPoly& tp);
double mu_crossing(int m, const TangentPoly& tp);
double hyperbola_residual(int m, const RayIdentifiers& ri, const TangentPoly& tp);
// Census prediction for the t- solution of degree m at lambda_o = 0.
bool census_predicts_nodeless(int m, const Census& cs);

struct TauRoots {
    std::array<double, 3> tau1{};  // t-, d', d''
    std::array<double, 3> tau0{};
    std::array<double, 3> cubic_roots{};  // numerical roots of the tau cubic, ascending
};

TauRoots asymptotic_tau(const TangentPoly& tp);
double tau_cubic_eval(double tau, const TangentPoly& tp);

std::vector<AehSolution> spectrum(const RayIdentifiers& ri, const TangentPoly& tp, const CubicOptions& opt = {});

}  // namespace drttp
