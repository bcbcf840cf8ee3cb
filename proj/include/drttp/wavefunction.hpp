#pragma once

#include <functional>
#include <vector>

#include "drttp/core_map.hpp"
#include "drttp/spectral.hpp"

namespace drttp {

struct PolyFactor {
    int degree = 0;
    std::vector<double> coeffs;  // ascending powers of z
    int roots_in_01 = 0;
};

double pochhammer(double a, int n);

// Terminating 2F1(-n, a; c; z) and its coefficient list.
double hypergeom_poly_eval(int n, double a, double c, double z);
std::vector<double> hypergeom_poly_coeffs(int n, double a, double c);
// Same polynomial through the 1/z representation.
double hypergeom_poly_eval_flipped(int n, double a, double c, double z);
// Same polynomial through the Jacobi three-term recurrence.
double hypergeom_poly_eval_jacobi(int n, double a, double c, double z);

double poly_eval(const std::vector<double>& coeffs, double z);
std::vector<double> poly_derivative(const std::vector<double>& coeffs);

PolyFactor poly_factor(const AehSolution& sol);
double poly_factor_eval(const AehSolution& sol, double z);
double poly_factor_eval_flipped(const AehSolution& sol, double z);

// z^{(l0+1)/2} (1-z)^{(l1+1)/2} Pi_m(z)
double aeh_eval(double z, const AehSolution& sol);
double aeh_eval(const MapPoint& p, const AehSolution& sol);

// (z')^{-1/2} times the z-gauge solution, evaluated in logs.
double liouville_eval(const MapPoint& p, const AehSolution& sol, const TangentPoly& tp);
double eigenfunction_eval_x(double x, int n, const RayIdentifiers& ri, const TangentPoly& tp, bool normalize = false);

// Integral over the real line of psi_i psi_j dx, computed in z.
double overlap(const AehSolution& s1, const AehSolution& s2, const TangentPoly& tp);
double norm2(const AehSolution& s, const TangentPoly& tp);

// Strict sign changes on a refined uniform grid of the open interval (a, b).
int count_nodes(const std::function<double(double)>& f, double a, double b);
int count_poly_roots_01(const std::vector<double>& coeffs);

}  // namespace drttp
