#include "drttp/wavefunction.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/jacobi.hpp>
#include <cmath>
#include <limits>

#include "drttp/errors.hpp"

namespace drttp {

namespace {

void check_denominators(int n, double c) {
    for (int k = 0; k < n; ++k)
        if (c + k == 0.0) throw ParamError("hypergeometric polynomial: pole in (c)_k");
}

}  // namespace

double pochhammer(double a, int n) {
    double p = 1.0;
    for (int k = 0; k < n; ++k) p *= a + k;
    return p;
}

std::vector<double> hypergeom_poly_coeffs(int n, double a, double c) {
    if (n < 0) throw ParamError("hypergeometric polynomial: negative degree");
    check_denominators(n, c);
    std::vector<double> cf(n + 1);
    cf[0] = 1.0;
    for (int k = 0; k < n; ++k) cf[k + 1] = cf[k] * (-n + k) * (a + k) / ((c + k) * (k + 1.0));
    return cf;
}

double hypergeom_poly_eval(int n, double a, double c, double z) {
    if (n < 0) throw ParamError("hypergeometric polynomial: negative degree");
    check_denominators(n, c);
    // Neumaier-compensated sum of the terms
    double term = 1.0, sum = 1.0, comp = 0.0;
    for (int k = 0; k < n; ++k) {
        term *= (-n + k) * (a + k) / ((c + k) * (k + 1.0)) * z;
        const double t = sum + term;
        comp += std::fabs(sum) >= std::fabs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
    }
    return sum + comp;
}

double hypergeom_poly_eval_flipped(int n, double a, double c, double z) {
    // F(-n,a;c;z) = (a)_n/(c)_n (-z)^n F(-n, 1-c-n; 1-a-n; 1/z)
    const double pre = pochhammer(a, n) / pochhammer(c, n) * std::pow(-z, n);
    return pre * hypergeom_poly_eval(n, 1.0 - c - n, 1.0 - a - n, 1.0 / z);
}

double hypergeom_poly_eval_jacobi(int n, double a, double c, double z) {
    // F(-n, n+al+be+1; al+1; z) = n!/(al+1)_n P_n^{(al,be)}(1-2z)
    const double al = c - 1.0;
    const double be = a - n - c;
    double nf = 1.0;
    for (int k = 2; k <= n; ++k) nf *= k;
    return nf / pochhammer(al + 1.0, n) * boost::math::jacobi(static_cast<unsigned>(n), al, be, 1.0 - 2.0 * z);
}

double poly_eval(const std::vector<double>& coeffs, double z) {
    double r = 0.0;
    for (size_t i = coeffs.size(); i-- > 0;) r = r * z + coeffs[i];
    return r;
}

std::vector<double> poly_derivative(const std::vector<double>& coeffs) {
    std::vector<double> d;
    for (size_t i = 1; i < coeffs.size(); ++i) d.push_back(coeffs[i] * static_cast<double>(i));
    if (d.empty()) d.push_back(0.0);
    return d;
}

PolyFactor poly_factor(const AehSolution& sol) {
    PolyFactor p;
    p.degree = sol.m;
    p.coeffs = hypergeom_poly_coeffs(sol.m, sol.mu - sol.m, sol.lambda0 + 1.0);
    p.roots_in_01 = count_poly_roots_01(p.coeffs);
    return p;
}

double poly_factor_eval(const AehSolution& sol, double z) {
    if (sol.m >= 12) return hypergeom_poly_eval_jacobi(sol.m, sol.mu - sol.m, sol.lambda0 + 1.0, z);
    return hypergeom_poly_eval(sol.m, sol.mu - sol.m, sol.lambda0 + 1.0, z);
}

double poly_factor_eval_flipped(const AehSolution& sol, double z) {
    return hypergeom_poly_eval_flipped(sol.m, sol.mu - sol.m, sol.lambda0 + 1.0, z);
}

double aeh_eval(double z, const AehSolution& sol) {
    if (z <= 0.0 || z >= 1.0) {
        const double e = z <= 0.0 ? (sol.lambda0 + 1.0) : (sol.lambda1 + 1.0);
        if (e > 0.0) return 0.0;
        if (e == 0.0) return poly_factor_eval(sol, z <= 0.0 ? 0.0 : 1.0);
        return std::copysign(std::numeric_limits<double>::infinity(), poly_factor_eval(sol, z <= 0.0 ? 0.0 : 1.0));
    }
    MapPoint p{z, 1.0 - z, std::log(z), std::log1p(-z)};
    return aeh_eval(p, sol);
}

double aeh_eval(const MapPoint& p, const AehSolution& sol) {
    const double lg = 0.5 * (sol.lambda0 + 1.0) * p.log_z + 0.5 * (sol.lambda1 + 1.0) * p.log_w;
    return std::exp(lg) * poly_factor_eval(sol, p.z);
}

double liouville_eval(const MapPoint& p, const AehSolution& sol, const TangentPoly& tp) {
    const double g = (p.z - tp.zt) / (2.0 * (1.0 - tp.zt));
    const double lg = 0.5 * std::log(g) + 0.5 * sol.lambda0 * p.log_z + 0.5 * sol.lambda1 * p.log_w;
    return std::exp(lg) * poly_factor_eval(sol, p.z);
}

double eigenfunction_eval_x(double x, int n, const RayIdentifiers& ri, const TangentPoly& tp, bool normalize) {
    const std::vector<AehSolution> sp = spectrum(ri, tp);
    if (n < 0 || n >= static_cast<int>(sp.size())) throw ParamError("eigenfunction index out of range");
    const double v = liouville_eval(map_x_to_z(x, tp), sp[n], tp);
    return normalize ? v / std::sqrt(norm2(sp[n], tp)) : v;
}

double overlap(const AehSolution& s1, const AehSolution& s2, const TangentPoly& tp) {
    const double e0 = 0.5 * (s1.lambda0 + s2.lambda0) - 1.0;
    const double e1 = 0.5 * (s1.lambda1 + s2.lambda1) - 1.0;
    const double den = 4.0 * (1.0 - tp.zt) * (1.0 - tp.zt);
    auto f = [&](double x, double xc) {
        const double z = x;
        const double w = xc > 0.0 ? xc : 1.0 - x;
        if (z <= 0.0 || w <= 0.0) return 0.0;
        const double d = z - tp.zt;
        return std::exp(e0 * std::log(z) + e1 * std::log(w)) * poly_factor_eval(s1, z) * poly_factor_eval(s2, z) * d *
               d / den;
    };
    boost::math::quadrature::tanh_sinh<double> integ(15);
    return integ.integrate(f, 0.0, 1.0, 1e-12);
}

double norm2(const AehSolution& s, const TangentPoly& tp) { return overlap(s, s, tp); }

int count_nodes(const std::function<double(double)>& f, double a, double b) {
    auto count = [&](int n) {
        int c = 0;
        double prev = 0.0;
        for (int i = 1; i < n; ++i) {
            const double v = f(a + (b - a) * static_cast<double>(i) / n);
            if (v == 0.0) continue;
            if (prev != 0.0 && (v > 0.0) != (prev > 0.0)) ++c;
            prev = v;
        }
        return c;
    };
    int n = 4096;
    int last = count(n);
    while (n < (1 << 20)) {
        n *= 2;
        const int cur = count(n);
        if (cur == last) return cur;
        last = cur;
    }
    throw NumericError("count_nodes: count unstable up to 2^20 points");
}

int count_poly_roots_01(const std::vector<double>& coeffs) {
    if (coeffs.size() <= 1) return 0;
    return count_nodes([&](double z) { return poly_eval(coeffs, z); }, 0.0, 1.0);
}

}  // namespace drttp
