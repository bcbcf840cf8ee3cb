#include "drttp/core_map.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>

#include "drttp/errors.hpp"

namespace drttp {

namespace {

const double kX0 = -std::log(2.0);

// log(1 + e^u) without overflow
double softplus(double u) {
    return u > 0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
}

MapPoint point_from_logit(double u) {
    MapPoint p;
    p.log_z = -softplus(-u);
    p.log_w = -softplus(u);
    p.z = std::exp(p.log_z);
    p.w = std::exp(p.log_w);
    return p;
}

double v_core(double z, double w, const RayIdentifiers& ri, const TangentPoly& tp) {
    const double d = z - tp.zt;
    const double zw = z * w;
    const double lo2 = ri.lambda_o * ri.lambda_o;
    return (lo2 - ri.f0() * z) * w / (d * d) - 2.0 * zw * (2.0 * z - 1.0) / (d * d * d)
           - 3.0 * zw * zw / (d * d * d * d);
}

}  // namespace

RayIdentifiers make_rays(double lambda_o, double mu_o) {
    if (!std::isfinite(lambda_o) || !std::isfinite(mu_o) || lambda_o < 0.0 || mu_o <= 0.0)
        throw ParamError("ray identifiers require lambda_o >= 0 and mu_o > 0");
    return {lambda_o, mu_o};
}

TangentPoly make_tangent(double zt) {
    if (!std::isfinite(zt) || (zt >= 0.0 && zt <= 1.0))
        throw ParamError("z_T must lie outside [0,1]");
    TangentPoly tp;
    tp.zt = zt;
    tp.sc0 = zt / (zt - 1.0);
    tp.c0 = tp.sc0 * tp.sc0;
    tp.c1 = 1.0;
    tp.a2 = 1.0 / ((1.0 - zt) * (1.0 - zt));
    tp.x_tilde_T = 2.0 * (zt - 1.0);
    tp.gamma = 1.0 - 2.0 * zt;
    return tp;
}

MapPoint map_x_to_z_dkv(double x) {
    MapPoint p;
    const double ln2 = std::log(2.0);
    if (x >= 0.0) {
        const double e = std::exp(-2.0 * x);
        const double s = std::sqrt(1.0 + e);
        p.z = 2.0 / (1.0 + s);
        p.w = e / ((1.0 + s) * (1.0 + s));
        p.log_z = ln2 - std::log1p(s);
        p.log_w = -2.0 * x - 2.0 * std::log1p(s);
    } else {
        const double t = std::exp(x);
        const double r = std::sqrt(1.0 + t * t);
        p.z = 2.0 * t / (t + r);
        p.w = (r - t) / (r + t);
        p.log_z = ln2 + x - std::asinh(t);
        p.log_w = std::log1p(-p.z);
    }
    return p;
}

MapPoint map_x_to_z_general(double x, const TangentPoly& tp) {
    if (!std::isfinite(x)) throw ParamError("map_x_to_z: non-finite x");
    const double zt = tp.zt;
    const double den = 2.0 * (1.0 - zt);
    auto xu = [&](double u) { return (zt * softplus(-u) + (1.0 - zt) * softplus(u)) / den + kX0; };
    // dx/du = (z - zt) / (2(1 - zt)) lies between sqrt(c0)/2 and 1/2
    const double slope_min = 0.5 * std::min(1.0, tp.sc0);
    const double dxr = x - kX0;
    const double u0 = dxr > 0 ? 2.0 * dxr : 2.0 * dxr / tp.sc0;
    const double span = std::fabs(xu(u0) - x) / slope_min + 1.0;
    auto f = [&](double u) {
        const MapPoint p = point_from_logit(u);
        return std::make_pair(xu(u) - x, (p.z - zt) / den);
    };
    std::uintmax_t iters = 100;
    const double u = boost::math::tools::newton_raphson_iterate(f, u0, u0 - span, u0 + span,
                                                                std::numeric_limits<double>::digits - 2, iters);
    return point_from_logit(u);
}

MapPoint map_x_to_z(double x, const TangentPoly& tp) {
    if (!std::isfinite(x)) throw ParamError("map_x_to_z: non-finite x");
    if (tp.zt == 2.0) return map_x_to_z_dkv(x);
    return map_x_to_z_general(x, tp);
}

double map_z_to_x(double z, const TangentPoly& tp) {
    if (!(z > 0.0 && z < 1.0)) throw ParamError("map_z_to_x: z must lie in (0,1)");
    return (-tp.zt * std::log(z) - (1.0 - tp.zt) * std::log1p(-z)) / (2.0 * (1.0 - tp.zt)) + kX0;
}

double dzdx(double z, const TangentPoly& tp) {
    return 2.0 * z * (1.0 - z) * (1.0 - tp.zt) / (z - tp.zt);
}

double tangent_poly_eval(double z, const TangentPoly& tp) {
    const double r = (z - tp.zt) / (1.0 - tp.zt);
    return r * r;
}

double schwarzian_eval(double z, const TangentPoly& tp) {
    if (z == tp.zt) throw ParamError("schwarzian_eval: pole at z = z_T");
    const double d = z - tp.zt;
    const double zw = z * (1.0 - z);
    return -0.5 / (d * d) + zw * (2.0 * z - 1.0) / (d * d * d) + 1.5 * zw * zw / (d * d * d * d);
}

double schwarzian_eta_hat(double eta_hat) {
    const double e2 = 1.0 / (eta_hat * eta_hat);
    return -0.5 - 3.0 * e2 + 1.5 * e2 * e2;
}

double potential_eval_z(double z, const RayIdentifiers& ri, const TangentPoly& tp) {
    if (!(z >= 0.0 && z <= 1.0)) throw ParamError("potential_eval_z: z outside [0,1]");
    return v_core(z, 1.0 - z, ri, tp);
}

double potential_eval_zw(double z, double w, const RayIdentifiers& ri, const TangentPoly& tp) {
    return v_core(z, w, ri, tp);
}

double potential_eval_x(double x, const RayIdentifiers& ri, const TangentPoly& tp) {
    const MapPoint p = map_x_to_z(x, tp);
    const double s = 1.0 - tp.zt;
    return s * s * v_core(p.z, p.w, ri, tp);
}

double potential_asymptote_left(const RayIdentifiers& ri, const TangentPoly& tp) {
    return ri.lambda_o * ri.lambda_o / tp.c0;
}

DkvParams dkv_map(const RayIdentifiers& ri) {
    const double lo2 = ri.lambda_o * ri.lambda_o, mo2 = ri.mu_o * ri.mu_o;
    return {(2.0 * mo2 - lo2 + 3.0) / 4.0, mo2 / 2.0, -lo2 / 4.0};
}

RayIdentifiers dkv_inverse(double A, double B) {
    if (!(B > 0.0)) throw ParamError("not in DRtTP(z_T=2) family: B must be positive");
    const double mo2 = 2.0 * B;
    const double rad = 2.0 * mo2 + 3.0 - 4.0 * A;
    if (rad < 0.0) throw ParamError("not in DRtTP(z_T=2) family: negative radicand");
    return {std::sqrt(rad), std::sqrt(mo2)};
}

double dkv_potential_eval(double eta_hat, double A, double B) {
    if (!(eta_hat >= 1.0)) throw ParamError("dkv_potential_eval: eta_hat must be >= 1");
    const double e = 1.0 / eta_hat;
    const double e2 = e * e;
    return -B * e + A * e2 - 0.75 * e2 * e2;
}

double eta_hat_of_x(double x) {
    return x > 0 ? std::sqrt(1.0 + std::exp(-2.0 * x)) : std::exp(-x) * std::sqrt(1.0 + std::exp(2.0 * x));
}

}  // namespace drttp
