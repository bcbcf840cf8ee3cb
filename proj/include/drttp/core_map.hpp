#pragma once

namespace drttp {

struct RayIdentifiers {
    double lambda_o = 0.0;
    double mu_o = 1.0;
    double f0() const { return mu_o * mu_o - 1.0; }
};

// Tangent polynomial T2[z] = (z - zt)^2 / (1 - zt)^2 with a double root outside [0,1].
struct TangentPoly {
    double zt = 2.0;
    double c0 = 4.0;     // T2[0] = (zt/(zt-1))^2
    double sc0 = 2.0;    // sqrt(c0) = zt/(zt-1) > 0
    double c1 = 1.0;     // T2[1]
    double a2 = 1.0;     // 1/(1-zt)^2 = (sqrt(c0)-1)^2
    double x_tilde_T = 2.0;
    double gamma = -3.0;
};

RayIdentifiers make_rays(double lambda_o, double mu_o);
TangentPoly make_tangent(double zt);

struct MapPoint {
    double z;      // in (0,1)
    double w;      // 1 - z, computed without cancellation
    double log_z;
    double log_w;
};

MapPoint map_x_to_z(double x, const TangentPoly& tp);
MapPoint map_x_to_z_general(double x, const TangentPoly& tp);
MapPoint map_x_to_z_dkv(double x);
double map_z_to_x(double z, const TangentPoly& tp);
double dzdx(double z, const TangentPoly& tp);

double tangent_poly_eval(double z, const TangentPoly& tp);

// x_tilde_T^{-2} {z, x} expressed through z.
double schwarzian_eval(double z, const TangentPoly& tp);
// {eta_hat, x} for the zt = 2 member, eta_hat = 2/z - 1.
double schwarzian_eta_hat(double eta_hat);

// z-gauge potential v[z]; the x-gauge potential is V = (1-zt)^2 v.
double potential_eval_z(double z, const RayIdentifiers& ri, const TangentPoly& tp);
// Same as potential_eval_z with 1 - z supplied exactly.
double potential_eval_zw(double z, double w, const RayIdentifiers& ri, const TangentPoly& tp);
double potential_eval_x(double x, const RayIdentifiers& ri, const TangentPoly& tp);
double potential_asymptote_left(const RayIdentifiers& ri, const TangentPoly& tp);
inline double potential_asymptote_right(const RayIdentifiers&, const TangentPoly&) { return 0.0; }

struct DkvParams {
    double A;
    double B;
    double zero_shift;
};

DkvParams dkv_map(const RayIdentifiers& ri);
RayIdentifiers dkv_inverse(double A, double B);
double dkv_potential_eval(double eta_hat, double A, double B);
double eta_hat_of_x(double x);

}  // namespace drttp
