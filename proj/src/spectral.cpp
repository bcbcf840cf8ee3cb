#include "drttp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "drttp/errors.hpp"

namespace drttp {

namespace {

using cplx = std::complex<double>;

double k_of(int m) { return 2.0 * m + 1.0; }

double cubic_discriminant(double a, double b, double c, double d) {
    return 18.0 * a * b * c * d - 4.0 * b * b * b * d + b * b * c * c - 4.0 * a * c * c * c - 27.0 * a * a * d * d;
}

void polish(double a, double b, double c, double d, double& x) {
    for (int it = 0; it < 2; ++it) {
        const double f = ((a * x + b) * x + c) * x + d;
        const double fp = (3.0 * a * x + 2.0 * b) * x + c;
        if (fp == 0.0 || !std::isfinite(fp)) return;
        const double nx = x - f / fp;
        if (std::isfinite(nx)) x = nx;
    }
}

std::vector<double> trig_roots(double a, double b, double c, double d) {
    const double p = (3.0 * a * c - b * b) / (3.0 * a * a);
    const double q = (2.0 * b * b * b - 9.0 * a * b * c + 27.0 * a * a * d) / (27.0 * a * a * a);
    const double shift = -b / (3.0 * a);
    if (p >= 0.0) return {shift, shift, shift};
    const double r = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    std::vector<double> out;
    for (int k = 0; k < 3; ++k) out.push_back(shift + r * std::cos(phi - 2.0 * M_PI * k / 3.0));
    return out;
}

struct RawRoot {
    double l0, l1;
};

// Sign pattern letters and the priming rules used for the whole root set.
std::vector<Kind> classify_set(const std::vector<RawRoot>& rs, const TangentPoly& tp) {
    std::vector<Kind> out(rs.size());
    const Kind primary = tp.c0 > 1.0 ? Kind::a : Kind::b;
    for (size_t i = 0; i < rs.size(); ++i) {
        const bool p0 = rs[i].l0 >= 0.0, p1 = rs[i].l1 >= 0.0;
        Kind k;
        if (p0 && !p1) k = Kind::a;
        else if (!p0 && p1) k = Kind::b;
        else if (p0 && p1) k = Kind::c;
        else k = Kind::d;
        out[i] = k;
    }
    for (size_t i = 0; i < rs.size(); ++i) {
        const Kind k = out[i];
        if (k == Kind::c) continue;
        bool has_smaller_twin = false;
        for (size_t j = 0; j < rs.size(); ++j) {
            if (j == i) continue;
            const bool same = (k == Kind::a || k == Kind::a_p) ? (out[j] == Kind::a || out[j] == Kind::a_p)
                              : (k == Kind::b || k == Kind::b_p) ? (out[j] == Kind::b || out[j] == Kind::b_p)
                                                                 : (out[j] == Kind::d || out[j] == Kind::d_p);
            if (same && (rs[j].l1 < rs[i].l1 || (rs[j].l1 == rs[i].l1 && j < i))) has_smaller_twin = true;
        }
        if (k == Kind::d) {
            if (has_smaller_twin) out[i] = Kind::d_p;
        } else if (k != primary || has_smaller_twin) {
            out[i] = (k == Kind::a) ? Kind::a_p : Kind::b_p;
        }
    }
    return out;
}

std::vector<RawRoot> raw_roots(int m, const RayIdentifiers& ri, const TangentPoly& tp, const CubicOptions& opt,
                               bool* dr_flag = nullptr) {
    std::vector<RawRoot> out;
    if (tp.c0 > 1.0) {
        const CubicSpec cs = cubic_coeffs(m, ri, tp, CubicVariable::lambda0, opt);
        const CubicRoots cr = real_cubic_roots(cs);
        if (dr_flag) *dr_flag = cr.double_root_vicinity;
        for (double l0 : cr.roots)
            out.push_back({l0, expdiff_transfer(l0, m, ri, tp, TransferDirection::lambda0_to_lambda1, 1e-13)});
    } else {
        const CubicSpec cs = cubic_coeffs(m, ri, tp, CubicVariable::lambda1, opt);
        const CubicRoots cr = real_cubic_roots(cs);
        if (dr_flag) *dr_flag = cr.double_root_vicinity;
        for (double l1 : cr.roots)
            out.push_back({expdiff_transfer(l1, m, ri, tp, TransferDirection::lambda1_to_lambda0, 1e-13), l1});
    }
    std::sort(out.begin(), out.end(), [](const RawRoot& x, const RawRoot& y) { return x.l1 < y.l1; });
    return out;
}

}  // namespace

std::string kind_name(Kind k) {
    switch (k) {
        case Kind::a: return "a";
        case Kind::b: return "b";
        case Kind::c: return "c";
        case Kind::d: return "d";
        case Kind::a_p: return "a'";
        case Kind::b_p: return "b'";
        case Kind::d_p: return "d'";
        case Kind::d_pp: return "d''";
    }
    return "?";
}

AehSolution make_solution(Kind kind, int m, double lambda0, double lambda1) {
    AehSolution s;
    s.kind = kind;
    s.m = m;
    s.lambda0 = lambda0;
    s.lambda1 = lambda1;
    s.mu = lambda0 + lambda1 + k_of(m);
    s.epsilon = -lambda1 * lambda1;
    return s;
}

CubicSpec cubic_coeffs(int m, const RayIdentifiers& ri, const TangentPoly& tp, CubicVariable var,
                       const CubicOptions& opt) {
    if (m < 0) throw ParamError("cubic_coeffs: m must be nonnegative");
    if (std::fabs(tp.c0 - 1.0) < 1e-14) throw ParamError("degenerate (Rosen-Morse) limit");
    const double k = k_of(m), k2 = k * k;
    const double s = tp.sc0;
    const double lo2 = ri.lambda_o * ri.lambda_o, mo2 = ri.mu_o * ri.mu_o;
    CubicSpec cs;
    cs.variable = var;
    if (var == CubicVariable::lambda1) {
        cs.coeffs[0] = 8.0 * s * (1.0 - s) * k;
        cs.coeffs[1] = -4.0 * (s * (mo2 - lo2 - k2) + lo2 + (tp.c0 - 1.0) * k2);
        cs.coeffs[2] = -4.0 * k * (mo2 + lo2 - k2);
        cs.coeffs[3] = (mo2 - (ri.lambda_o - k) * (ri.lambda_o - k)) * (mo2 - (ri.lambda_o + k) * (ri.lambda_o + k));
    } else {
        const double beta = 1.0 - 2.0 / s;
        const double C = mo2 - k2 - beta * lo2;
        cs.coeffs[0] = 8.0 * k * (s - 1.0);
        cs.coeffs[1] = 4.0 * k2 * tp.c0 - 4.0 * C * s - 4.0 * k2 + 4.0 * lo2;
        cs.coeffs[2] = -4.0 * k * C * tp.c0 + 8.0 * k * lo2;
        const double sc = s * C;
        cs.coeffs[3] = sc * sc + 4.0 * k2 * lo2;
    }
    cs.coeffs[0] *= 1.0 + opt.lead_perturbation;
    cs.discriminant = cubic_discriminant(cs.coeffs[0], cs.coeffs[1], cs.coeffs[2], cs.coeffs[3]);
    return cs;
}

double cubic_eval(const CubicSpec& cs, double x) {
    return ((cs.coeffs[0] * x + cs.coeffs[1]) * x + cs.coeffs[2]) * x + cs.coeffs[3];
}

CubicRoots real_cubic_roots(const CubicSpec& cs) {
    return real_cubic_roots(cs.coeffs[0], cs.coeffs[1], cs.coeffs[2], cs.coeffs[3]);
}

CubicRoots real_cubic_roots(double a, double b, double c, double d) {
    if (a == 0.0 || !std::isfinite(a)) throw ParamError("real_cubic_roots: leading coefficient vanishes");
    CubicRoots out;
    const double disc = cubic_discriminant(a, b, c, d);
    // scale of the roots of the monic cubic: Δ/a^4 is a degree-6 symmetric function of them
    const double scale = std::max({1.0, std::fabs(b / a), std::sqrt(std::fabs(c / a)), std::cbrt(std::fabs(d / a))});
    const double mdisc = disc / (a * a * a * a);
    out.double_root_vicinity = std::fabs(mdisc) < 1e-12 * std::pow(scale, 6);

    const double D0 = b * b - 3.0 * a * c;
    const double D1 = 2.0 * b * b * b - 9.0 * a * b * c + 27.0 * a * a * d;
    const cplx sq = std::sqrt(cplx(D1 * D1 - 4.0 * D0 * D0 * D0, 0.0));
    cplx C3 = 0.5 * (cplx(D1, 0.0) + sq);
    if (std::abs(C3) < 1e-14 * std::max(1.0, std::fabs(D1))) C3 = 0.5 * (cplx(D1, 0.0) - sq);
    std::vector<double> roots;
    if (std::abs(C3) == 0.0) {
        roots = {-b / (3.0 * a), -b / (3.0 * a), -b / (3.0 * a)};
    } else {
        const cplx C = std::pow(C3, 1.0 / 3.0);
        std::vector<cplx> zs;
        for (int k = 0; k < 3; ++k) {
            const cplx u = std::polar(1.0, 2.0 * M_PI * k / 3.0);
            zs.push_back(-(b + u * C + D0 / (u * C)) / (3.0 * a));
        }
        if (disc > 0.0 || out.double_root_vicinity) {
            for (const cplx& z : zs) roots.push_back(z.real());
        } else {
            auto it = std::min_element(zs.begin(), zs.end(),
                                       [](const cplx& x, const cplx& y) { return std::fabs(x.imag()) < std::fabs(y.imag()); });
            roots.push_back(it->real());
        }
    }
    bool ok = true;
    for (double r : roots) ok = ok && std::isfinite(r);
    if (!ok && disc >= 0.0) roots = trig_roots(a, b, c, d);
    for (double& r : roots) polish(a, b, c, d, r);
    std::sort(roots.begin(), roots.end());
    out.roots = roots;
    return out;
}

double quartic_lambda1(double l1, int m, const RayIdentifiers& ri, double c0, double a2) {
    const double L = l1 + k_of(m);
    const double lo2 = ri.lambda_o * ri.lambda_o;
    const double N = ri.mu_o * ri.mu_o - lo2 + (a2 - c0) * l1 * l1 - L * L;
    return N * N - 4.0 * L * L * (lo2 + c0 * l1 * l1);
}

double quartic_lambda0(double l0, int m, const RayIdentifiers& ri, double c0, double a2) {
    const double L = l0 + k_of(m);
    const double lo2 = ri.lambda_o * ri.lambda_o;
    const double P = ri.mu_o * ri.mu_o - L * L + (a2 - 1.0) / c0 * (l0 * l0 - lo2);
    return c0 * P * P - 4.0 * L * L * (l0 * l0 - lo2);
}

double expdiff_transfer(double known, int m, const RayIdentifiers& ri, const TangentPoly& tp, TransferDirection dir,
                        double tol) {
    const double L = known + k_of(m);
    const double scale = std::max(1.0, std::fabs(known));
    if (std::fabs(L) <= tol * scale) throw NumericError("a/d-hyperbola ambiguity: use the companion cubic");
    const double lo2 = ri.lambda_o * ri.lambda_o, mo2 = ri.mu_o * ri.mu_o;
    if (dir == TransferDirection::lambda1_to_lambda0) {
        const double N = mo2 - lo2 + (1.0 - 2.0 * tp.sc0) * known * known - L * L;
        return N / (2.0 * L);
    }
    const double P = mo2 - L * L + (1.0 - 2.0 / tp.sc0) * (known * known - lo2);
    return P / (2.0 * L);
}

double wl_discriminant(int m, double mu_o, const TangentPoly& tp) {
    const double k = k_of(m), s = tp.sc0;
    return 4.0 * (k * k * (s - 1.0) * (s - 1.0) + 4.0 * s * mu_o * mu_o);
}

std::vector<AehSolution> wl_solve(int m, double mu_o, const TangentPoly& tp) {
    if (std::fabs(tp.c0 - 1.0) < 1e-14) throw ParamError("degenerate (Rosen-Morse) limit");
    const double k = k_of(m), s = tp.sc0;
    const double g = k * k - mu_o * mu_o;
    const double lt = g / (2.0 * (s - 1.0) * k);
    const double sd = std::sqrt(wl_discriminant(m, mu_o, tp));
    const double lp = (-2.0 * (s + 1.0) * k + sd) / (8.0 * s);
    const double lm = (-2.0 * (s + 1.0) * k - sd) / (8.0 * s);
    std::vector<RawRoot> rs = {{-s * lt, lt}, {s * lp, lp}, {s * lm, lm}};
    const std::vector<Kind> ks = classify_set(rs, tp);
    std::vector<AehSolution> out;
    for (size_t i = 0; i < rs.size(); ++i) out.push_back(make_solution(ks[i], m, rs[i].l0, rs[i].l1));
    return out;
}

int bound_state_count(double mu_o) {
    if (mu_o <= 1.0) return 0;
    return static_cast<int>(std::ceil((mu_o - 1.0) / 2.0));
}

int level_count(const RayIdentifiers& ri) {
    const double x = (ri.mu_o - ri.lambda_o - 1.0) / 2.0;
    return x <= 0.0 ? 0 : static_cast<int>(std::ceil(x));
}

std::string region_name(Region r) {
    switch (r) {
        case Region::A: return "A";
        case Region::B: return "B";
        case Region::C: return "C";
        case Region::D: return "D";
    }
    return "?";
}

RegionInfo classify_region(int m, const RayIdentifiers& ri, double tol) {
    const double k = k_of(m), lo = ri.lambda_o, mo = ri.mu_o;
    RegionInfo r;
    const double sc = tol * std::max({1.0, k, lo, mo});
    r.sep_AD = std::fabs(mo - lo - k) <= sc;
    r.sep_BD = std::fabs(mo + lo - k) <= sc;
    r.sep_CD = std::fabs(mo - lo + k) <= sc;
    if (mo > lo + k && !r.sep_AD) r.region = Region::A;
    else if (mo + lo < k && !r.sep_BD) r.region = Region::B;
    else if (mo < lo - k && !r.sep_CD) r.region = Region::C;
    else r.region = Region::D;
    return r;
}

Kind classify_solution(double lambda0, double lambda1, int m, const RayIdentifiers& ri, const TangentPoly& tp) {
    std::vector<RawRoot> rs = raw_roots(m, ri, tp, {});
    size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < rs.size(); ++i) {
        const double dd = std::hypot(rs[i].l0 - lambda0, rs[i].l1 - lambda1);
        if (dd < bd) bd = dd, best = i;
    }
    if (rs.empty()) throw NumericError("classification error: empty root set");
    rs[best] = {lambda0, lambda1};
    return classify_set(rs, tp)[best];
}

std::vector<AehSolution> aeh_solutions(int m, const RayIdentifiers& ri, const TangentPoly& tp,
                                       const CubicOptions& opt) {
    const std::vector<RawRoot> rs = raw_roots(m, ri, tp, opt);
    const std::vector<Kind> ks = classify_set(rs, tp);
    std::vector<AehSolution> out;
    for (size_t i = 0; i < rs.size(); ++i) out.push_back(make_solution(ks[i], m, rs[i].l0, rs[i].l1));
    return out;
}

AehSolution basic_solution(Kind kind, const RayIdentifiers& ri, const TangentPoly& tp) {
    for (const AehSolution& s : aeh_solutions(0, ri, tp))
        if (s.kind == kind) return s;
    throw ParamError("basic solution of kind " + kind_name(kind) + " does not exist at these parameters");
}

double mu_crossing(int m, const TangentPoly& tp) {
    const double r = 2.0 * tp.sc0 - 1.0;
    return r > 0.0 ? std::sqrt(r) * k_of(m) : std::numeric_limits<double>::quiet_NaN();
}

double hyperbola_residual(int m, const RayIdentifiers& ri, const TangentPoly& tp) {
    const double k = k_of(m);
    return ri.mu_o * ri.mu_o - ri.lambda_o * ri.lambda_o + (1.0 - 2.0 * tp.sc0) * k * k;
}

Census nodeless_census(const RayIdentifiers& ri, const TangentPoly& tp) {
    Census cs;
    cs.n0 = level_count(ri);
    cs.has_mu_x = tp.c0 > 1.0;
    if (cs.has_mu_x) cs.mu_x0 = mu_crossing(0, tp);
    cs.hyperbola_residual = hyperbola_residual(0, ri, tp);
    if (ri.mu_o <= 1.0) return cs;
    cs.has_bound_states = true;
    const std::vector<AehSolution> wl = wl_solve(0, ri.mu_o, tp);
    cs.lambda1_c0 = wl[1].lambda1;
    const double s = std::fabs(tp.sc0 - 1.0);
    const double sl = s * cs.lambda1_c0;
    const double root = std::sqrt(sl * sl + ri.mu_o * ri.mu_o);
    cs.plus_m = (ri.mu_o * ri.mu_o / (sl + root) - 1.0) / 2.0;
    cs.minus_m = (sl + root - 1.0) / 2.0;
    const int pm = static_cast<int>(std::floor(cs.plus_m));
    if (tp.c0 > 1.0) {
        cs.m_a = std::min(pm, static_cast<int>(std::floor((ri.mu_o - ri.lambda_o - 1.0) / 2.0)));
    } else {
        cs.m_b = std::min(pm, static_cast<int>(std::floor((ri.mu_o + ri.lambda_o - 1.0) / 2.0)));
        cs.m_b_constraint = ri.lambda_o < ri.mu_o + 2.0 * pm + 1.0;
    }
    return cs;
}

bool census_predicts_nodeless(int m, const Census& cs) {
    if (!cs.has_bound_states) return false;
    return m < cs.n0 ? (m < cs.plus_m) : (m > cs.minus_m);
}

double tau_cubic_eval(double tau, const TangentPoly& tp) {
    const double s = tp.sc0;
    return ((8.0 * s * (1.0 - s) * tau + 4.0 * (1.0 + s - tp.c0)) * tau + 4.0) * tau + 1.0;
}

TauRoots asymptotic_tau(const TangentPoly& tp) {
    if (std::fabs(tp.c0 - 1.0) < 1e-14) throw ParamError("degenerate (Rosen-Morse) limit");
    const double s = tp.sc0;
    const double as = std::fabs(s - 1.0);
    TauRoots t;
    t.tau1[0] = 1.0 / (2.0 * (s - 1.0));
    t.tau1[1] = (as - s - 1.0) / (4.0 * s);
    t.tau1[2] = -(s + 1.0 + as) / (4.0 * s);
    for (int i = 0; i < 3; ++i) {
        const double t1 = t.tau1[i];
        if (std::fabs(t1 + 1.0) < 1e-9)
            t.tau0[i] = (i == 0 ? -s : s) * t1;
        else
            t.tau0[i] = (-2.0 * s * t1 * t1 - 2.0 * t1 - 1.0) / (2.0 * (t1 + 1.0));
    }
    const CubicRoots cr = real_cubic_roots(8.0 * s * (1.0 - s), 4.0 * (1.0 + s - tp.c0), 4.0, 1.0);
    for (int i = 0; i < 3 && i < static_cast<int>(cr.roots.size()); ++i) t.cubic_roots[i] = cr.roots[i];
    return t;
}

std::vector<AehSolution> spectrum(const RayIdentifiers& ri, const TangentPoly& tp, const CubicOptions& opt) {
    std::vector<AehSolution> out;
    for (int m = 0; ri.mu_o > ri.lambda_o + k_of(m); ++m) {
        bool dr = false;
        const std::vector<RawRoot> rs = raw_roots(m, ri, tp, opt, &dr);
        std::vector<RawRoot> adm;
        for (const RawRoot& r : rs)
            if (r.l0 > 0.0 && r.l1 > 0.0) adm.push_back(r);
        if (adm.size() != 1)
            throw NumericError("spectrum: no unique admissible root at m = " + std::to_string(m));
        if (dr) {
            for (double dl : {1e-9, -1e-9}) {
                RayIdentifiers rp = ri;
                rp.lambda_o = std::max(0.0, ri.lambda_o + dl);
                bool ign = false;
                const std::vector<RawRoot> rq = raw_roots(m, rp, tp, opt, &ign);
                bool found = false;
                for (const RawRoot& r : rq)
                    if (r.l0 > 0.0 && r.l1 > 0.0 && std::fabs(r.l1 - adm[0].l1) < 1e-4) found = true;
                if (!found) throw NumericError("spectrum: root discontinuity near a double root");
            }
        }
        out.push_back(make_solution(Kind::c, m, adm[0].l0, adm[0].l1));
    }
    return out;
}

}  // namespace drttp
