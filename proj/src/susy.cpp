#include "drttp/susy.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "drttp/errors.hpp"

namespace drttp {

namespace {

using Poly = std::vector<double>;

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly r(a.size() + b.size() - 1, 0.0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), 0.0);
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

double log_phi(const MapPoint& p, const AehSolution& s) {
    return 0.5 * (s.lambda0 + 1.0) * p.log_z + 0.5 * (s.lambda1 + 1.0) * p.log_w;
}

double v1_core(double z, double w, const AehSolution& ff, const RayIdentifiers& ri, const TangentPoly& tp) {
    const double d = z - tp.zt;
    const double zw = z * w;
    const double dO = 4.0 * (2.0 * z - (ff.mu - 1.0) * tp.zt + ff.lambda0 - 1.0);
    return potential_eval_zw(z, w, ri, tp) + 8.0 * zw * zw / (d * d * d * d) + zw * dO / (d * d * d);
}

double v2_core(double z, double w, const FFPair& pr, const RayIdentifiers& ri, const TangentPoly& tp, DeltaForm f) {
    const double d = z - tp.zt;
    const double e = z - pr.ztt;
    const double zw = z * w;
    return potential_eval_zw(z, w, ri, tp) + 8.0 * zw * zw / (d * d * e * e) + zw * double_delta_o1(z, pr, f) / (d * d * e);
}

}  // namespace

double basic_ff_eval(double z, const AehSolution& sol) {
    if (sol.m != 0) throw ParamError("basic_ff_eval requires a basic (m = 0) solution");
    return std::sqrt(z * (1.0 - z)) * std::pow(z, 0.5 * sol.lambda0) * std::pow(1.0 - z, 0.5 * sol.lambda1);
}

double basic_ff_log_derivative(double z, const AehSolution& sol) {
    return (sol.lambda0 + 1.0) / (2.0 * z) - (sol.lambda1 + 1.0) / (2.0 * (1.0 - z));
}

double basic_ff_log_x(const MapPoint& p, const AehSolution& sol, const TangentPoly& tp) {
    return 0.5 * std::log((p.z - tp.zt) / (2.0 * (1.0 - tp.zt))) + 0.5 * sol.lambda0 * p.log_z +
           0.5 * sol.lambda1 * p.log_w;
}

double single_delta_o1(double z, const AehSolution& ff, const TangentPoly& tp) {
    return 4.0 * (2.0 * z - (ff.mu - 1.0) * tp.zt + ff.lambda0 - 1.0);
}

double single_partner_eval(double z, const AehSolution& ff, const RayIdentifiers& ri, const TangentPoly& tp) {
    if (ff.m != 0) throw ParamError("single-step partner requires a basic factorization function");
    return v1_core(z, 1.0 - z, ff, ri, tp);
}

double single_partner_eval_x(double x, const AehSolution& ff, const RayIdentifiers& ri, const TangentPoly& tp) {
    const MapPoint p = map_x_to_z(x, tp);
    const double s = 1.0 - tp.zt;
    return s * s * v1_core(p.z, p.w, ff, ri, tp);
}

double outer_root_ztt(const AehSolution& t, const AehSolution& tq) {
    const double dm = tq.mu - t.mu;
    if (std::fabs(dm) < 1e-12 * std::max(1.0, std::fabs(t.mu))) throw ParamError("degenerate FF pair: equal mu");
    return (tq.lambda0 - t.lambda0) / dm;
}

double outer_root_ztt_from_lambda1(const AehSolution& t, const AehSolution& tq) {
    return 1.0 - (tq.lambda1 - t.lambda1) / (tq.mu - t.mu);
}

FFPair make_pair(const AehSolution& t, const AehSolution& tq) {
    if (t.m != 0 || tq.m != 0) throw ParamError("double-step pair requires basic solutions");
    return {t, tq, outer_root_ztt(t, tq)};
}

double double_step_ff_eval(double z, const FFPair& pr, const TangentPoly& tp) {
    return (pr.tq.mu - pr.t.mu) * basic_ff_eval(z, pr.tq) * (z - pr.ztt) / (z - tp.zt);
}

double double_step_wronskian(double z, const FFPair& pr) {
    return -(pr.tq.mu - pr.t.mu) * aeh_eval(z, pr.t) * aeh_eval(z, pr.tq) * (z - pr.ztt) / (2.0 * z * (1.0 - z));
}

double double_step_log_wronskian(const MapPoint& p, const FFPair& pr) {
    return std::log(std::fabs(pr.tq.mu - pr.t.mu)) + log_phi(p, pr.t) + log_phi(p, pr.tq) +
           std::log(std::fabs(p.z - pr.ztt)) - std::log(2.0) - p.log_z - p.log_w;
}

double double_delta_o1(double z, const FFPair& pr, DeltaForm form) {
    const AehSolution& a = pr.t;
    const AehSolution& b = pr.tq;
    switch (form) {
        case DeltaForm::plain: return 4.0 * (2.0 * z - (b.mu - 1.0) * pr.ztt + b.lambda0 - 1.0);
        case DeltaForm::primed: return 4.0 * (2.0 * z - (a.mu - 1.0) * pr.ztt + a.lambda0 - 1.0);
        case DeltaForm::symmetric: break;
    }
    return 2.0 * (4.0 * z - (a.mu + b.mu - 2.0) * pr.ztt + a.lambda0 + b.lambda0 - 2.0);
}

double double_partner_eval(double z, const FFPair& pr, const RayIdentifiers& ri, const TangentPoly& tp, DeltaForm form) {
    return v2_core(z, 1.0 - z, pr, ri, tp, form);
}

double double_partner_eval_x(double x, const FFPair& pr, const RayIdentifiers& ri, const TangentPoly& tp) {
    const MapPoint p = map_x_to_z(x, tp);
    const double s = 1.0 - tp.zt;
    return s * s * v2_core(p.z, p.w, pr, ri, tp, DeltaForm::symmetric);
}

GateResult pair_gate(const FFPair& pr, const RayIdentifiers& ri, const TangentPoly& tp) {
    GateResult g;
    if (pr.ztt >= 0.0 && pr.ztt <= 1.0) {
        g.reason = "outer pole inside the quantization interval";
        return g;
    }
    const int nodes = count_nodes([&](double z) { return double_step_ff_eval(z, pr, tp); }, 0.0, 1.0);
    if (nodes != 0) {
        g.reason = "combined factorization function has nodes";
        return g;
    }
    const bool has_d = pr.t.kind == Kind::d || pr.tq.kind == Kind::d;
    if (has_d && ri.lambda_o == 0.0 && !nodeless_predicate(SeedKind::d, 0, ri.mu_o, tp, Branch::primary)) {
        g.reason = "d-pair outside the admissible mu_o range";
        return g;
    }
    g.admissible = true;
    return g;
}

double bose_invariant(double z, double eps, double v, const TangentPoly& tp) {
    const double d = z - tp.zt;
    const double zw = z * (1.0 - z);
    const double s = 1.0 - tp.zt;
    return d * d * (eps / (s * s) - v - 2.0 * schwarzian_eval(z, tp)) / (4.0 * zw * zw);
}

PartnerSpec single_partner_spec(const AehSolution& ff, const TangentPoly& tp) {
    PartnerSpec s;
    s.steps = 1;
    s.ffs = {ff};
    s.outer_pole = tp.zt;
    if ((ff.lambda0 >= 0.0) == (ff.lambda1 >= 0.0)) s.expected_spectral_delta = {ff.epsilon};
    return s;
}

PartnerSpec double_partner_spec(const FFPair& pr) {
    PartnerSpec s;
    s.steps = 2;
    s.ffs = {pr.t, pr.tq};
    s.outer_pole = pr.ztt;
    for (const AehSolution& f : s.ffs)
        if ((f.lambda0 >= 0.0) == (f.lambda1 >= 0.0)) s.expected_spectral_delta.push_back(f.epsilon);
    return s;
}

double HeunOperator::b2(double z) const {
    return rho0 * (z - 1.0) * (z - p) + rho1 * z * (z - p) - z * (z - 1.0);
}

bool gauge_admissible(const SignTriple& s, const TangentPoly& tp) {
    if (s.s2 != -1) return false;
    if (s.s0 == s.s1 && (s.s0 == 1 || s.s0 == -1)) return true;
    if (s.s0 == -1 && s.s1 == 1) return tp.c0 < 1.0;
    if (s.s0 == 1 && s.s1 == -1) return tp.c0 > 1.0;
    return false;
}

HeunOperator heun_operator(double eps, const PartnerSpec& spec, const SignTriple& sg, const RayIdentifiers& ri,
                           const TangentPoly& tp) {
    if (!gauge_admissible(sg, tp)) throw ParamError("inadmissible gauge sign triple");
    if (eps > 1e-12) throw ParamError("heun_operator requires eps <= 0");
    eps = std::min(eps, 0.0);
    HeunOperator op;
    op.sigma = sg;
    op.p = spec.outer_pole;
    const double r0 = std::sqrt(std::max(0.0, ri.lambda_o * ri.lambda_o - tp.c0 * eps));
    const double r1 = std::sqrt(-eps);
    op.rho0 = 0.5 * (sg.s0 * r0 + 1.0);
    op.rho1 = 0.5 * (sg.s1 * r1 + 1.0);
    op.alpha_plus_beta = 2.0 * op.rho0 + 2.0 * op.rho1 - 3.0;

    std::function<double(double)> vp;
    if (spec.steps == 1) {
        const AehSolution ff = spec.ffs.at(0);
        vp = [=](double z) { return v1_core(z, 1.0 - z, ff, ri, tp); };
    } else {
        const FFPair pr = make_pair(spec.ffs.at(0), spec.ffs.at(1));
        vp = [=](double z) { return v2_core(z, 1.0 - z, pr, ri, tp, DeltaForm::symmetric); };
    }
    auto c1_at = [&](double z) {
        const double L = op.rho0 / z - op.rho1 / (1.0 - z) - 1.0 / (z - op.p);
        const double Lp = -op.rho0 / (z * z) - op.rho1 / ((1.0 - z) * (1.0 - z)) + 1.0 / ((z - op.p) * (z - op.p));
        const double P3 = z * (z - 1.0) * (z - op.p);
        return P3 * (Lp + L * L + bose_invariant(z, eps, vp(z), tp));
    };
    const double ya = c1_at(0.25), yb = c1_at(0.75), ym = c1_at(0.5);
    op.c1_1 = (yb - ya) / 0.5;
    op.c1_0 = ya - 0.25 * op.c1_1;
    op.linearity_residual = std::fabs(ym - op.c1(0.5)) / std::max({1.0, std::fabs(ya), std::fabs(yb)});
    op.alpha_beta = op.c1_1;
    op.q = -op.c1_0;
    const double disc = op.alpha_plus_beta * op.alpha_plus_beta - 4.0 * op.alpha_beta;
    op.real_alpha_beta = disc >= 0.0;
    if (op.real_alpha_beta) {
        const double sd = std::sqrt(disc);
        op.alpha = 0.5 * (op.alpha_plus_beta + sd);
        op.beta = 0.5 * (op.alpha_plus_beta - sd);
    }
    return op;
}

double heun_residual_poly(const HeunOperator& op, const std::vector<double>& coeffs, const std::vector<double>& zs) {
    const Poly d1 = poly_derivative(coeffs);
    const Poly d2 = poly_derivative(d1);
    double num = 0.0, den = 0.0;
    for (double z : zs) {
        const double P3 = z * (z - 1.0) * (z - op.p);
        const double t1 = P3 * poly_eval(d2, z);
        const double t2 = 2.0 * op.b2(z) * poly_eval(d1, z);
        const double t3 = op.c1(z) * poly_eval(coeffs, z);
        num = std::max(num, std::fabs(t1 + t2 + t3));
        den = std::max(den, std::fabs(t1) + std::fabs(t2) + std::fabs(t3));
    }
    return den > 0.0 ? num / den : num;
}

SignTriple natural_sigma(const AehSolution& tq) {
    return {tq.lambda0 >= 0.0 ? 1 : -1, tq.lambda1 >= 0.0 ? 1 : -1, -1};
}

HeunPoly heun_poly_construct(const AehSolution& t0, const AehSolution& tq) {
    if (t0.m != 0) throw ParamError("heun_poly_construct: factorization function must be basic");
    const Poly pi = hypergeom_poly_coeffs(tq.m, tq.mu - tq.m, tq.lambda0 + 1.0);
    const Poly zw = {0.0, 1.0, -1.0};
    const double a = 0.5 * (tq.lambda0 - t0.lambda0);
    const double b = 0.5 * (tq.lambda1 - t0.lambda1);
    const Poly lin = {a, -a - b};
    Poly hp = poly_add(poly_mul(zw, poly_derivative(pi)), poly_mul(lin, pi));
    hp.resize(tq.m + 2, 0.0);
    HeunPoly out;
    out.raw_leading = hp.back();
    double mx = 0.0;
    for (double c : hp) mx = std::max(mx, std::fabs(c));
    out.degenerate = std::fabs(out.raw_leading) <= 1e-12 * mx;
    if (!out.degenerate)
        for (double& c : hp) c /= out.raw_leading;
    out.poly.degree = out.degenerate ? tq.m : tq.m + 1;
    out.poly.coeffs = hp;
    out.poly.roots_in_01 = count_poly_roots_01(hp);
    return out;
}

double lambe_ward_eval(double z, const AehSolution& t0, const AehSolution& tq, const SignTriple& sg) {
    const HeunPoly hp = heun_poly_construct(t0, tq);
    const double A = 0.5 * (tq.lambda0 - sg.s0 * std::fabs(tq.lambda0));
    const double B = 0.5 * (tq.lambda1 - sg.s1 * std::fabs(tq.lambda1));
    return std::pow(z, A) * std::pow(1.0 - z, B) * poly_eval(hp.poly.coeffs, z);
}

double lambe_ward_residual(const HeunOperator& op, const AehSolution& tq, const HeunPoly& hp,
                           const std::vector<double>& zs) {
    const double A = 0.5 * (tq.lambda0 - op.sigma.s0 * std::fabs(tq.lambda0));
    const double B = 0.5 * (tq.lambda1 - op.sigma.s1 * std::fabs(tq.lambda1));
    const Poly& h = hp.poly.coeffs;
    const Poly d1 = poly_derivative(h);
    const Poly d2 = poly_derivative(d1);
    double num = 0.0, den = 0.0;
    for (double z : zs) {
        const double w = 1.0 - z;
        const double g = A / z - B / w;
        const double gg = g * g - A / (z * z) - B / (w * w);
        const double H = poly_eval(h, z), H1 = poly_eval(d1, z), H2 = poly_eval(d2, z);
        // f = z^A w^B H; divide the operator by z^A w^B
        const double P3 = z * (z - 1.0) * (z - op.p);
        const double t1 = P3 * (H2 + 2.0 * g * H1 + gg * H);
        const double t2 = 2.0 * op.b2(z) * (H1 + g * H);
        const double t3 = op.c1(z) * H;
        num = std::max(num, std::fabs(t1 + t2 + t3));
        den = std::max(den, std::fabs(t1) + std::fabs(t2) + std::fabs(t3));
    }
    return den > 0.0 ? num / den : num;
}

double b2_basic(double z, const AehSolution& t, const TangentPoly& tp) {
    const double r0 = 0.5 * (t.lambda0 + 1.0), r1 = 0.5 * (t.lambda1 + 1.0);
    return r0 * (z - 1.0) * (z - tp.zt) + r1 * z * (z - tp.zt) - z * (z - 1.0);
}

B2Check b2_factor_check(const AehSolution& t, const AehSolution& tq, const AehSolution& tqq, const TangentPoly& tp,
                        unsigned seed) {
    B2Check c;
    const double z1 = outer_root_ztt(t, tq);
    const double z2 = outer_root_ztt(t, tqq);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        const double z = U(rng);
        const double rhs = 0.5 * (t.mu - 1.0) * (z - z1) * (z - z2);
        c.factor_residual = std::max(c.factor_residual, std::fabs(b2_basic(z, t, tp) - rhs));
    }
    c.zero_residual = std::fabs(b2_basic(z1, t, tp));
    c.pair_relation = std::fabs(tp.zt * tp.zt * (tq.mu * tq.mu - t.mu * t.mu) -
                                (tq.lambda0 * tq.lambda0 - t.lambda0 * t.lambda0));
    return c;
}

double d_pair_threshold(const TangentPoly& tp) {
    const double s = tp.sc0;
    const double a = std::fabs(s - 1.0);
    const double dp = a + std::sqrt(a * a + (s + 1.0) * (s + 1.0) + 2.0 * std::fabs(1.0 - tp.c0));
    return std::sqrt((dp * dp - a * a) / (4.0 * s));
}

bool nodeless_predicate(SeedKind kind, int m, double mu_o, const TangentPoly& tp, Branch branch) {
    const double k = 2.0 * m + 1.0;
    const bool primary = k < mu_o;
    if ((branch == Branch::primary) != primary) return false;
    if (m == 0) {
        if (kind == SeedKind::d) return mu_o > std::max(1.0, d_pair_threshold(tp));
        return mu_o > 1.0;
    }
    const double s = tp.sc0;
    const double lhs = 4.0 * s * std::fabs(k * k - mu_o * mu_o);
    const double a = std::fabs(1.0 - s);
    double bracket = 0.0;
    switch (kind) {
        case SeedKind::t_minus: bracket = std::sqrt(wl_discriminant(0, mu_o, tp)) - 2.0 * (s + 1.0); break;
        case SeedKind::c: bracket = std::sqrt(wl_discriminant(1, mu_o, tp)) - 6.0 * (s + 1.0); break;
        case SeedKind::d: bracket = std::sqrt(wl_discriminant(0, mu_o, tp)) + 2.0 * (s + 1.0); break;
    }
    return lhs > a * bracket * k;
}

int nodeless_brute_force_zeros(SeedKind kind, int m, double mu_o, const TangentPoly& tp) {
    const std::vector<AehSolution> basic = wl_solve(0, mu_o, tp);
    const AehSolution& t0 = kind == SeedKind::t_minus ? basic[0] : kind == SeedKind::c ? basic[1] : basic[2];
    const AehSolution seed = wl_solve(m, mu_o, tp)[0];
    return heun_poly_construct(t0, seed).poly.roots_in_01;
}

StructureConstants structure_constants(const RayIdentifiers& ri, const TangentPoly& tp) {
    StructureConstants sc;
    sc.O00 = -(ri.mu_o * ri.mu_o - ri.lambda_o * ri.lambda_o + 1.0);
    sc.d = tp.a2 - tp.c0 - 1.0;
    return sc;
}

double derive_d(const AehSolution& basic, const RayIdentifiers& ri, const TangentPoly& tp) {
    const StructureConstants sc = structure_constants(ri, tp);
    const double r0 = 0.5 * (basic.lambda0 + 1.0), r1 = 0.5 * (basic.lambda1 + 1.0);
    if (basic.epsilon == 0.0) throw NumericError("derive_d: zero-energy solution");
    return -(8.0 * r0 * r1 + sc.O00) / basic.epsilon;
}

}  // namespace drttp
