#include "drttp/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <tuple>

#include "drttp/core_map.hpp"
#include "drttp/errors.hpp"
#include "drttp/oracle.hpp"
#include "drttp/parallel.hpp"
#include "drttp/spectral.hpp"
#include "drttp/susy.hpp"
#include "drttp/wavefunction.hpp"

namespace drttp {

namespace {

struct Point {
    double lambda_o, mu_o, zt;
};

const std::vector<Point>& acceptance_grid() {
    static const std::vector<Point> g = [] {
        std::vector<Point> v;
        for (double lo : {0.0, 0.5, 1.0, 2.0})
            for (double mo : {3.0, 5.0, 7.3})
                for (double zt : {2.0, -1.0}) v.push_back({lo, mo, zt});
        return v;
    }();
    return g;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

std::string tag(const Point& p) {
    return "(lo=" + fmt(p.lambda_o) + ",mo=" + fmt(p.mu_o) + ",zt=" + fmt(p.zt) + ")";
}

std::vector<double> energies(const std::vector<AehSolution>& sols) {
    std::vector<double> e;
    for (const AehSolution& s : sols) e.push_back(s.epsilon);
    return e;
}

// Oracle runs are the expensive part; identical requests are shared between groups.
const NumericSpectrum& oracle_cached(const std::string& key, const std::function<double(double)>& V, double left,
                                     double right, double h) {
    static std::mutex mu;
    static std::map<std::pair<std::string, double>, NumericSpectrum> cache;
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = cache.find({key, h});
        if (it != cache.end()) return it->second;
    }
    OracleOptions o;
    o.h = h;
    o.asym_left = left;
    o.asym_right = right;
    NumericSpectrum ns = solve_schrodinger(V, o);
    std::lock_guard<std::mutex> lk(mu);
    return cache.emplace(std::make_pair(key, h), std::move(ns)).first->second;
}

const NumericSpectrum& base_oracle(const Point& p, double h) {
    const RayIdentifiers ri = make_rays(p.lambda_o, p.mu_o);
    const TangentPoly tp = make_tangent(p.zt);
    return oracle_cached("base" + tag(p), [=](double x) { return potential_eval_x(x, ri, tp); },
                         potential_asymptote_left(ri, tp), 0.0, h);
}

class Sink {
public:
    Sink(std::vector<CheckResult>& out, std::string group) : out_(out), group_(std::move(group)) {}
    // passes when measured <= tol
    void le(const std::string& name, double measured, double tol, const std::string& note = "") {
        add(name, measured, tol, measured <= tol, false, note);
    }
    void flag(const std::string& name, bool ok, const std::string& note = "") {
        add(name, ok ? 0.0 : 1.0, 0.0, ok, false, note);
    }
    void info(const std::string& name, double measured, const std::string& note) {
        add(name, measured, 0.0, true, true, note);
    }
    void add(const std::string& name, double measured, double tol, bool pass, bool informational,
             const std::string& note) {
        // NaN never passes
        if (std::isnan(measured) && !informational) pass = false;
        out_.push_back({group_, name, measured, tol, pass, informational, note});
    }

private:
    std::vector<CheckResult>& out_;
    std::string group_;
};

CubicOptions cubic_options(const VerifyOptions& opt) {
    CubicOptions c;
    if (opt.inject_fault) c.lead_perturbation = 1e-3;
    return c;
}

// ---------------------------------------------------------------- map

void group_map(Sink& sk) {
    std::mt19937_64 rng(1001);
    std::uniform_real_distribution<double> Uz(1e-6, 1.0 - 1e-6), Ux(-20.0, 20.0);
    double tangent = 0.0;
    for (double zt : {2.0, -1.0, 3.5, -0.25, 1.1}) {
        const TangentPoly tp = make_tangent(zt);
        for (int i = 0; i < 1000; ++i) {
            const double z = Uz(rng);
            const double zp = dzdx(z, tp);
            const double lhs = zp * zp * tangent_poly_eval(z, tp);
            const double zw = z * (1.0 - z);
            tangent = std::max(tangent, std::fabs(lhs - 4.0 * zw * zw));
        }
    }
    sk.le("tangent_identity", tangent, tolerance::map_tangent, "(z')^2 T2 = 4 z^2 (1-z)^2");

    double gauge = 0.0;
    const TangentPoly t2 = make_tangent(2.0);
    for (auto [lo, mo] : {std::pair{0.0, 5.0}, {1.0, 7.3}, {2.5, 4.0}, {0.5, 3.0}}) {
        const RayIdentifiers ri = make_rays(lo, mo);
        const DkvParams dp = dkv_map(ri);
        for (int i = 0; i < 1000; ++i) {
            const double x = Ux(rng);
            const double lhs = dkv_potential_eval(eta_hat_of_x(x), dp.A, dp.B) - (dp.A - dp.B - 0.75);
            gauge = std::max(gauge, std::fabs(lhs - potential_eval_x(x, ri, t2)));
        }
    }
    sk.le("dkv_gauge_identity", gauge, tolerance::map_gauge);

    // {z, x} from finite differences of the inverse map against the closed form
    double schw = 0.0;
    for (double zt : {2.0, -1.0, 3.5, -0.25}) {
        const TangentPoly tp = make_tangent(zt);
        for (double x : {-3.0, -1.2, -0.4, 0.0, 0.7, 1.5, 2.5}) {
            auto fd = [&](double h) {
                double f[7];
                for (int j = -3; j <= 3; ++j) f[j + 3] = map_x_to_z(x + j * h, tp).z;
                const double d1 = (-f[0] + 9 * f[1] - 45 * f[2] + 45 * f[4] - 9 * f[5] + f[6]) / (60 * h);
                const double d2 =
                    (2 * f[0] - 27 * f[1] + 270 * f[2] - 490 * f[3] + 270 * f[4] - 27 * f[5] + 2 * f[6]) / (180 * h * h);
                const double d3 = (f[0] - 8 * f[1] + 13 * f[2] - 13 * f[4] + 8 * f[5] - f[6]) / (8 * h * h * h);
                return d3 / d1 - 1.5 * (d2 / d1) * (d2 / d1);
            };
            // the third-derivative stencil is fourth order; one Richardson step removes the leading term
            const double num = (16.0 * fd(5e-3) - fd(1e-2)) / 15.0;
            const double z = map_x_to_z(x, tp).z;
            const double exact = tp.x_tilde_T * tp.x_tilde_T * schwarzian_eval(z, tp);
            schw = std::max(schw, std::fabs(num - exact) / std::max(1.0, std::fabs(exact)));
        }
    }
    sk.le("schwarzian_finite_difference", schw, tolerance::map_schwarzian);

    double fast = 0.0, round = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double x = -60.0 + 0.06 * i;
        const MapPoint a = map_x_to_z(x, t2), b = map_x_to_z_general(x, t2);
        fast = std::max({fast, std::fabs(a.z - b.z), std::fabs(a.w - b.w)});
        if (a.z > 1e-6 && a.w > 1e-6) round = std::max(round, std::fabs(map_z_to_x(a.z, t2) - x));
    }
    sk.le("fast_path_vs_general", fast, tolerance::map_fast_path);
    sk.le("inverse_round_trip", round, 1e-9);

    double dkv_rt = 0.0;
    for (auto [lo, mo] : {std::pair{0.0, 5.0}, {1.0, 7.3}, {2.5, 4.0}}) {
        const DkvParams dp = dkv_map(make_rays(lo, mo));
        const RayIdentifiers back = dkv_inverse(dp.A, dp.B);
        dkv_rt = std::max({dkv_rt, std::fabs(back.lambda_o - lo), std::fabs(back.mu_o - mo)});
    }
    sk.le("dkv_parameter_round_trip", dkv_rt, 1e-12);

    double asym = 0.0;
    for (const Point& p : acceptance_grid()) {
        const RayIdentifiers ri = make_rays(p.lambda_o, p.mu_o);
        const TangentPoly tp = make_tangent(p.zt);
        asym = std::max({asym, std::fabs(potential_eval_x(-1e4, ri, tp) - potential_asymptote_left(ri, tp)),
                         std::fabs(potential_eval_x(1e4, ri, tp))});
    }
    sk.le("potential_asymptotes", asym, 1e-8);
}

// ---------------------------------------------------------------- wl

double wl_closed_eps(int m, double mu_o, double s) {
    const double k = 2.0 * m + 1.0;
    const double dl = 4.0 * (k * k * (s - 1.0) * (s - 1.0) + 4.0 * s * mu_o * mu_o);
    const double l1 = (-2.0 * (s + 1.0) * k + std::sqrt(dl)) / (8.0 * s);
    return -l1 * l1;
}

void group_wl(Sink& sk, const VerifyOptions& opt) {
    const Point p{0.0, 5.0, 2.0};
    const RayIdentifiers ri = make_rays(p.lambda_o, p.mu_o);
    const TangentPoly tp = make_tangent(p.zt);
    const std::vector<AehSolution> sp = spectrum(ri, tp, cubic_options(opt));
    sk.flag("level_count_is_two", sp.size() == 2, "found " + std::to_string(sp.size()));

    const std::array<double, 2> closed = {-std::pow((-6.0 + std::sqrt(804.0)) / 16.0, 2),
                                          wl_closed_eps(1, 5.0, 2.0)};
    double cub = 0.0;
    for (size_t n = 0; n < std::min<size_t>(2, sp.size()); ++n)
        cub = std::max(cub, std::fabs(sp[n].epsilon - closed[n]));
    if (sp.size() < 2) cub = NAN;
    sk.le("cubic_vs_closed_form", cub, tolerance::wl_closed_form);
    sk.info("literal_second_level_expression", -std::pow((-18.0 + std::sqrt(3236.0)) / 16.0, 2),
            "-[(-18+sqrt(3236))/16]^2; the quadratic gives " + fmt(closed[1]) + " (discriminant 836)");

    double qd = 0.0;
    for (int m = 0; m < 2; ++m) qd = std::max(qd, std::fabs(wl_solve(m, 5.0, tp)[1].epsilon - closed[m]));
    sk.le("quadratic_solver_vs_closed_form", qd, tolerance::wl_closed_form);

    const NumericSpectrum& ns = base_oracle(p, opt.oracle_h);
    double oe = ns.eigenvalues.size() == 2 ? 0.0 : NAN;
    for (size_t n = 0; n < std::min<size_t>(2, ns.eigenvalues.size()); ++n)
        oe = std::max(oe, std::fabs(ns.eigenvalues[n] - closed[n]));
    sk.le("oracle_vs_closed_form", oe, tolerance::wl_oracle_abs,
          "oracle levels " + std::to_string(ns.eigenvalues.size()));

    // closed forms at other asymptotically levelled points
    double other = 0.0;
    for (double zt : {-1.0, 3.0})
        for (double mo : {3.0, 7.3, 11.0}) {
            const TangentPoly t = make_tangent(zt);
            const std::vector<AehSolution> s = spectrum(make_rays(0.0, mo), t, cubic_options(opt));
            for (const AehSolution& a : s)
                other = std::max(other, std::fabs(a.epsilon - wl_closed_eps(a.m, mo, t.sc0)) /
                                            std::max(1.0, std::fabs(a.epsilon)));
        }
    sk.le("cubic_vs_closed_form_other_points", other, tolerance::wl_closed_form);
}

// ---------------------------------------------------------------- oracle grid

void group_oracle(Sink& sk, const VerifyOptions& opt) {
    const std::vector<Point>& g = acceptance_grid();
    std::vector<std::vector<AehSolution>> an(g.size());
    std::vector<const NumericSpectrum*> ns(g.size(), nullptr);
    std::vector<std::string> err(g.size());
    parallel_for(g.size(), [&](size_t i) {
        an[i] = spectrum(make_rays(g[i].lambda_o, g[i].mu_o), make_tangent(g[i].zt), cubic_options(opt));
        try {
            ns[i] = &base_oracle(g[i], opt.oracle_h);
        } catch (const NumericError& e) {
            err[i] = e.what();
        }
    });
    int literal_bad = 0;
    for (size_t i = 0; i < g.size(); ++i) {
        const std::string t = tag(g[i]);
        const int lit = bound_state_count(g[i].mu_o);
        const int got = static_cast<int>(an[i].size());
        if (got != lit) ++literal_bad;
        sk.flag("literal_count" + t, got == lit,
                "analytic " + std::to_string(got) + " vs ceil((mu_o-1)/2) = " + std::to_string(lit));
        if (!ns[i]) {
            sk.flag("oracle_count" + t, false, err[i]);
            continue;
        }
        const CompareReport r = compare_spectra(energies(an[i]), *ns[i], opt.oracle_tol, true);
        sk.flag("oracle_count" + t, r.count_match,
                "analytic " + std::to_string(got) + ", oracle " + std::to_string(ns[i]->eigenvalues.size()));
        sk.le("oracle_level_rel_error" + t, r.count_match ? r.max_rel : NAN, opt.oracle_tol);
        sk.flag("oracle_node_counts" + t, r.nodes_match);
        double conv = 0.0;
        for (size_t n = 0; n < ns[i]->convergence.size(); ++n)
            conv = std::max(conv, ns[i]->convergence[n] / std::max(1e-300, std::fabs(ns[i]->eigenvalues[n])));
        sk.info("oracle_richardson_estimate" + t, conv,
                "domain [" + fmt(ns[i]->x_min) + "," + fmt(ns[i]->x_max) + "]");
    }
    sk.info("literal_count_mismatches", literal_bad, "grid points where ceil((mu_o-1)/2) disagrees");
    int area_bad = 0;
    for (size_t i = 0; i < g.size(); ++i)
        if (static_cast<int>(an[i].size()) != level_count(make_rays(g[i].lambda_o, g[i].mu_o))) ++area_bad;
    sk.le("area_count_mismatches", area_bad, 0.0, "ceil((mu_o-lambda_o-1)/2)");
}

// ---------------------------------------------------------------- cubics

double rel_poly_residual(const CubicSpec& cs, double x) {
    double sc = 0.0, p = 1.0;
    for (int j = 3; j >= 0; --j) {
        sc += std::fabs(cs.coeffs[j]) * p;
        p *= std::fabs(x);
    }
    return std::fabs(cubic_eval(cs, x)) / std::max(sc, 1e-300);
}

void group_cubics(Sink& sk, const VerifyOptions& opt) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::uniform_int_distribution<int> M(0, 6);
    int sign_bad = 0, count_bad = 0, skipped = 0;
    double transfer = 0.0, quart = 0.0;
    const CubicOptions co = cubic_options(opt);
    for (int i = 0; i < 1000; ++i) {
        const int m = M(rng);
        const double lo = 4.0 * U(rng), mo = 0.5 + 14.5 * U(rng);
        const double zt = U(rng) < 0.5 ? 1.05 + 5.0 * U(rng) : -0.05 - 5.0 * U(rng);
        const RayIdentifiers ri = make_rays(lo, mo);
        const TangentPoly tp = make_tangent(zt);
        const CubicSpec c1 = cubic_coeffs(m, ri, tp, CubicVariable::lambda1, co);
        const CubicSpec c0 = cubic_coeffs(m, ri, tp, CubicVariable::lambda0, co);
        const CubicRoots r1 = real_cubic_roots(c1), r0 = real_cubic_roots(c0);
        if (r1.double_root_vicinity || r0.double_root_vicinity) {
            ++skipped;
            continue;
        }
        if ((c1.discriminant > 0) != (c0.discriminant > 0)) ++sign_bad;
        if (r1.roots.size() != r0.roots.size()) ++count_bad;
        for (double l1 : r1.roots) {
            double l0 = NAN;
            try {
                l0 = expdiff_transfer(l1, m, ri, tp, TransferDirection::lambda1_to_lambda0);
            } catch (const NumericError&) {
                continue;
            }
            transfer = std::max(transfer, rel_poly_residual(c0, l0));
            const double q = quartic_lambda1(l1, m, ri, tp.c0, tp.a2);
            const double l2 = l1 * l1;
            quart = std::max(quart, std::fabs(q) / std::max(1.0, l2 * l2 + std::pow(mo, 4) + std::pow(lo, 4)));
        }
    }
    sk.le("discriminant_sign_violations", sign_bad, 0.0);
    sk.le("real_root_count_violations", count_bad, 0.0);
    sk.le("transferred_root_residual", transfer, tolerance::cubic_residual);
    sk.le("quartic_residual_at_cubic_roots", quart, tolerance::cubic_residual);
    sk.info("draws_skipped_near_double_root", skipped, "of 1000");
}

// ---------------------------------------------------------------- eigenfunctions

void group_eigen(Sink& sk, const VerifyOptions& opt) {
    const std::vector<Point>& g = acceptance_grid();
    std::vector<std::array<double, 5>> res(g.size());
    parallel_for(g.size(), [&](size_t i) {
        const RayIdentifiers ri = make_rays(g[i].lambda_o, g[i].mu_o);
        const TangentPoly tp = make_tangent(g[i].zt);
        const std::vector<AehSolution> sp = spectrum(ri, tp, cubic_options(opt));
        double nodes = 0.0, gram = 0.0, schr = 0.0, rep = 0.0, xnodes = 0.0;
        for (size_t n = 0; n < sp.size(); ++n) {
            const AehSolution& s = sp[n];
            const int zn = count_nodes([&](double z) { return aeh_eval(z, s); }, 0.0, 1.0);
            if (zn != static_cast<int>(n)) nodes += 1.0;

            const double h = 2e-3, x0 = -30.0;
            std::vector<double> psi(30001);
            for (size_t j = 0; j < psi.size(); ++j) psi[j] = liouville_eval(map_x_to_z(x0 + j * h, tp), s, tp);
            int sc = 0;
            double prev = 0.0, mx = 0.0;
            for (double v : psi) mx = std::max(mx, std::fabs(v));
            for (double v : psi) {
                if (std::fabs(v) <= 1e-9 * mx) continue;
                if (prev != 0.0 && (v > 0) != (prev > 0)) ++sc;
                prev = v;
            }
            if (sc != static_cast<int>(n)) xnodes += 1.0;
            schr = std::max(schr, residual_check(psi, x0, h, s.epsilon,
                                                 [&](double x) { return potential_eval_x(x, ri, tp); }, 6));

            for (double z : {0.05, 0.3, 0.5, 0.7, 0.95}) {
                const std::vector<double> c = hypergeom_poly_coeffs(s.m, s.mu - s.m, s.lambda0 + 1.0);
                double scale = 0.0, zp = 1.0;
                for (double ck : c) scale += std::fabs(ck) * zp, zp *= z;
                rep = std::max(rep, std::fabs(poly_factor_eval(s, z) - poly_factor_eval_flipped(s, z)) / scale);
            }
            for (size_t k = 0; k <= n; ++k) {
                const double gnk = overlap(s, sp[k], tp) / std::sqrt(norm2(s, tp) * norm2(sp[k], tp));
                gram = std::max(gram, std::fabs(gnk - (k == n ? 1.0 : 0.0)));
            }
        }
        res[i] = {nodes, xnodes, gram, schr, rep};
    });
    double w[5] = {0, 0, 0, 0, 0};
    for (const auto& r : res)
        for (int k = 0; k < 5; ++k) w[k] = std::max(w[k], r[k]);
    sk.le("node_count_mismatches_z", w[0], 0.0);
    sk.le("node_count_mismatches_x", w[1], 0.0);
    sk.le("gram_residual", w[2], tolerance::gram);
    sk.le("schrodinger_residual", w[3], tolerance::schrodinger);
    sk.le("two_representation_identity", w[4], tolerance::two_representation);
}

// ---------------------------------------------------------------- susy

void group_susy(Sink& sk, const VerifyOptions& opt) {
    const Point p{0.0, 5.0, 2.0};
    const RayIdentifiers ri = make_rays(p.lambda_o, p.mu_o);
    const TangentPoly tp = make_tangent(p.zt);
    const std::vector<AehSolution> sp = spectrum(ri, tp, cubic_options(opt));
    const std::vector<AehSolution> wl = wl_solve(0, p.mu_o, tp);
    const AehSolution c0 = wl[1], tm0 = wl[0], d0 = wl[2];
    const std::vector<double> base = base_oracle(p, opt.oracle_h).eigenvalues;
    const double left = potential_asymptote_left(ri, tp);
    const double tw = tolerance::spectral_window;

    struct Job {
        std::string name;
        std::function<double(double)> V;
        std::vector<double> ff_energies;
        std::vector<double> expected;
    };
    std::vector<Job> jobs;
    for (auto [nm, ff] : {std::pair{"c0", c0}, {"t-0", tm0}, {"d0", d0}}) {
        const PartnerSpec ps = single_partner_spec(ff, tp);
        jobs.push_back({std::string("single_") + nm, [=](double x) { return single_partner_eval_x(x, ff, ri, tp); },
                        {ff.epsilon}, ps.expected_spectral_delta});
    }
    for (auto [nm, a, b] : {std::tuple{"c0+t-0", c0, tm0}, {"d0+t-0", d0, tm0}}) {
        const FFPair pr = make_pair(a, b);
        const GateResult gr = pair_gate(pr, ri, tp);
        sk.flag(std::string("pair_admissible_") + nm, gr.admissible, gr.reason);
        if (!gr.admissible) continue;
        const PartnerSpec ps = double_partner_spec(pr);
        jobs.push_back({std::string("double_") + nm, [=](double x) { return double_partner_eval_x(x, pr, ri, tp); },
                        {a.epsilon, b.epsilon}, ps.expected_spectral_delta});
    }
    const GateResult rej = pair_gate(make_pair(d0, c0), ri, tp);
    sk.flag("pair_rejected_d0+c0", !rej.admissible, rej.reason);

    std::vector<std::vector<double>> num(jobs.size());
    parallel_for(jobs.size(), [&](size_t i) {
        num[i] = oracle_cached("partner_" + jobs[i].name + tag(p), jobs[i].V, left, 0.0, opt.oracle_h).eigenvalues;
    });
    for (size_t i = 0; i < jobs.size(); ++i) {
        const std::vector<double> diff = symmetric_difference(base, num[i], tw);
        std::ostringstream note;
        note << "base " << base.size() << " levels, partner " << num[i].size() << ", difference {";
        for (size_t k = 0; k < diff.size(); ++k) note << (k ? "," : "") << fmt(diff[k]);
        note << "}";
        sk.flag("spectral_difference_within_ff_energies_" + jobs[i].name, subset_within(diff, jobs[i].ff_energies, tw),
                note.str());
        const bool exact = diff.size() == jobs[i].expected.size() && subset_within(diff, jobs[i].expected, tw);
        sk.flag("spectral_difference_matches_prediction_" + jobs[i].name, exact);
    }
    // partner spectrum is independent of the three algebraic forms of the double-step potential
    double forms = 0.0;
    const FFPair pr = make_pair(c0, tm0);
    for (double z : {0.1, 0.35, 0.6, 0.9}) {
        const double a = double_partner_eval(z, pr, ri, tp, DeltaForm::plain);
        forms = std::max({forms, std::fabs(a - double_partner_eval(z, pr, ri, tp, DeltaForm::primed)),
                          std::fabs(a - double_partner_eval(z, pr, ri, tp, DeltaForm::symmetric))});
    }
    sk.le("double_step_forms_agree", forms, 1e-10);
    (void)sp;
}

// ---------------------------------------------------------------- heun

void group_heun(Sink& sk) {
    std::vector<double> zs;
    for (int i = 1; i < 20; ++i) zs.push_back(i / 20.0);
    double poly = 0.0, lw = 0.0, lin = 0.0, sum_lit = 0.0, exp_inf = 0.0, lin2 = 0.0;
    int n_poly = 0, n_lw = 0;
    for (double zt : {2.0, -1.0})
        for (double lo : {0.0, 0.7}) {
            const RayIdentifiers ri = make_rays(lo, 12.3);
            const TangentPoly tp = make_tangent(zt);
            const std::vector<AehSolution> basics = aeh_solutions(0, ri, tp);
            for (const AehSolution& t0 : basics)
                for (int m = 0; m <= 5; ++m)
                    for (const AehSolution& tq : aeh_solutions(m, ri, tp)) {
                        if (m == 0 && tq.kind == t0.kind) continue;
                        const PartnerSpec spec = single_partner_spec(t0, tp);
                        const SignTriple sg = natural_sigma(tq);
                        if (!gauge_admissible(sg, tp)) continue;
                        const HeunOperator op = heun_operator(tq.epsilon, spec, sg, ri, tp);
                        const HeunPoly hp = heun_poly_construct(t0, tq);
                        poly = std::max(poly, heun_residual_poly(op, hp.poly.coeffs, zs));
                        lin = std::max(lin, op.linearity_residual);
                        ++n_poly;
                        // exponents at infinity from the operator: r^2 - (2 b - 1) r + c1_1 = 0, b = lead of B2
                        const double blead = 0.5 * (op.b2(2.0) - 2.0 * op.b2(1.0) + op.b2(0.0));
                        const double sum_inf = 2.0 * blead - 1.0;
                        sum_lit = std::max(sum_lit, std::fabs(sum_inf - (op.rho0 + op.rho1 - 3.0)));
                        const double deg = hp.poly.degree;
                        exp_inf = std::max(exp_inf, std::fabs(deg * deg + sum_inf * deg + op.alpha_beta) /
                                                        std::max(1.0, deg * deg + std::fabs(op.alpha_beta)));
                        const SignTriple fl{-sg.s0, -sg.s1, -1};
                        if (gauge_admissible(fl, tp)) {
                            const HeunOperator op2 = heun_operator(tq.epsilon, spec, fl, ri, tp);
                            lw = std::max(lw, lambe_ward_residual(op2, tq, hp, zs));
                            ++n_lw;
                        }
                    }
            const std::vector<AehSolution> wl = lo == 0.0 ? wl_solve(0, 12.3, tp) : basics;
            for (size_t i = 0; i < wl.size(); ++i)
                for (size_t j = i + 1; j < wl.size(); ++j) {
                    if (std::fabs(wl[i].mu - wl[j].mu) < 1e-9) continue;
                    const FFPair pr = make_pair(wl[i], wl[j]);
                    for (const AehSolution& tq : aeh_solutions(2, ri, tp)) {
                        const SignTriple sg = natural_sigma(tq);
                        if (!gauge_admissible(sg, tp)) continue;
                        lin2 = std::max(lin2, heun_operator(tq.epsilon, double_partner_spec(pr), sg, ri, tp)
                                                  .linearity_residual);
                    }
                }
        }
    sk.le("heun_polynomial_residual", poly, tolerance::heun_residual, std::to_string(n_poly) + " polynomials");
    sk.le("lambe_ward_residual", lw, tolerance::heun_residual, std::to_string(n_lw) + " kernels");
    sk.le("accessory_polynomial_linearity", lin, tolerance::heun_residual);
    sk.le("double_step_accessory_linearity", lin2, tolerance::heun_residual);
    sk.le("exponent_at_infinity_equals_minus_degree", exp_inf, tolerance::heun_residual);
    sk.le("alpha_plus_beta_minus_rho_sum_plus_three", sum_lit, tolerance::heun_exponent_sum,
          "alpha+beta from the operator is 2 rho0 + 2 rho1 - 3");
}

// ---------------------------------------------------------------- b2 factorization

void group_b2_factor(Sink& sk) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double fac = 0.0, zero = 0.0, rel = 0.0;
    int draws = 0, attempts = 0;
    while (draws < 100 && attempts < 10000) {
        ++attempts;
        const double lo = 3.0 * U(rng);
        const double mo = lo + 1.05 + 8.0 * U(rng);
        const double zt = U(rng) < 0.5 ? 1.1 + 4.0 * U(rng) : -0.1 - 4.0 * U(rng);
        const RayIdentifiers ri = make_rays(lo, mo);
        const TangentPoly tp = make_tangent(zt);
        const std::vector<AehSolution> b = aeh_solutions(0, ri, tp);
        if (b.size() != 3) continue;
        bool distinct = true;
        for (int i = 0; i < 3; ++i)
            if (std::fabs(b[i].mu - b[(i + 1) % 3].mu) < 1e-6) distinct = false;
        if (!distinct) continue;
        ++draws;
        for (int i = 0; i < 3; ++i) {
            const B2Check c = b2_factor_check(b[i], b[(i + 1) % 3], b[(i + 2) % 3], tp, 100 + draws);
            fac = std::max(fac, c.factor_residual);
            zero = std::max(zero, c.zero_residual);
            rel = std::max(rel, c.pair_relation);
        }
    }
    sk.le("factorization_residual", fac, tolerance::b2_factor, std::to_string(draws) + " draws");
    sk.le("zero_condition", zero, tolerance::b2_zero);
    sk.le("pair_relation", rel, 1e-9);
}

// ---------------------------------------------------------------- nodelessness predicates

void group_nodeless(Sink& sk) {
    for (double zt : {2.0, -1.0}) {
        const TangentPoly tp = make_tangent(zt);
        int bad = 0, total = 0;
        for (int m = 1; m <= 8; ++m)
            for (int j = 0; j < 30; ++j) {
                const double mo = 1.3 + 0.5 * j;
                for (SeedKind k : {SeedKind::t_minus, SeedKind::c, SeedKind::d}) {
                    const bool pred = nodeless_predicate(k, m, mo, tp, Branch::primary) ||
                                      nodeless_predicate(k, m, mo, tp, Branch::secondary);
                    const bool brute = nodeless_brute_force_zeros(k, m, mo, tp) == 0;
                    ++total;
                    if (pred != brute) ++bad;
                }
            }
        sk.le("predicate_vs_brute_force(c0=" + fmt(tp.c0) + ")", bad, 0.0, std::to_string(total) + " cases");
    }
    const TangentPoly t4 = make_tangent(2.0);
    sk.le("d_threshold_at_c0_4", std::fabs(d_pair_threshold(t4) - std::sqrt(3.0)), 1e-12);
}

// ---------------------------------------------------------------- census

void group_census(Sink& sk) {
    int bad = 0, total = 0;
    double hyper = 0.0;
    for (double zt : {2.0, -1.0, 3.0, -0.3}) {
        const TangentPoly tp = make_tangent(zt);
        for (int j = 0; j < 40; ++j) {
            const double mo = 1.1 + 0.45 * j;
            const Census cs = nodeless_census(make_rays(0.0, mo), tp);
            for (int m = 0; m <= 12; ++m) {
                const AehSolution s = wl_solve(m, mo, tp)[0];
                const bool brute = count_poly_roots_01(poly_factor(s).coeffs) == 0;
                ++total;
                if (brute != census_predicts_nodeless(m, cs)) ++bad;
            }
        }
        if (tp.c0 > 0.25 + 1e-12)
            for (int m = 0; m < 4; ++m) {
                const double mx = mu_crossing(m, tp);
                if (std::isfinite(mx))
                    hyper = std::max(hyper, std::fabs(hyperbola_residual(m, make_rays(0.0, mx), tp)));
            }
    }
    sk.le("census_vs_brute_force", bad, 0.0, std::to_string(total) + " cases");
    sk.le("crossing_on_hyperbola", hyper, 1e-10);
}

// ---------------------------------------------------------------- constants

void group_constants(Sink& sk) {
    const StructureConstants sc0 = structure_constants(make_rays(0.0, 5.0), make_tangent(2.0));
    sk.le("symmetric_difference_identity_example", std::fabs(sc0.C00(2, 3) - sc0.C00(-2, -3) - 5.0), 0.0);
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> I(-40, 40);
    double ex = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double a = I(rng) * 0.25, b = I(rng) * 0.25;
        ex = std::max(ex, std::fabs(sc0.C00(a, b) - sc0.C00(-a, -b) - (a + b)));
    }
    sk.le("symmetric_difference_identity_dyadic", ex, 0.0);

    const RayIdentifiers ri = make_rays(0.0, 5.0);
    const TangentPoly tp = make_tangent(2.0);
    const std::vector<AehSolution> wl = wl_solve(0, 5.0, tp);
    double spread = 0.0, dd = 0.0;
    const double dref = derive_d(wl[1], ri, tp);
    for (const AehSolution& s : wl) spread = std::max(spread, std::fabs(derive_d(s, ri, tp) - dref));
    sk.le("d_consistent_across_basic_solutions", spread, tolerance::constants_consistency);
    sk.le("derived_d_equals_minus_four", std::fabs(dref + 4.0), tolerance::constants_consistency);
    for (const Point& p : acceptance_grid()) {
        const RayIdentifiers r = make_rays(p.lambda_o, p.mu_o);
        const TangentPoly t = make_tangent(p.zt);
        const double d = structure_constants(r, t).d;
        for (const AehSolution& s : aeh_solutions(0, r, t))
            if (std::fabs(s.epsilon) > 1e-6) dd = std::max(dd, std::fabs(derive_d(s, r, t) - d));
    }
    sk.le("d_closed_form_on_grid", dd, tolerance::constants_consistency);
}

bool selected(const VerifyOptions& opt, const std::string& g) {
    return opt.only.empty() || std::find(opt.only.begin(), opt.only.end(), g) != opt.only.end();
}

}  // namespace

int VerifyReport::failures() const {
    int n = 0;
    for (const CheckResult& c : checks)
        if (!c.pass && !c.informational) ++n;
    return n;
}

const std::vector<std::string>& verify_groups() {
    static const std::vector<std::string> g = {"map",   "wl",   "oracle",     "cubics",     "eigen",    "susy",
                                               "heun",  "appendix-a", "appendix-b", "census", "constants"};
    return g;
}

VerifyReport run_verify(const VerifyOptions& opt) {
    for (const std::string& g : opt.only)
        if (std::find(verify_groups().begin(), verify_groups().end(), g) == verify_groups().end())
            throw ParamError("unknown verification group: " + g);
    VerifyReport rep;
    auto run = [&](const std::string& g, const std::function<void(Sink&)>& f) {
        if (!selected(opt, g)) return;
        Sink sk(rep.checks, g);
        try {
            f(sk);
        } catch (const std::exception& e) {
            sk.flag("group_completed", false, e.what());
        }
    };
    run("map", [&](Sink& s) { group_map(s); });
    run("wl", [&](Sink& s) { group_wl(s, opt); });
    run("oracle", [&](Sink& s) { group_oracle(s, opt); });
    run("cubics", [&](Sink& s) { group_cubics(s, opt); });
    run("eigen", [&](Sink& s) { group_eigen(s, opt); });
    run("susy", [&](Sink& s) { group_susy(s, opt); });
    run("heun", [&](Sink& s) { group_heun(s); });
    run("appendix-a", [&](Sink& s) { group_b2_factor(s); });
    run("appendix-b", [&](Sink& s) { group_nodeless(s); });
    run("census", [&](Sink& s) { group_census(s); });
    run("constants", [&](Sink& s) { group_constants(s); });
    return rep;
}

}  // namespace drttp
