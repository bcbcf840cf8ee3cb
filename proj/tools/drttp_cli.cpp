#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "drttp/core_map.hpp"
#include "drttp/errors.hpp"
#include "drttp/oracle.hpp"
#include "drttp/spectral.hpp"
#include "drttp/susy.hpp"
#include "drttp/verify.hpp"
#include "drttp/wavefunction.hpp"

using json = nlohmann::ordered_json;
using namespace drttp;

namespace {

constexpr int kOk = 0, kVerifyFail = 1, kBadParams = 2, kRejected = 3;

struct Config {
    double lambda_o = 0.0;
    double mu_o = 5.0;
    double zt = 2.0;
    std::string n;
    double x_min = -10.0, x_max = 10.0;
    int points = 201;
    std::string format = "json";
    std::string out;
    double tol = NAN;
    std::string partner;
    std::vector<std::string> only;
    bool inject_fault = false;
    double h = 5e-4;
};

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit(const Config& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw ParamError("cannot open output file " + c.out);
    f << text;
}

std::string brief(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json params_json(const Config& c, const TangentPoly& tp) {
    return {{"lambda_o", c.lambda_o}, {"mu_o", c.mu_o}, {"z_T", c.zt}, {"c0", tp.c0}};
}

std::string provenance(const std::string& schema, const Config& c) {
    std::ostringstream os;
    os << "# schema=" << schema << " lambda_o=" << num(c.lambda_o) << " mu_o=" << num(c.mu_o) << " z_T=" << num(c.zt);
    return os.str();
}

json level_json(const AehSolution& s, int n) {
    return {{"n", n},           {"kind", kind_name(s.kind)}, {"lambda0", s.lambda0}, {"lambda1", s.lambda1},
            {"mu", s.mu},       {"epsilon", s.epsilon},      {"E", s.epsilon}};
}

// ---------------------------------------------------------------- spectrum

int cmd_spectrum(const Config& c) {
    const RayIdentifiers ri = make_rays(c.lambda_o, c.mu_o);
    const TangentPoly tp = make_tangent(c.zt);
    const std::vector<AehSolution> sp = spectrum(ri, tp);
    const std::string schema = "drttp.spectrum/1";
    int code = kOk;
    if (!std::isnan(c.tol)) {
        // each level must be a root of both characteristic cubics to the requested relative tolerance
        for (const AehSolution& s : sp) {
            const CubicSpec a = cubic_coeffs(s.m, ri, tp, CubicVariable::lambda1);
            const CubicSpec b = cubic_coeffs(s.m, ri, tp, CubicVariable::lambda0);
            auto rel = [](const CubicSpec& cs, double x) {
                double sc = 0.0, p = 1.0;
                for (int j = 3; j >= 0; --j) sc += std::fabs(cs.coeffs[j]) * p, p *= std::fabs(x);
                return std::fabs(cubic_eval(cs, x)) / sc;
            };
            if (!(rel(a, s.lambda1) <= c.tol && rel(b, s.lambda0) <= c.tol)) code = kVerifyFail;
        }
    }
    if (c.format == "csv") {
        std::ostringstream os;
        os << provenance(schema, c) << " c0=" << num(tp.c0) << " n0=" << sp.size() << " gauge=E=epsilon\n";
        os << "n,kind,lambda0,lambda1,mu,epsilon,E\n";
        for (size_t n = 0; n < sp.size(); ++n)
            os << n << "," << kind_name(sp[n].kind) << "," << num(sp[n].lambda0) << "," << num(sp[n].lambda1) << ","
               << num(sp[n].mu) << "," << num(sp[n].epsilon) << "," << num(sp[n].epsilon) << "\n";
        emit(c, os.str());
    } else {
        json j;
        j["schema"] = schema;
        j["params"] = params_json(c, tp);
        j["n0"] = sp.size();
        j["levels"] = json::array();
        for (size_t n = 0; n < sp.size(); ++n) j["levels"].push_back(level_json(sp[n], static_cast<int>(n)));
        j["gauge"] = {{"energy", "E = epsilon = -lambda1^2"},
                      {"potential", "V(x) = (1 - z_T)^2 v(z(x))"},
                      {"x_offset", -std::log(2.0)},
                      {"asymptote_left", potential_asymptote_left(ri, tp)},
                      {"asymptote_right", 0.0}};
        emit(c, dump(j));
    }
    if (code != kOk) std::cerr << "spectrum: a level failed the cubic residual check at tol " << num(c.tol) << "\n";
    return code;
}

// ---------------------------------------------------------------- partner resolution

AehSolution resolve_ff(const std::string& name, const RayIdentifiers& ri, const TangentPoly& tp) {
    if (name == "t-0" || name == "t0") {
        if (ri.lambda_o != 0.0) throw ParamError("FF t-0 exists only for lambda_o = 0");
        return wl_solve(0, ri.mu_o, tp)[0];
    }
    if (name.size() >= 2 && name[0] == 'c') {
        const int m = std::stoi(name.substr(1));
        const std::vector<AehSolution> sp = spectrum(ri, tp);
        if (m < 0 || m >= static_cast<int>(sp.size())) throw ParamError("no eigenfunction " + name);
        return sp[m];
    }
    if (name == "a0") return basic_solution(Kind::a, ri, tp);
    if (name == "b0") return basic_solution(Kind::b, ri, tp);
    if (name == "d0") return basic_solution(Kind::d, ri, tp);
    throw ParamError("unknown factorization function '" + name + "' (use c<m>, a0, b0, d0, t-0)");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

struct PartnerRequest {
    std::string label;
    bool pair = false;
    AehSolution ff;
    FFPair pr;
};

// "c0"            single step
// "c0,d0"         two separate single steps
// "d0,c0-pair"    one double step built from the listed pair
std::vector<PartnerRequest> parse_partners(const std::string& spec, const RayIdentifiers& ri, const TangentPoly& tp) {
    std::vector<PartnerRequest> out;
    if (spec.empty()) return out;
    std::vector<std::string> items = split(spec, ',');
    const std::string suffix = "-pair";
    const bool pair = !items.empty() && items.back().size() > suffix.size() &&
                      items.back().compare(items.back().size() - suffix.size(), suffix.size(), suffix) == 0;
    if (pair) {
        items.back().erase(items.back().size() - suffix.size());
        if (items.size() != 2) throw ParamError("a double-step partner needs exactly two FFs");
        PartnerRequest r;
        r.label = items[0] + "+" + items[1];
        r.pair = true;
        const AehSolution a = resolve_ff(items[0], ri, tp), b = resolve_ff(items[1], ri, tp);
        if (a.m != 0 || b.m != 0) throw ParamError("double-step FFs must be basic (m = 0) solutions");
        r.pr = make_pair(a, b);
        const GateResult g = pair_gate(r.pr, ri, tp);
        if (!g.admissible) throw RejectedConstruction("FF pair rejected by nodelessness gate: " + g.reason);
        out.push_back(r);
        return out;
    }
    for (const std::string& it : items) {
        PartnerRequest r;
        r.label = it;
        r.ff = resolve_ff(it, ri, tp);
        if (r.ff.m != 0) throw RejectedConstruction("FF rejected: single-step factorization function must be nodeless");
        out.push_back(r);
    }
    return out;
}

double partner_eval_x(const PartnerRequest& r, double x, const RayIdentifiers& ri, const TangentPoly& tp) {
    return r.pair ? double_partner_eval_x(x, r.pr, ri, tp) : single_partner_eval_x(x, r.ff, ri, tp);
}

std::vector<int> parse_levels(const std::string& s) {
    std::vector<int> out;
    for (const std::string& it : split(s, ',')) {
        const size_t dash = it.find('-', 1);
        if (dash != std::string::npos) {
            const int a = std::stoi(it.substr(0, dash)), b = std::stoi(it.substr(dash + 1));
            for (int k = a; k <= b; ++k) out.push_back(k);
        } else {
            out.push_back(std::stoi(it));
        }
    }
    for (int k : out)
        if (k < 0) throw ParamError("level index must be non-negative");
    return out;
}

// ---------------------------------------------------------------- tabulate

int cmd_tabulate(const Config& c) {
    const RayIdentifiers ri = make_rays(c.lambda_o, c.mu_o);
    const TangentPoly tp = make_tangent(c.zt);
    if (c.points < 2 || !(c.x_max > c.x_min)) throw ParamError("tabulate needs points >= 2 and x_max > x_min");
    const std::vector<PartnerRequest> parts = parse_partners(c.partner, ri, tp);
    const std::vector<int> levels = parse_levels(c.n);
    const std::vector<AehSolution> sp = spectrum(ri, tp);
    std::vector<double> norms;
    for (int n : levels) {
        if (n >= static_cast<int>(sp.size()))
            throw ParamError("level " + std::to_string(n) + " does not exist (n0 = " + std::to_string(sp.size()) + ")");
        norms.push_back(std::sqrt(norm2(sp[n], tp)));
    }
    std::vector<std::string> cols = {"x", "V"};
    for (int n : levels) cols.push_back("psi_" + std::to_string(n));
    for (const PartnerRequest& r : parts) cols.push_back("V_partner_" + r.label);

    std::vector<std::vector<double>> rows;
    for (int i = 0; i < c.points; ++i) {
        const double x = c.x_min + (c.x_max - c.x_min) * i / (c.points - 1);
        std::vector<double> row = {x, potential_eval_x(x, ri, tp)};
        const MapPoint p = map_x_to_z(x, tp);
        for (size_t k = 0; k < levels.size(); ++k) row.push_back(liouville_eval(p, sp[levels[k]], tp) / norms[k]);
        for (const PartnerRequest& r : parts) row.push_back(partner_eval_x(r, x, ri, tp));
        rows.push_back(row);
    }
    const std::string schema = "drttp.tabulate/1";
    if (c.format == "json") {
        json j;
        j["schema"] = schema;
        j["params"] = params_json(c, tp);
        j["grid"] = {{"x_min", c.x_min}, {"x_max", c.x_max}, {"points", c.points}};
        j["partner"] = c.partner;
        j["columns"] = cols;
        j["rows"] = rows;
        emit(c, dump(j));
    } else {
        std::ostringstream os;
        os << provenance(schema, c) << " x_min=" << num(c.x_min) << " x_max=" << num(c.x_max)
           << " points=" << c.points << " n=" << (c.n.empty() ? "none" : c.n)
           << " partner=" << (c.partner.empty() ? "none" : c.partner) << "\n";
        for (size_t k = 0; k < cols.size(); ++k) os << (k ? "," : "") << cols[k];
        os << "\n";
        for (const auto& row : rows) {
            for (size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << num(row[k]);
            os << "\n";
        }
        emit(c, os.str());
    }
    return kOk;
}

// ---------------------------------------------------------------- partner

int cmd_partner(const Config& c) {
    const RayIdentifiers ri = make_rays(c.lambda_o, c.mu_o);
    const TangentPoly tp = make_tangent(c.zt);
    if (c.partner.empty()) throw ParamError("partner needs --partner <ff>[,<ff>-pair]");
    const std::vector<PartnerRequest> parts = parse_partners(c.partner, ri, tp);
    const std::vector<AehSolution> sp = spectrum(ri, tp);
    std::vector<double> base;
    for (const AehSolution& s : sp) base.push_back(s.epsilon);

    int code = kOk;
    json j;
    j["schema"] = "drttp.partner/1";
    j["params"] = params_json(c, tp);
    j["base_levels"] = base;
    j["partners"] = json::array();
    for (const PartnerRequest& r : parts) {
        const PartnerSpec ps = r.pair ? double_partner_spec(r.pr) : single_partner_spec(r.ff, tp);
        json pj;
        pj["label"] = r.label;
        pj["steps"] = ps.steps;
        pj["factorization_functions"] = json::array();
        for (const AehSolution& f : ps.ffs) pj["factorization_functions"].push_back(level_json(f, f.m));
        pj["outer_pole"] = ps.outer_pole;
        pj["expected_spectral_delta"] = ps.expected_spectral_delta;
        // deleted FF energies come from eigenfunctions; the rest are added below the base ground state
        std::vector<double> predicted;
        for (double e : base) {
            bool removed = false;
            for (double d : ps.expected_spectral_delta) removed = removed || std::fabs(d - e) < 1e-9;
            if (!removed) predicted.push_back(e);
        }
        for (double d : ps.expected_spectral_delta) {
            bool in_base = false;
            for (double e : base) in_base = in_base || std::fabs(d - e) < 1e-9;
            if (!in_base) predicted.push_back(d);
        }
        std::sort(predicted.begin(), predicted.end());
        pj["predicted_levels"] = predicted;
        if (!std::isnan(c.tol)) {
            OracleOptions o;
            o.h = c.h;
            o.asym_left = potential_asymptote_left(ri, tp);
            o.asym_right = 0.0;
            const NumericSpectrum ns = solve_schrodinger([&](double x) { return partner_eval_x(r, x, ri, tp); }, o);
            const CompareReport cr = compare_spectra(predicted, ns, c.tol);
            pj["oracle_levels"] = ns.eigenvalues;
            pj["oracle_max_abs_error"] = cr.max_abs;
            pj["oracle_tol"] = c.tol;
            pj["oracle_pass"] = cr.pass;
            if (!cr.pass) code = kVerifyFail;
        }
        j["partners"].push_back(pj);
    }
    if (c.format == "csv") {
        std::ostringstream os;
        os << provenance("drttp.partner/1", c) << " partner=" << c.partner << "\n";
        os << "label,steps,outer_pole,predicted_levels\n";
        for (const auto& pj : j["partners"]) {
            os << pj["label"].get<std::string>() << "," << pj["steps"].get<int>() << ","
               << num(pj["outer_pole"].get<double>()) << ",";
            const auto& pl = pj["predicted_levels"];
            for (size_t k = 0; k < pl.size(); ++k) os << (k ? ";" : "") << num(pl[k].get<double>());
            os << "\n";
        }
        emit(c, os.str());
    } else {
        emit(c, dump(j));
    }
    return code;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const Config& c) {
    VerifyOptions vo;
    for (const std::string& g : c.only)
        for (const std::string& s : split(g, ',')) vo.only.push_back(s);
    vo.inject_fault = c.inject_fault;
    vo.oracle_h = c.h;
    if (!std::isnan(c.tol)) vo.oracle_tol = c.tol;
    const VerifyReport rep = run_verify(vo);
    for (const CheckResult& r : rep.checks) {
        const char* st = r.informational ? "INFO" : r.pass ? "PASS" : "FAIL";
        std::cerr << st << " " << r.group << "/" << r.name << " measured=" << brief(r.measured) << " tol=" << brief(r.tol)
                  << (r.note.empty() ? "" : " (" + r.note + ")") << "\n";
    }
    std::cerr << rep.checks.size() << " checks, " << rep.failures() << " failed\n";
    if (c.format == "csv") {
        std::ostringstream os;
        os << "# schema=drttp.verify/1\n";
        os << "group,name,measured,tol,pass,informational\n";
        for (const CheckResult& r : rep.checks)
            os << r.group << "," << csv_field(r.name) << "," << num(r.measured) << "," << num(r.tol) << "," << (r.pass ? 1 : 0)
               << "," << (r.informational ? 1 : 0) << "\n";
        emit(c, os.str());
    } else {
        json j;
        j["schema"] = "drttp.verify/1";
        j["fault_injected"] = c.inject_fault;
        j["groups"] = vo.only.empty() ? json(verify_groups()) : json(vo.only);
        j["checks"] = json::array();
        for (const CheckResult& r : rep.checks)
            j["checks"].push_back({{"group", r.group},
                                   {"name", r.name},
                                   {"measured", r.measured},
                                   {"tol", r.tol},
                                   {"pass", r.pass},
                                   {"informational", r.informational},
                                   {"note", r.note}});
        j["summary"] = {{"checks", rep.checks.size()}, {"failed", rep.failures()}, {"pass", rep.passed()}};
        emit(c, dump(j));
    }
    return rep.passed() ? kOk : kVerifyFail;
}

// ---------------------------------------------------------------- wl

int cmd_wl(const Config& c) {
    if (c.lambda_o != 0.0) throw ParamError("wl describes the asymptotically levelled case; lambda_o must be 0");
    const TangentPoly tp = make_tangent(c.zt);
    const RayIdentifiers ri = make_rays(0.0, c.mu_o);
    const int n0 = bound_state_count(c.mu_o);
    const int mmax = c.n.empty() ? n0 : std::stoi(c.n);
    json j;
    j["schema"] = "drttp.wl/1";
    j["params"] = params_json(c, tp);
    j["n0"] = n0;
    j["orders"] = json::array();
    for (int m = 0; m <= mmax; ++m) {
        const std::vector<AehSolution> s = wl_solve(m, c.mu_o, tp);
        j["orders"].push_back({{"m", m},
                               {"discriminant", wl_discriminant(m, c.mu_o, tp)},
                               {"t_minus", level_json(s[0], m)},
                               {"plus", level_json(s[1], m)},
                               {"minus", level_json(s[2], m)},
                               {"bound", m < n0}});
    }
    if (c.format == "csv") {
        std::ostringstream os;
        os << provenance("drttp.wl/1", c) << " n0=" << n0 << "\n";
        os << "m,discriminant,branch,kind,lambda0,lambda1,mu,epsilon\n";
        for (const auto& o : j["orders"])
            for (const char* b : {"t_minus", "plus", "minus"}) {
                const auto& l = o[b];
                os << o["m"].get<int>() << "," << num(o["discriminant"].get<double>()) << "," << b << ","
                   << l["kind"].get<std::string>() << "," << num(l["lambda0"].get<double>()) << ","
                   << num(l["lambda1"].get<double>()) << "," << num(l["mu"].get<double>()) << ","
                   << num(l["epsilon"].get<double>()) << "\n";
            }
        emit(c, os.str());
    } else {
        emit(c, dump(j));
    }
    (void)ri;
    return kOk;
}

// ---------------------------------------------------------------- census

int cmd_census(const Config& c) {
    const RayIdentifiers ri = make_rays(c.lambda_o, c.mu_o);
    const TangentPoly tp = make_tangent(c.zt);
    const Census cs = nodeless_census(ri, tp);
    const int mmax = c.n.empty() ? cs.n0 + 2 : std::stoi(c.n);
    json j;
    j["schema"] = "drttp.census/1";
    j["params"] = params_json(c, tp);
    j["n0"] = cs.n0;
    j["has_bound_states"] = cs.has_bound_states;
    j["lambda1_c0"] = cs.lambda1_c0;
    j["plus_m"] = cs.plus_m;
    j["minus_m"] = cs.minus_m;
    j["m_a"] = cs.m_a;
    j["m_b"] = cs.m_b;
    j["m_b_constraint"] = cs.m_b_constraint;
    j["has_mu_x"] = cs.has_mu_x;
    j["mu_x0"] = cs.mu_x0;
    j["hyperbola_residual"] = cs.hyperbola_residual;
    j["t_minus_nodeless"] = json::array();
    if (ri.lambda_o == 0.0)
        for (int m = 0; m <= mmax; ++m)
            j["t_minus_nodeless"].push_back({{"m", m}, {"predicted", census_predicts_nodeless(m, cs)}});
    if (c.format == "csv") {
        std::ostringstream os;
        os << provenance("drttp.census/1", c) << "\n";
        os << "key,value\n";
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.key() == "schema" || it.key() == "params" || it.key() == "t_minus_nodeless") continue;
            const auto& v = it.value();
            os << it.key() << "," << (v.is_number_float() ? num(v.get<double>()) : v.dump()) << "\n";
        }
        for (const auto& e : j["t_minus_nodeless"])
            os << "t_minus_nodeless_m" << e["m"].get<int>() << "," << e["predicted"].dump() << "\n";
        emit(c, os.str());
    } else {
        emit(c, dump(j));
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Closed-form spectra, Darboux partners and numerical cross-checks for double-root tangent-polynomial potentials"};
    app.require_subcommand(1, 1);
    app.set_config("--config", "", "flat key = value configuration file; command-line flags override it");
    app.allow_config_extras(CLI::config_extras_mode::error);
    Config c;
    app.add_option("--lambda-o", c.lambda_o, "ray identifier lambda_o >= 0");
    app.add_option("--mu-o", c.mu_o, "ray identifier mu_o > 0");
    app.add_option("--zt", c.zt, "double root z_T of the tangent polynomial, outside [0,1]");
    app.add_option("--n", c.n, "level selection: list '0,2', range '0-3' (tabulate); highest order (wl, census)");
    app.add_option("--x-min", c.x_min, "tabulation grid start");
    app.add_option("--x-max", c.x_max, "tabulation grid end");
    app.add_option("--points", c.points, "tabulation grid size");
    app.add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", c.out, "output file (default: standard output)");
    app.add_option("--tol", c.tol,
                   "tolerance: cubic residual (spectrum), oracle agreement (partner, verify)");
    app.add_option("--partner", c.partner, "factorization functions: 'c0', 'c0,d0' or 'd0,c0-pair'");
    app.add_option("--only", c.only, "verification groups to run (repeatable or comma separated)");
    app.add_option("--oracle-h", c.h, "oracle grid step");
    app.add_flag("--inject-fault", c.inject_fault, "test only: perturb the leading cubic coefficient by 1e-3");

    struct Sub {
        const char* name;
        const char* help;
        int (*fn)(const Config&);
    };
    const Sub subs[] = {{"spectrum", "bound-state spectrum", cmd_spectrum},
                        {"tabulate", "tabulate potential, eigenfunctions and partner potentials", cmd_tabulate},
                        {"partner", "describe Darboux partners and their predicted spectra", cmd_partner},
                        {"verify", "run the property and cross-validation suite", cmd_verify},
                        {"wl", "closed-form asymptotically levelled spectrum", cmd_wl},
                        {"census", "nodeless census of the t- sequence", cmd_census}};
    for (const Sub& s : subs) app.add_subcommand(s.name, s.help)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int r = app.exit(e);
        return r == 0 ? kOk : kBadParams;
    }
    try {
        for (const Sub& s : subs)
            if (app.got_subcommand(s.name)) return s.fn(c);
    } catch (const RejectedConstruction& e) {
        std::cerr << e.what() << "\n";
        return kRejected;
    } catch (const ParamError& e) {
        std::cerr << e.what() << "\n";
        return kBadParams;
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kVerifyFail;
    } catch (const std::invalid_argument& e) {
        std::cerr << "bad parameter: " << e.what() << "\n";
        return kBadParams;
    } catch (const std::out_of_range& e) {
        std::cerr << "bad parameter: " << e.what() << "\n";
        return kBadParams;
    }
    return kBadParams;
}
