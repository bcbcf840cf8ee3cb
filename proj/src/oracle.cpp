#include "drttp/oracle.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <string>

#include "drttp/errors.hpp"

namespace drttp {

namespace {

struct TriEig {
    std::vector<double> w;
    std::vector<double> vecs;  // column-major n x m
    long n = 0;
};

TriEig tridiag_below(const std::vector<double>& vs, double h, double vu, bool vectors, int max_levels) {
    const lapack_int n = static_cast<lapack_int>(vs.size());
    std::vector<double> d(n), e(n > 0 ? n - 1 : 0, -1.0 / (h * h));
    for (lapack_int i = 0; i < n; ++i) d[i] = 2.0 / (h * h) + vs[i];
    const double vl = *std::min_element(vs.begin(), vs.end()) - 1.0;
    TriEig out;
    out.n = n;
    if (vu <= vl) return out;
    lapack_int m = 0, nsplit = 0;
    std::vector<double> w(n);
    std::vector<lapack_int> iblock(n), isplit(n);
    const lapack_int info = LAPACKE_dstebz('V', 'B', n, vl, vu, 0, 0, 2.0 * DBL_MIN, d.data(), e.data(), &m, &nsplit,
                                           w.data(), iblock.data(), isplit.data());
    if (info != 0) throw NumericError("dstebz failed");
    std::vector<lapack_int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](lapack_int a, lapack_int b) { return w[a] < w[b]; });
    const lapack_int keep = std::min<lapack_int>(m, max_levels);
    out.w.resize(keep);
    for (lapack_int i = 0; i < keep; ++i) out.w[i] = w[order[i]];
    if (vectors && keep > 0) {
        // dstein wants the eigenvalues grouped by split block, ascending inside each block
        std::vector<lapack_int> by_block(order.begin(), order.begin() + keep);
        std::sort(by_block.begin(), by_block.end(), [&](lapack_int a, lapack_int b) {
            return iblock[a] != iblock[b] ? iblock[a] < iblock[b] : w[a] < w[b];
        });
        // some LAPACKE builds NaN-check n entries of w rather than m, so the buffers are padded to n
        std::vector<double> ws(n, 0.0);
        std::vector<lapack_int> ib(n, 1), ifail(n);
        for (lapack_int i = 0; i < keep; ++i) ws[i] = w[by_block[i]], ib[i] = iblock[by_block[i]];
        std::vector<double> z(static_cast<size_t>(n) * keep);
        const lapack_int inf2 = LAPACKE_dstein(LAPACK_COL_MAJOR, n, d.data(), e.data(), keep, ws.data(), ib.data(),
                                               isplit.data(), z.data(), n, ifail.data());
        if (inf2 < 0) throw NumericError("dstein: invalid argument " + std::to_string(-inf2));
        out.vecs.assign(static_cast<size_t>(n) * keep, 0.0);
        for (lapack_int i = 0; i < keep; ++i) {
            const lapack_int rank = std::find(order.begin(), order.begin() + keep, by_block[i]) - order.begin();
            std::copy(z.begin() + static_cast<size_t>(i) * n, z.begin() + static_cast<size_t>(i + 1) * n,
                      out.vecs.begin() + static_cast<size_t>(rank) * n);
        }
    }
    return out;
}

int sign_changes(const double* v, long n) {
    double mx = 0.0;
    for (long i = 0; i < n; ++i) mx = std::max(mx, std::fabs(v[i]));
    int c = 0;
    double prev = 0.0;
    for (long i = 0; i < n; ++i) {
        if (std::fabs(v[i]) <= 1e-9 * mx) continue;
        if (prev != 0.0 && (v[i] > 0) != (prev > 0)) ++c;
        prev = v[i];
    }
    return c;
}

std::vector<double> sample(const std::function<double(double)>& V, double a, double h, long n) {
    std::vector<double> vs(n);
    for (long i = 0; i < n; ++i) vs[i] = V(a + (i + 1) * h);
    return vs;
}

// Outermost points where the WKB attenuation from the well bottom reaches exp(-target).
std::pair<double, double> wkb_extent(const std::function<double(double)>& V, double x0, double E, double cap) {
    const double target = 32.0, dx = 0.05;
    std::pair<double, double> ext;
    for (int side = -1; side <= 1; side += 2) {
        double acc = 0.0, x = x0;
        while (acc < target) {
            x += side * dx;
            if (std::fabs(x) > cap) throw NumericError("potential not confining at requested tolerance");
            const double g = V(x) - E;
            if (g > 0.0) acc += std::sqrt(g) * dx;
        }
        (side < 0 ? ext.first : ext.second) = x;
    }
    return ext;
}

}  // namespace

NumericSpectrum solve_schrodinger(const std::function<double(double)>& V, const OracleOptions& opt) {
    const double vl = std::isnan(opt.asym_left) ? V(-1e4) : opt.asym_left;
    const double vr = std::isnan(opt.asym_right) ? V(1e4) : opt.asym_right;
    const double thr = std::min(vl, vr) - opt.margin;
    double a = opt.x_min, b = opt.x_max;
    if (!(b > a) || !(opt.h > 0.0)) throw ParamError("solve_schrodinger: bad domain or step");

    if (opt.auto_widen) {
        for (int it = 0; it < 16; ++it) {
            const double hc = 0.02;
            const long nc = static_cast<long>(std::llround((b - a) / hc)) - 1;
            const std::vector<double> vs = sample(V, a, hc, nc);
            const TriEig ce = tridiag_below(vs, hc, thr, false, opt.max_levels);
            if (ce.w.empty()) break;
            const long imin = std::min_element(vs.begin(), vs.end()) - vs.begin();
            const double x0 = a + (imin + 1) * hc;
            double na = a, nb = b;
            for (double E : ce.w) {
                const auto ext = wkb_extent(V, x0, E, opt.widen_cap);
                na = std::min(na, ext.first);
                nb = std::max(nb, ext.second);
            }
            if (na == a && nb == b) break;
            a = std::floor(na), b = std::ceil(nb);
        }
    }

    for (int attempt = 0;; ++attempt) {
        const double h2 = 0.5 * opt.h;
        const long n2 = static_cast<long>(std::llround((b - a) / h2)) - 1;
        const std::vector<double> v2 = sample(V, a, h2, n2);
        std::vector<double> v1;
        for (long i = 1; i < n2; i += 2) v1.push_back(v2[i]);
        const TriEig e1 = tridiag_below(v1, opt.h, thr, true, opt.max_levels);
        const TriEig e2 = tridiag_below(v2, h2, thr, false, opt.max_levels);
        const long n1 = static_cast<long>(v1.size());
        const size_t m = std::min(e1.w.size(), e2.w.size());

        bool ok = true;
        for (size_t j = 0; j < m && ok; ++j) {
            const double* col = e1.vecs.data() + j * n1;
            double mx = 0.0;
            for (long i = 0; i < n1; ++i) mx = std::max(mx, std::fabs(col[i]));
            const double edge = std::max(std::fabs(col[0]), std::fabs(col[n1 - 1]));
            if (edge > opt.boundary_tol * mx) ok = false;
        }
        if (!ok && opt.auto_widen) {
            if (attempt >= 6) throw NumericError("potential not confining at requested tolerance");
            const double w = 0.5 * (b - a);
            a -= w, b += w;
            if (std::max(std::fabs(a), std::fabs(b)) > opt.widen_cap)
                throw NumericError("potential not confining at requested tolerance");
            continue;
        }

        NumericSpectrum ns;
        ns.x_min = a, ns.x_max = b, ns.h = opt.h, ns.n_points = n1, ns.threshold = thr;
        for (size_t j = 0; j < m; ++j) {
            ns.raw_h.push_back(e1.w[j]);
            ns.eigenvalues.push_back((4.0 * e2.w[j] - e1.w[j]) / 3.0);
            ns.convergence.push_back(std::fabs(e2.w[j] - e1.w[j]) / 3.0);
            ns.node_counts.push_back(sign_changes(e1.vecs.data() + j * n1, n1));
            if (opt.keep_vectors)
                ns.eigenvectors.emplace_back(e1.vecs.begin() + j * n1, e1.vecs.begin() + (j + 1) * n1);
        }
        return ns;
    }
}

CompareReport compare_spectra(const std::vector<double>& analytic, const NumericSpectrum& num, double tol,
                              bool relative) {
    CompareReport r;
    r.count_match = analytic.size() == num.eigenvalues.size();
    const size_t m = std::min(analytic.size(), num.eigenvalues.size());
    for (size_t i = 0; i < m; ++i) {
        const double ae = std::fabs(analytic[i] - num.eigenvalues[i]);
        const double re = ae / std::max(std::fabs(analytic[i]), 1e-300);
        r.abs_err.push_back(ae);
        r.rel_err.push_back(re);
        r.max_abs = std::max(r.max_abs, ae);
        r.max_rel = std::max(r.max_rel, re);
    }
    for (size_t i = 0; i < num.node_counts.size(); ++i)
        if (num.node_counts[i] != static_cast<int>(i)) r.nodes_match = false;
    const double err = relative ? r.max_rel : r.max_abs;
    r.pass = r.count_match && err <= tol;
    if (!r.count_match)
        r.message = "count mismatch";
    else if (!r.pass)
        r.message = "level error above tolerance";
    else
        r.message = "ok";
    return r;
}

std::vector<double> symmetric_difference(const std::vector<double>& a, const std::vector<double>& b, double tol) {
    std::vector<bool> used(b.size(), false);
    std::vector<double> out, rest_a;
    for (double x : a) {
        size_t best = b.size();
        double bd = tol;
        for (size_t j = 0; j < b.size(); ++j)
            if (!used[j] && std::fabs(b[j] - x) <= bd) bd = std::fabs(b[j] - x), best = j;
        if (best == b.size())
            out.push_back(x);
        else
            used[best] = true;
    }
    for (size_t j = 0; j < b.size(); ++j)
        if (!used[j]) out.push_back(b[j]);
    return out;
}

bool subset_within(const std::vector<double>& sub, const std::vector<double>& set, double tol) {
    for (double x : sub) {
        bool f = false;
        for (double y : set) f = f || std::fabs(x - y) <= tol;
        if (!f) return false;
    }
    return true;
}

double residual_check(const std::vector<double>& psi, double x0, double h, double E,
                      const std::function<double(double)>& V, int order) {
    static const std::vector<double> c4 = {-1.0 / 12, 4.0 / 3, -5.0 / 2};
    static const std::vector<double> c6 = {1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18};
    static const std::vector<double> c8 = {-1.0 / 560, 8.0 / 315, -1.0 / 5, 8.0 / 5, -205.0 / 72};
    const std::vector<double>& c = order >= 8 ? c8 : order >= 6 ? c6 : c4;
    const long r = static_cast<long>(c.size()) - 1;
    const long n = static_cast<long>(psi.size());
    double mx = 0.0;
    for (double p : psi) mx = std::max(mx, std::fabs(p));
    if (mx == 0.0) throw ParamError("residual_check: trivial psi");
    double res = 0.0;
    for (long i = r; i < n - r; ++i) {
        double d2 = c[r] * psi[i];
        for (long k = 1; k <= r; ++k) d2 += c[r - k] * (psi[i - k] + psi[i + k]);
        d2 /= h * h;
        res = std::max(res, std::fabs(-d2 + (V(x0 + i * h) - E) * psi[i]));
    }
    return res / mx;
}

}  // namespace drttp
