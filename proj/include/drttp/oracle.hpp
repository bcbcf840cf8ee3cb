#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace drttp {

struct OracleOptions {
    double x_min = -40.0;
    double x_max = 40.0;
    double h = 5e-4;
    int max_levels = 64;
    bool auto_widen = true;
    double widen_cap = 4000.0;      // hard cap on |x|
    double boundary_tol = 1e-10;    // |psi(end)| / max|psi|
    double margin = 1e-8;           // threshold = min asymptote - margin
    double asym_left = std::numeric_limits<double>::quiet_NaN();
    double asym_right = std::numeric_limits<double>::quiet_NaN();
    bool keep_vectors = false;
};

struct NumericSpectrum {
    std::vector<double> eigenvalues;    // Richardson-extrapolated
    std::vector<double> raw_h;          // at step h
    std::vector<double> convergence;    // |E(h/2) - E(h)| / 3
    std::vector<int> node_counts;
    std::vector<std::vector<double>> eigenvectors;  // samples on the h grid, interior points
    double x_min = 0.0, x_max = 0.0, h = 0.0;
    long n_points = 0;
    double threshold = 0.0;
};

NumericSpectrum solve_schrodinger(const std::function<double(double)>& V, const OracleOptions& opt = {});

struct CompareReport {
    bool pass = false;
    bool count_match = false;
    std::vector<double> abs_err, rel_err;
    double max_abs = 0.0, max_rel = 0.0;
    bool nodes_match = true;
    std::string message;
};

CompareReport compare_spectra(const std::vector<double>& analytic, const NumericSpectrum& num, double tol,
                              bool relative = false);

// Elements of a without a partner in b within tol, followed by those of b without a partner in a.
std::vector<double> symmetric_difference(const std::vector<double>& a, const std::vector<double>& b, double tol);
bool subset_within(const std::vector<double>& sub, const std::vector<double>& set, double tol);

// max over interior points of |-psi'' + (V - E) psi| / max|psi| on the grid x0 + i h.
double residual_check(const std::vector<double>& psi, double x0, double h, double E,
                      const std::function<double(double)>& V, int order = 4);

}  // namespace drttp
