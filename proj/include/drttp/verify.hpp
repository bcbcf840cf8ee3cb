#pragma once

#include <string>
#include <vector>

namespace drttp {

namespace tolerance {
constexpr double wl_closed_form = 1e-10;
constexpr double wl_oracle_abs = 1e-6;
constexpr double oracle_rel = 1e-6;
constexpr double cubic_residual = 1e-8;
constexpr double gram = 1e-7;
constexpr double schrodinger = 1e-7;
constexpr double two_representation = 1e-10;
constexpr double spectral_window = 1e-5;
constexpr double heun_residual = 1e-9;
constexpr double heun_exponent_sum = 1e-12;
constexpr double b2_factor = 1e-10;
constexpr double b2_zero = 1e-12;
constexpr double map_tangent = 1e-10;
constexpr double map_gauge = 1e-10;
constexpr double map_schwarzian = 1e-6;
constexpr double map_fast_path = 1e-12;
constexpr double constants_consistency = 1e-8;
}  // namespace tolerance

struct CheckResult {
    std::string group;
    std::string name;
    double measured = 0.0;  // worst case over the check's sample
    double tol = 0.0;
    bool pass = false;
    bool informational = false;  // reported, never counted as a failure
    std::string note;
};

struct VerifyOptions {
    std::vector<std::string> only;  // empty: all groups
    bool inject_fault = false;      // perturbs the leading cubic coefficient by 1e-3
    double oracle_h = 5e-4;
    double oracle_tol = tolerance::oracle_rel;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    int failures() const;
    bool passed() const { return failures() == 0; }
};

const std::vector<std::string>& verify_groups();
VerifyReport run_verify(const VerifyOptions& opt = {});

}  // namespace drttp
