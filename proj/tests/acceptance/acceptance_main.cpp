#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "drttp/verify.hpp"

using namespace drttp;

namespace {

struct Criterion {
    int id;
    const char* title;
    std::vector<std::string> groups;
};

}  // namespace

int main() {
    // Tolerances are pinned per check in drttp/verify.hpp (namespace tolerance).
    const std::vector<Criterion> criteria = {
        {1, "asymptotically levelled closed-form spectrum", {"wl"}},
        {2, "oracle agreement grid", {"oracle"}},
        {3, "cross-cubic consistency and discriminant signs", {"cubics"}},
        {4, "eigenfunction suite", {"eigen"}},
        {5, "SUSY spectral surgery", {"susy"}},
        {6, "Heun residuals and exponent sum", {"heun"}},
        {7, "B2 factorization and zero condition", {"appendix-a"}},
        {8, "nodelessness predicates vs brute force", {"appendix-b"}},
        {9, "map and gauge identities", {"map"}},
        {10, "structure constants", {"constants"}},
        {0, "supplementary: nodeless census vs brute force", {"census"}},
    };
    int failed = 0;
    const auto t_all = std::chrono::steady_clock::now();
    for (const Criterion& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        VerifyOptions opt;
        opt.only = c.groups;
        const VerifyReport rep = run_verify(opt);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        // worst failing check if any, otherwise the check closest to its tolerance
        const CheckResult* worst = nullptr;
        double worst_ratio = -1.0;
        for (const CheckResult& r : rep.checks) {
            if (r.informational) continue;
            const double ratio = !r.pass ? INFINITY : (r.tol > 0.0 ? r.measured / r.tol : 0.0);
            if (!worst || ratio > worst_ratio) worst = &r, worst_ratio = ratio;
        }
        const bool pass = rep.passed() && !rep.checks.empty();
        if (!pass) ++failed;
        if (c.id > 0)
            std::printf("CRITERION %d (%s): %s", c.id, c.title, pass ? "PASS" : "FAIL");
        else
            std::printf("SUPPLEMENTARY (%s): %s", c.title + 15, pass ? "PASS" : "FAIL");
        if (worst)
            std::printf("  [worst %s: measured %.3g vs tol %.3g]", worst->name.c_str(), worst->measured, worst->tol);
        std::printf("  (%zu checks, %d failed, %.1f s)\n", rep.checks.size(), rep.failures(), secs);
        for (const CheckResult& r : rep.checks) {
            if (r.pass && !r.informational) continue;
            std::printf("    %s %s/%s measured=%.6g tol=%.3g%s%s\n", r.informational ? "INFO" : "FAIL",
                        r.group.c_str(), r.name.c_str(), r.measured, r.tol, r.note.empty() ? "" : " : ",
                        r.note.c_str());
        }
        std::fflush(stdout);
    }
    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_all).count();
    std::printf("%d criteria failed, total %.1f s\n", failed, total);
    return failed == 0 ? 0 : 1;
}
