// Acceptance suite: runs every committed acceptance config through the
// experiment runner and prints one pass/fail line per criterion. Exit
// status is the number of failed criteria.

#include "lam/experiments.hpp"

#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#ifndef LAM_SOURCE_DIR
#define LAM_SOURCE_DIR "."
#endif

namespace {

struct Criterion {
    std::string label;
    std::vector<std::string> configs;
};

const std::vector<Criterion> kCriteria = {
    {"01 Weitzenboeck identity on S2 (random trigonometric fields)", {"c01_weitzenboeck.json"}},
    {"02 Green formula on the T2 shear (both sides 2 pi^2)", {"c02_green_formula.json"}},
    {"03 Killing-field Laplacians on S2 (rough/Hodge/Ricci)", {"c03_killing_laplacians.json"}},
    {"04 isotropy identities: deterministic exactness and MC slope",
     {"c04_isotropy_t2.json", "c04_isotropy_s2.json"}},
    {"05 second-order expansion matches the closed form (slope 2)", {"c05_expansion.json"}},
    {"06 averaged Lagrangian on the shear benchmark", {"c06_average_lagrangian.json"}},
    {"07 deformation-norm form equals the closed Lagrangian", {"c07_h1_equivalence.json"}},
    {"08 pressure-term mean vanishes (dual-formula agreement)", {"c08_pressure_term.json"}},
    {"09 Karcher mean: three shifts and volume-constrained variant", {"c09_karcher_mean.json"}},
    {"10 Camassa-Holm: peakon shape and smooth-data energy",
     {"c10_peakon.json", "c10_smooth_energy.json"}},
    {"11 EPDiff reduction and Euler-alpha steady states / energy",
     {"c11_epdiff_reduction.json", "c11_alpha_shear.json", "c11_alpha_taylor_green.json",
      "c11_alpha_energy.json"}},
    {"12 action stationarity: slope 2 on solutions, 1 on the control",
     {"c12_action_stationarity.json"}},
};

} // namespace

int main() {
    const std::filesystem::path config_dir =
        std::filesystem::path(LAM_SOURCE_DIR) / "configs" / "acceptance";
    const std::filesystem::path out_root = "acceptance_out";

    int failures = 0;
    for (const Criterion& crit : kCriteria) {
        bool pass = true;
        std::string detail;
        for (const std::string& name : crit.configs) {
            try {
                lam::ExperimentConfig cfg = lam::ExperimentConfig::from_file(config_dir / name);
                lam::RunReport rep = lam::run_experiment(cfg, out_root / cfg.output);
                for (const lam::CheckResult& c : rep.checks)
                    if (!c.pass) {
                        pass = false;
                        char buf[160];
                        std::snprintf(buf, sizeof(buf), " [%s: %s measured=%.5g bound=%.5g]",
                                      name.c_str(), c.name.c_str(), c.measured, c.bound);
                        detail += buf;
                    }
            } catch (const std::exception& e) {
                pass = false;
                detail += std::string(" [") + name + ": " + e.what() + "]";
            }
        }
        std::printf("[%s] criterion %s%s\n", pass ? "PASS" : "FAIL", crit.label.c_str(),
                    detail.c_str());
        std::fflush(stdout);
        if (!pass) failures++;
    }
    std::printf("%d/%zu acceptance criteria passed\n", static_cast<int>(kCriteria.size()) - failures,
                kCriteria.size());
    return failures;
}
