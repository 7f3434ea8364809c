#ifndef LAM_EXPERIMENTS_HPP
#define LAM_EXPERIMENTS_HPP

#include "lam/manifold.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace lam {

/** Named initial conditions exposed by the experiment runner. */
namespace presets {

VectorField zero(ManifoldPtr m);
/** T2 parallel shear (sin y, 0). */
VectorField shear(ManifoldPtr m);
/** T2 cellular flow (sin x cos y, -cos x sin y); steady for Euler-alpha. */
VectorField taylor_green(ManifoldPtr m);
/** S1 periodic peaked traveling wave of amplitude (= speed) c. */
VectorField peakon(ManifoldPtr m, double c, double eps);
/** S1 wave with one-signed momentum, 2 + sin x; stays smooth. */
VectorField smooth(ManifoldPtr m);
/** Low-wavenumber random field, deterministic in the seed. */
VectorField random_field(ManifoldPtr m, std::uint64_t seed, bool divergence_free);
/** S2 rotation field a x p around coordinate axis 0, 1, or 2. */
VectorField rotation(ManifoldPtr m, int axis);
/** S2 random tangent field, polynomial of low degree in the point. */
VectorField random_tangent(ManifoldPtr m, std::uint64_t seed);

} // namespace presets

struct ExperimentConfig {
    std::string kind;
    std::string manifold_kind = "T2";
    int n = 128;            // S1 nodes
    int nx = 64, ny = 64;   // T2 grid
    int nlat = 32, nlon = 64;
    double epsilon = 1e-2;
    int ensemble_size = 64;
    std::uint64_t seed = 1;
    double horizon = 1.0;
    double dt = 1e-3;
    std::string preset = "shear";
    std::string solver = "ch";
    std::string output = "out";
    std::vector<std::string> checks;  // optional filter by check name

    static ExperimentConfig from_json(const nlohmann::json& j);
    static ExperimentConfig from_file(const std::filesystem::path& file);
    nlohmann::ordered_json to_json() const;

    ManifoldPtr make_manifold() const;
};

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    std::string comparator = "<=";  // "<=" or "in" (for slope windows, bound = half-width)
    bool pass = false;
    double seconds = 0.0;
};

struct RunReport {
    std::string experiment;
    std::vector<CheckResult> checks;
    bool pass = true;

    nlohmann::ordered_json to_json() const;
};

/** Runs the configured experiment, writes report.json and the experiment's
 *  CSV tables under out_dir, and returns the report. */
RunReport run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/** Human-readable catalogue of kinds, presets and the config schema,
 *  including a sample config that parses back. */
std::string list_experiments();

} // namespace lam

#endif
