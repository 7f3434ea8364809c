#ifndef LAM_IO_HPP
#define LAM_IO_HPP

#include "lam/average.hpp"
#include "lam/diffeo.hpp"
#include "lam/ensemble.hpp"
#include "lam/manifold.hpp"
#include "lam/solvers.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

namespace lam {
namespace io {

/** All numeric output uses "%.17g" so artifacts are byte-stable across runs. */
std::string format_double(double x);

// Field CSV: header "index,c0[,c1[,c2]]", one node per row.
void write_scalar_csv(const std::filesystem::path& file, const ScalarField& f);
void write_vector_csv(const std::filesystem::path& file, const VectorField& f);
VectorField read_vector_csv(const std::filesystem::path& file, ManifoldPtr m);

// Diffeo CSV: header "index,d0[,d1]" with displacement components.
void write_diffeo_csv(const std::filesystem::path& file, const Diffeo& d);
Diffeo read_diffeo_csv(const std::filesystem::path& file, ManifoldPtr m);

// Ensemble directory: member_###.csv plus manifest.json
// (weights, seed, amplitude, construction tag).
void write_ensemble(const std::filesystem::path& dir, const FluctuationEnsemble& e);
FluctuationEnsemble read_ensemble(const std::filesystem::path& dir, ManifoldPtr m);

nlohmann::ordered_json lagrangian_report_json(const LagrangianReport& rep);

// Diagnostics CSV: t, E, mom_x, mom_y, div_sup, tail.
void write_diagnostics_csv(const std::filesystem::path& file, const Trajectory& traj);
// Snapshot CSV: t, node, u components, m components.
void write_states_csv(const std::filesystem::path& file, const Trajectory& traj);

} // namespace io
} // namespace lam

#endif
