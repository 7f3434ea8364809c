#ifndef LAM_SOLVERS_HPP
#define LAM_SOLVERS_HPP

#include "lam/manifold.hpp"

#include <array>
#include <functional>
#include <vector>

namespace lam {

struct SolveOptions {
    double T = 1.0;
    double dt = 1e-3;
    int store_every = 1;          // snapshot stride (diagnostics are per step)
    double blowup_factor = 20.0;  // abort when sup|u| grows past this factor
    double cfl_limit = 2.8;       // bound on dt * sup|u| * k_max
    bool spectral_filter = false; // exponential high-mode filter (peakon runs)
};

/** Snapshot of the momentum-form state; m = (1 - eps^2 Laplace) u holds
 *  to round-off after every accepted step. */
struct SolverState {
    double t = 0.0;
    VectorField u;
    VectorField m;
    double eps = 0.0;
};

struct Diagnostics {
    std::vector<double> time;
    std::vector<double> energy;                   // 1/2 Integral g(m,u)
    std::vector<std::array<double, 2>> momentum;  // Integral m_c (unused comps zero)
    std::vector<double> divergence_sup;
    std::vector<double> tail_fraction;
};

struct Trajectory {
    std::vector<SolverState> states;
    Diagnostics diagnostics;
    double eps = 0.0;
    double dt = 0.0;
};

/** Camassa-Holm on S1 in conservative momentum form
 *      m_t = -d/dx (u m + u^2/2 - eps^2 u_x^2 / 2),  m = (1 - eps^2 dxx) u,
 *  RK4 in time, spectral in space, quadratic products dealiased. */
Trajectory solve_camassa_holm(const VectorField& u0, double eps, const SolveOptions& opts);

/** EPDiff on T2: m_t + cov_u m + (grad u)^T m + m div u = 0. */
Trajectory solve_epdiff(const VectorField& u0, double eps, const SolveOptions& opts);

/** Euler-alpha on T2: the EPDiff tendency without the m div u term,
 *  Leray-projected (eps = 0 reduces to incompressible Euler). */
Trajectory solve_euler_alpha(const VectorField& u0, double eps, const SolveOptions& opts);

using TestFieldFn = std::function<VectorField(double)>;

/** First/second-order behavior of the action under the induced variation
 *  delta u = wdot + [u, w] for a test field w vanishing at the endpoints:
 *  the fitted log-log slope of |S(u + h delta u) - S(u)| against h is 2
 *  on solution trajectories and 1 on non-solutions. */
struct StationarityReport {
    std::vector<double> perturbations;
    std::vector<double> action_changes;
    double slope = 0.0;
    double base_action = 0.0;
};
StationarityReport action_stationarity_check(const Trajectory& trajectory,
                                             const TestFieldFn& w, const TestFieldFn& wdot,
                                             const std::vector<double>& ladder);

} // namespace lam

#endif
