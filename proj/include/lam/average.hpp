#ifndef LAM_AVERAGE_HPP
#define LAM_AVERAGE_HPP

#include "lam/diffeo.hpp"
#include "lam/ensemble.hpp"
#include "lam/manifold.hpp"

#include <map>
#include <string>
#include <vector>

namespace lam {

/** Empirical vs closed-form averaged-Lagrangian values per order in eps.
 *  Lbar_closed is assembled exactly as L0 + eps^2/2 * L2_closed. */
struct LagrangianReport {
    double L0 = 0.0;
    double L1 = 0.0;
    double L2_empirical = 0.0;
    double L2_closed = 0.0;
    double Lbar_empirical = 0.0;
    double Lbar_closed = 0.0;
    double epsilon = 0.0;
    int ensemble_size = 0;
    std::map<std::string, double> identity_residuals;
};

/** Perturbed realization of a mean path: maps exp(eta(t), w(t), eps) at
 *  every sample and Eulerian velocities at interior samples by centered
 *  time differences composed with the inverse map. */
struct Realization {
    std::vector<Diffeo> maps;
    std::vector<VectorField> velocities;  // size path.size()-2, interior times
};
Realization realization_flow(const FlowPath& path, const std::vector<VectorField>& fluctuation,
                             double eps);

/** Velocity samples of one member over the eps ladder {0, +-e, +-e/2}. */
struct EpsilonSamples {
    double eps = 0.0;
    VectorField center, plus, minus, plus_half, minus_half;
};

/** First and second eps-derivatives at eps = 0. Centered second-order
 *  differences at +-eps; with richardson also +-eps/2 enters and the
 *  leading eps^2 error cancels. Exact for quadratic dependence. */
struct ExpansionCoefficients {
    VectorField first, second;
};
ExpansionCoefficients expansion_coefficients(const EpsilonSamples& samples, bool richardson = true);

/** Closed-form second-order coefficient
 *      u'' = -R(u,w)w + cov_{cov_w w} u - cov_w cov_w u,
 *  valid for Lie-transported fluctuations. */
VectorField u_second_analytic(const VectorField& u, const VectorField& w);

enum class AveragingMode {
    FiniteEps,       // realize members at the eps ladder and difference
    AnalyticSecond   // use u' = 0 and the closed-form u''
};

/** Assembles the averaged Lagrangian to second order. FiniteEps requires
 *  a mean-flow path with an odd number (>= 3) of equispaced samples; the
 *  report is evaluated at the center time. Members are processed in
 *  stored order so reported values are reproducible bit for bit. */
LagrangianReport averaged_lagrangian_empirical(const VectorField& u,
                                               const FluctuationEnsemble& ensemble,
                                               double eps, AveragingMode mode,
                                               const FlowPath* path = nullptr);

/** Closed form L0 - eps^2/2 Integral g(LaplaceRicci u, u). */
double averaged_lagrangian_closed(const VectorField& u, double eps);

/** Ensemble average of g(R(u,w)w, u) against the Ricci closed form. */
struct CurvatureIdentity {
    ScalarField field;
    double residual;  // sup |field - Ric(u,u)|
};
CurvatureIdentity identity_curvature_term(const VectorField& u, const FluctuationEnsemble& ensemble);

/** Ensemble average of cov_w cov_w u - cov_{cov_w w} u against the rough
 *  Laplacian. */
struct LaplacianIdentity {
    VectorField field;
    double residual;  // sup norm of field - rough Laplacian
};
LaplacianIdentity identity_laplacian_term(const VectorField& u, const FluctuationEnsemble& ensemble);

/** Per-member pressure contribution I_b = Integral g([u, grad phi_b], u)
 *  with phi_b = -poisson(div(cov_{w_b} w_b)), plus the integrated-by-parts
 *  dual evaluation of the same number. The weighted mean vanishes for
 *  isotropic divergence-free ensembles. */
struct PressureTermResult {
    std::vector<double> per_member;
    std::vector<double> per_member_dual;
    double mean = 0.0;
    double max_formula_gap = 0.0;
};
PressureTermResult pressure_term_contribution(const VectorField& u,
                                              const FluctuationEnsemble& ensemble);

} // namespace lam

#endif
