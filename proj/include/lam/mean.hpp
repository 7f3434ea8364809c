#ifndef LAM_MEAN_HPP
#define LAM_MEAN_HPP

#include "lam/diffeo.hpp"

#include <vector>

namespace lam {

struct KarcherOptions {
    double step = 1.0;       // initial tau; halved when the objective increases
    double tol = 1e-10;      // L2 residual of the mean log (its solenoidal part
                             // in the volume-constrained variant)
    int max_iterations = 200;
};

struct MeanResult {
    Diffeo mean;
    std::vector<VectorField> fluctuation_logs;  // w_b with exp(mean, w_b, 1) = member_b
    double residual = 0.0;
    std::vector<double> residual_history;
    int iterations = 0;
    bool converged = false;
    ScalarField potential;  // psi with grad psi = mean log (constrained variant)
};

/** Riemannian center of mass for the material L2 metric: fixed-point
 *  iteration eta <- exp(eta, tau <log(eta, eta_b)>, 1) starting from the
 *  medoid. The weighted mean of squared distances is non-increasing
 *  across accepted steps. */
MeanResult karcher_mean(const std::vector<Diffeo>& members,
                        const std::vector<double>& weights,
                        const KarcherOptions& opts = {});

/** Volume-constrained variant on T2: the update velocity is projected
 *  onto its divergence-free part before each exponential step, so the
 *  iterate stays volume-preserving and the converged mean log is a pure
 *  gradient. Members must be volume-preserving within 1e-6. */
MeanResult karcher_mean_volume_constrained(const std::vector<Diffeo>& members,
                                           const std::vector<double>& weights,
                                           const KarcherOptions& opts = {});

} // namespace lam

#endif
