#ifndef LAM_ENSEMBLE_HPP
#define LAM_ENSEMBLE_HPP

#include "lam/diffeo.hpp"
#include "lam/manifold.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lam {

/** Weighted family of fluctuation vector fields with amplitude eps.
 *  Weights sum to one and the weighted mean field is (re)centered to zero. */
struct FluctuationEnsemble {
    ManifoldPtr manifold;
    std::vector<VectorField> members;
    std::vector<double> weights;
    double amplitude = 1.0;
    std::string construction;
    std::uint64_t seed = 0;

    int size() const { return static_cast<int>(members.size()); }
    /** Throws unless weights are a probability vector and the weighted
     *  mean field vanishes (L2 norm below tol). */
    void validate(double tol = 1e-10) const;
};

/** Exactly isotropic finite ensembles: covariance equals the inverse
 *  metric pointwise with zero sampling error.
 *    S1: {+1,-1} with weight 1/2.
 *    T2: {+-sqrt2 e1, +-sqrt2 e2} with weight 1/4.
 *    S2: {+-sqrt3 L_a}, a in {x,y,z}, rotation fields L_a(p) = a x p,
 *        weight 1/6.
 */
FluctuationEnsemble deterministic_isotropic(ManifoldPtr m);

enum class PhaseSampling {
    IndependentDraws,  // i.i.d. phases: covariance error O(N^{-1/2})
    Stratified         // rotated equispaced phases: exact empirical second moments
};

struct RandomEnsembleOptions {
    bool divergence_free = false;
    PhaseSampling phase = PhaseSampling::IndependentDraws;
};

/** Random superpositions of low-wavenumber modes with random phases,
 *  normalized so the generating distribution has covariance equal to the
 *  inverse metric pointwise. Same seed gives a bit-identical ensemble;
 *  member k uses subseed seed + k. The ensemble is recentered after
 *  drawing. Divergence-free variant (transverse modes) on S1/T2 only. */
FluctuationEnsemble random_isotropic(ManifoldPtr m, int count, std::uint64_t seed,
                                     const RandomEnsembleOptions& opts = {});

/** Pointwise second moment sum_b p_b w_b (x) w_b. */
TensorField11 covariance(const FluctuationEnsemble& ensemble);

/** Lie transport of w0 by the mean flow: w(t) is the pushforward of w0
 *  by path.maps[t], the exact solution of wdot + [u, w] = 0. */
std::vector<VectorField> taylor_transport(const VectorField& w0, const FlowPath& path);

} // namespace lam

#endif
