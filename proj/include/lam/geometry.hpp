#ifndef LAM_GEOMETRY_HPP
#define LAM_GEOMETRY_HPP

#include "lam/manifold.hpp"

namespace lam {
namespace geometry {

/** Pointwise metric pairing g(u,v). The musical isomorphisms are identity
 *  maps in all three charts (flat identity metric / ambient restriction),
 *  so vector fields double as 1-forms throughout. */
ScalarField metric_inner(const VectorField& u, const VectorField& v);

/** Quadrature of f against the volume form. Exact for trigonometric
 *  polynomials below Nyquist on S1/T2, spectrally accurate on S2. */
double integrate(const ScalarField& f);
double inner_product(const VectorField& u, const VectorField& v);

/** Levi-Civita covariant derivative along `direction`. Flat charts use
 *  spectral componentwise differentiation (products dealiased by the 2/3
 *  rule); the sphere uses the Gauss formula: ambient surface derivative
 *  by fourth-order differences, then tangential projection. */
VectorField covariant_derivative(const VectorField& direction, const VectorField& field);

/** [u,w] = cov_u w - cov_w u. */
VectorField lie_bracket(const VectorField& u, const VectorField& w);

ScalarField divergence(const VectorField& u);
VectorField gradient(const ScalarField& f);

/** Mean-zero phi with Laplace phi = f. S1/T2 only; f must integrate to
 *  zero within 1e-8. */
ScalarField poisson_solve(const ScalarField& f);

/** Full covariant gradient as a (1,1)-tensor: (grad u) v = cov_v u. */
TensorField11 covariant_gradient(const VectorField& u);

/** Curvature tensor R(u,v)w: zero on flat charts; the unit sphere uses the
 *  constant-curvature closed form g(v,w)u - g(u,w)v. */
VectorField riemann(const VectorField& u, const VectorField& v, const VectorField& w);

/** Ricci pairing: zero on flat charts, g(u,v) on the unit sphere. */
ScalarField ricci(const VectorField& u, const VectorField& v);

enum class LaplacianKind { Rough, Hodge, Ricci };

/** Rough = trace of the second covariant derivative; Hodge = Rough - Ric;
 *  Ricci = Rough + Ric. All three coincide on flat charts. */
VectorField laplacian(const VectorField& u, LaplacianKind kind);

struct DeformationResult {
    TensorField11 tensor;       // symmetrized covariant gradient
    ScalarField norm_squared;   // pointwise g(Def u, Def u)
};
DeformationResult deformation(const VectorField& u);

/** Solves (1 - eps^2 LaplaceRicci) u = m spectrally. S1/T2 only. */
VectorField helmholtz_solve(const VectorField& m, double eps);
/** Forward operator (1 - eps^2 LaplaceRicci) u. S1/T2 only. */
VectorField helmholtz_apply(const VectorField& u, double eps);

/** u minus the gradient part of its Hodge decomposition. S1/T2 only;
 *  constants (k=0 modes) are preserved. */
VectorField leray_project(const VectorField& u);

} // namespace geometry
} // namespace lam

#endif
