#ifndef LAM_QUADRATURE_HPP
#define LAM_QUADRATURE_HPP

#include <span>
#include <vector>

namespace lam {

/** Gauss-Legendre nodes and weights on [-1,1], ascending nodes.
 *  Newton iteration on the Legendre recurrence; accurate to ~1e-15. */
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/** Finite-difference weights for the m-th derivative at x0 on an
 *  arbitrary stencil (Fornberg's recurrence). Returns weights[i] such
 *  that f^(m)(x0) ~= sum_i weights[i] * f(x[i]). */
std::vector<double> fd_weights(double x0, std::span<const double> x, int order);

} // namespace lam

#endif
