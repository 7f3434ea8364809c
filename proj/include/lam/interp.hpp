#ifndef LAM_INTERP_HPP
#define LAM_INTERP_HPP

#include <span>
#include <vector>

namespace lam {

/** Interpolating periodic cubic spline on the uniform grid x_i = i*(P/n),
 *  period P. Represented in the cubic B-spline basis; coefficients come
 *  from a cyclic tridiagonal solve so the spline matches the data at the
 *  nodes exactly. Evaluation wraps periodically. */
class PeriodicSpline1D {
public:
    PeriodicSpline1D() = default;
    PeriodicSpline1D(std::span<const double> samples, double period);

    double operator()(double x) const;
    double derivative(double x) const;
    int size() const { return n_; }

private:
    int n_ = 0;
    double period_ = 0.0, h_ = 0.0;
    std::vector<double> coef_;
};

/** Tensor-product periodic cubic spline on an nx-by-ny uniform grid over
 *  [0,Px) x [0,Py). Data layout: value(ix, iy) = samples[iy*nx + ix]. */
class PeriodicSpline2D {
public:
    PeriodicSpline2D() = default;
    PeriodicSpline2D(std::span<const double> samples, int nx, int ny,
                     double period_x, double period_y);

    double operator()(double x, double y) const;

private:
    int nx_ = 0, ny_ = 0;
    double px_ = 0.0, py_ = 0.0, hx_ = 0.0, hy_ = 0.0;
    std::vector<double> coef_;
};

/** Solves the cyclic tridiagonal system with constant bands
 *  (sub, diag, sup) wrapping at the corners, via Sherman-Morrison. */
void solve_cyclic_tridiagonal(double sub, double diag, double sup,
                              std::span<const double> rhs, std::span<double> out);

} // namespace lam

#endif
