#include "lam/interp.hpp"

#include <cmath>
#include <stdexcept>

namespace lam {

void solve_cyclic_tridiagonal(double sub, double diag, double sup,
                              std::span<const double> rhs, std::span<double> out) {
    const int n = static_cast<int>(rhs.size());
    if (n < 3) throw std::invalid_argument("cyclic tridiagonal: need n >= 3");

    // Thomas solve for A y = rhs with modified corners, then a rank-one
    // correction for the wrap entries (Sherman-Morrison).
    const double gamma = -diag;
    std::vector<double> d(n, diag);
    d[0] = diag - gamma;
    d[n - 1] = diag - sub * sup / gamma;

    auto thomas = [&](std::span<const double> b, std::span<double> y) {
        std::vector<double> cp(n);
        cp[0] = sup / d[0];
        y[0] = b[0] / d[0];
        for (int i = 1; i < n; i++) {
            double m = d[i] - sub * cp[i - 1];
            cp[i] = sup / m;
            y[i] = (b[i] - sub * y[i - 1]) / m;
        }
        for (int i = n - 2; i >= 0; i--) y[i] -= cp[i] * y[i + 1];
    };

    std::vector<double> y(n), u(n, 0.0), z(n);
    thomas(rhs, y);
    u[0] = gamma;
    u[n - 1] = sup;
    thomas(u, z);
    double fact = (y[0] + sub * y[n - 1] / gamma) /
                  (1.0 + z[0] + sub * z[n - 1] / gamma);
    for (int i = 0; i < n; i++) out[i] = y[i] - fact * z[i];
}

namespace {

// Uniform cubic B-spline basis on t in [0,1): weights of coef[k-1..k+2].
inline void bspline_weights(double t, double w[4]) {
    const double t2 = t * t, t3 = t2 * t;
    w[0] = (1.0 - 3.0 * t + 3.0 * t2 - t3) / 6.0;
    w[1] = (4.0 - 6.0 * t2 + 3.0 * t3) / 6.0;
    w[2] = (1.0 + 3.0 * t + 3.0 * t2 - 3.0 * t3) / 6.0;
    w[3] = t3 / 6.0;
}

inline void bspline_dweights(double t, double w[4]) {
    const double t2 = t * t;
    w[0] = (-3.0 + 6.0 * t - 3.0 * t2) / 6.0;
    w[1] = (-12.0 * t + 9.0 * t2) / 6.0;
    w[2] = (3.0 + 6.0 * t - 9.0 * t2) / 6.0;
    w[3] = 3.0 * t2 / 6.0;
}

inline int wrap_index(int i, int n) {
    i %= n;
    return i < 0 ? i + n : i;
}

} // namespace

PeriodicSpline1D::PeriodicSpline1D(std::span<const double> samples, double period)
    : n_(static_cast<int>(samples.size())), period_(period), h_(period / n_), coef_(n_) {
    if (n_ < 4) throw std::invalid_argument("PeriodicSpline1D: need at least 4 samples");
    // Collocation: (c[i-1] + 4 c[i] + c[i+1]) / 6 = f[i], cyclic.
    solve_cyclic_tridiagonal(1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0, samples, coef_);
}

double PeriodicSpline1D::operator()(double x) const {
    double s = x / h_;
    double k = std::floor(s);
    double t = s - k;
    int k0 = wrap_index(static_cast<int>(k), n_);
    double w[4];
    bspline_weights(t, w);
    double acc = 0.0;
    for (int j = 0; j < 4; j++)
        acc += w[j] * coef_[wrap_index(k0 - 1 + j, n_)];
    return acc;
}

double PeriodicSpline1D::derivative(double x) const {
    double s = x / h_;
    double k = std::floor(s);
    double t = s - k;
    int k0 = wrap_index(static_cast<int>(k), n_);
    double w[4];
    bspline_dweights(t, w);
    double acc = 0.0;
    for (int j = 0; j < 4; j++)
        acc += w[j] * coef_[wrap_index(k0 - 1 + j, n_)];
    return acc / h_;
}

PeriodicSpline2D::PeriodicSpline2D(std::span<const double> samples, int nx, int ny,
                                   double period_x, double period_y)
    : nx_(nx), ny_(ny), px_(period_x), py_(period_y),
      hx_(period_x / nx), hy_(period_y / ny),
      coef_(static_cast<size_t>(nx) * ny) {
    if (nx < 4 || ny < 4) throw std::invalid_argument("PeriodicSpline2D: need at least 4x4 samples");
    if (samples.size() != coef_.size()) throw std::invalid_argument("PeriodicSpline2D: size mismatch");

    // Solve along x for every row, then along y for every column.
    std::vector<double> row(nx), rowc(nx);
    for (int iy = 0; iy < ny; iy++) {
        for (int ix = 0; ix < nx; ix++) row[ix] = samples[static_cast<size_t>(iy) * nx + ix];
        solve_cyclic_tridiagonal(1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0, row, rowc);
        for (int ix = 0; ix < nx; ix++) coef_[static_cast<size_t>(iy) * nx + ix] = rowc[ix];
    }
    std::vector<double> col(ny), colc(ny);
    for (int ix = 0; ix < nx; ix++) {
        for (int iy = 0; iy < ny; iy++) col[iy] = coef_[static_cast<size_t>(iy) * nx + ix];
        solve_cyclic_tridiagonal(1.0 / 6.0, 4.0 / 6.0, 1.0 / 6.0, col, colc);
        for (int iy = 0; iy < ny; iy++) coef_[static_cast<size_t>(iy) * nx + ix] = colc[iy];
    }
}

double PeriodicSpline2D::operator()(double x, double y) const {
    double sx = x / hx_, sy = y / hy_;
    double kx = std::floor(sx), ky = std::floor(sy);
    double tx = sx - kx, ty = sy - ky;
    int ix0 = wrap_index(static_cast<int>(kx), nx_);
    int iy0 = wrap_index(static_cast<int>(ky), ny_);
    double wx[4], wy[4];
    bspline_weights(tx, wx);
    bspline_weights(ty, wy);
    double acc = 0.0;
    for (int jy = 0; jy < 4; jy++) {
        int iy = wrap_index(iy0 - 1 + jy, ny_);
        double rowacc = 0.0;
        for (int jx = 0; jx < 4; jx++)
            rowacc += wx[jx] * coef_[static_cast<size_t>(iy) * nx_ + wrap_index(ix0 - 1 + jx, nx_)];
        acc += wy[jy] * rowacc;
    }
    return acc;
}

} // namespace lam
