#ifndef LAM_SPECTRAL_HPP
#define LAM_SPECTRAL_HPP

#include <functional>
#include <span>
#include <vector>

namespace lam {

/** Pseudo-spectral workhorse for periodic grids over [0,2pi)^d.
 *
 *  Wraps FFTW real transforms behind per-size cached plans. All entry
 *  points copy through internal buffers under a lock, so concurrent
 *  calls from multiple threads are safe (they serialize per grid size).
 *  Plans use FFTW_ESTIMATE so results are reproducible run to run.
 */
namespace spectral {

/** d/dx^order of a periodic sample vector on [0,2pi). Odd-order
 *  derivatives zero the Nyquist mode. */
void derivative_1d(std::span<const double> in, std::span<double> out, int order);

/** Partial derivative of 2D data (layout iy*nx+ix) along axis 0 (x) or 1 (y). */
void derivative_2d(std::span<const double> in, std::span<double> out,
                   int nx, int ny, int axis, int order);

/** Multiplies the spectrum by symbol(k) (1D) and transforms back. */
void apply_symbol_1d(std::span<const double> in, std::span<double> out,
                     const std::function<double(double)>& symbol);

/** Multiplies the spectrum by symbol(kx,ky) (2D) and transforms back. */
void apply_symbol_2d(std::span<const double> in, std::span<double> out,
                     int nx, int ny, const std::function<double(double, double)>& symbol);

/** Zeroes all modes with |k| > n/3 (the 2/3 dealiasing rule). */
void dealias_1d(std::span<double> data);
void dealias_2d(std::span<double> data, int nx, int ny);

/** Fraction of spectral energy carried by the top third of retained modes. */
double tail_fraction_1d(std::span<const double> data);
double tail_fraction_2d(std::span<const double> data, int nx, int ny);

/** Solves Laplace u = f with zero mean; the k=0 mode of f is dropped. */
void poisson_1d(std::span<const double> f, std::span<double> u);
void poisson_2d(std::span<const double> f, std::span<double> u, int nx, int ny);

/** Solves (1 - eps^2 Laplace) u = m. */
void helmholtz_1d(std::span<const double> m, std::span<double> u, double eps);
void helmholtz_2d(std::span<const double> m, std::span<double> u, int nx, int ny, double eps);

/** Projects (ux,uy) onto its divergence-free part; k=0 mode kept. */
void leray_2d(std::span<double> ux, std::span<double> uy, int nx, int ny);

} // namespace spectral
} // namespace lam

#endif
