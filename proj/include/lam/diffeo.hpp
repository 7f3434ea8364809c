#ifndef LAM_DIFFEO_HPP
#define LAM_DIFFEO_HPP

#include "lam/interp.hpp"
#include "lam/manifold.hpp"

#include <functional>
#include <vector>

namespace lam {

/** Discrete diffeomorphism of S1 or T2.
 *
 *  S1 maps are stored through the lift eta(x) = x + d(x) with periodic
 *  displacement d and strictly monotone lift. T2 maps store a bi-periodic
 *  displacement with det(I + Dd) > 0 at every node. Off-grid evaluation
 *  uses periodic cubic splines of the displacement; a Diffeo is immutable
 *  once built and all operations on it are pure.
 */
class Diffeo {
public:
    static Diffeo identity(ManifoldPtr m);
    /** Displacement given component-major (S1: n values; T2: 2n). */
    static Diffeo from_displacement(ManifoldPtr m, std::vector<double> displacement);
    /** Rigid translation: S1 shift(a) or T2 shift(ax, ay). */
    static Diffeo translation(ManifoldPtr m, const std::vector<double>& shift);

    const Manifold& manifold() const { return *m_; }
    const ManifoldPtr& manifold_ptr() const { return m_; }
    int dim() const { return dim_; }
    int nodes() const { return n_; }

    /** Image of node i (S1: lift value; T2: label + displacement). */
    double image(int node, int axis) const;
    double displacement(int node, int axis) const { return d_[static_cast<size_t>(axis) * n_ + node]; }
    std::span<const double> displacement_comp(int axis) const {
        return {d_.data() + static_cast<size_t>(axis) * n_, static_cast<size_t>(n_)};
    }

    /** Map applied to an arbitrary point (spline evaluation, lift-aware). */
    void eval(const double* x, double* out) const;

    /** Spectral Jacobian of the map, (I + Dd) at every node. */
    TensorField11 jacobian() const;
    /** Worst deviation of det(I + Dd) from 1 over nodes. */
    double volume_distortion() const;

private:
    Diffeo(ManifoldPtr m, std::vector<double> displacement);
    void build_splines();
    void check_invertibility() const;

    ManifoldPtr m_;
    int n_ = 0, dim_ = 0;
    std::vector<double> d_;
    std::vector<PeriodicSpline1D> spl1_;
    std::vector<PeriodicSpline2D> spl2_;
};

/** phi after psi: x -> phi(psi(x)). */
Diffeo compose(const Diffeo& phi, const Diffeo& psi);

/** Inverse map: S1 by monotone bisection/Newton on the lift, T2 by
 *  fixed-point iteration on the displacement. */
Diffeo invert(const Diffeo& phi);

using VelocityFn = std::function<VectorField(double)>;

/** Particle flow of a time-dependent field from the identity, classical
 *  RK4 with fixed step dt. */
Diffeo flow(ManifoldPtr m, const VelocityFn& u, double T, double dt);

/** Geodesic step of the material L2 metric on flat charts (free flight):
 *  x -> phi(x) + eps * w(phi(x)). */
Diffeo exp_map(const Diffeo& phi, const VectorField& w, double eps);

/** Initial velocity w with exp_map(phi, w, 1) = psi; requires the
 *  shortest-representative displacement |psi - phi| < pi per coordinate. */
VectorField log_map(const Diffeo& phi, const Diffeo& psi);
/** Same, reusing a precomputed inverse of phi. */
VectorField log_map(const Diffeo& phi, const Diffeo& psi, const Diffeo& phi_inverse);

/** Material displacement (log_map composed with phi): values of w at the
 *  images phi(x_i), component-major over label nodes. */
std::vector<double> log_material(const Diffeo& phi, const Diffeo& psi);

/** Material L2 geodesic distance between two maps. */
double distance(const Diffeo& phi, const Diffeo& psi);

/** Mean-flow samples used by transport and averaging. */
struct FlowPath {
    std::vector<double> times;
    std::vector<Diffeo> maps;
    std::vector<VectorField> velocities;

    int size() const { return static_cast<int>(times.size()); }
};

/** Integrates the flow of u from the identity and records the map and
 *  Eulerian velocity at the requested times (RK4 substeps of size <= dt). */
FlowPath sample_flow(ManifoldPtr m, const VelocityFn& u,
                     const std::vector<double>& times, double dt);

} // namespace lam

#endif
