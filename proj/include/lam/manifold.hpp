#ifndef LAM_MANIFOLD_HPP
#define LAM_MANIFOLD_HPP

#include <array>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace lam {

enum class ManifoldKind { CircleS1, TorusT2, SphereS2 };

class Manifold;
using ManifoldPtr = std::shared_ptr<const Manifold>;

/** Discrete descriptor of one of the three supported manifolds.
 *
 *  CircleS1  period 2pi, nodes x_i = 2pi i/n, uniform weights.
 *  TorusT2   periods 2pi x 2pi, nodes (x_i, y_j), x fastest, uniform weights.
 *  SphereS2  unit sphere, latitude rings at Gauss-Legendre nodes in cos(theta)
 *            (poles excluded), uniform longitudes, weights w_lat * 2pi/nlon.
 *
 *  Immutable after construction; fields reference it via shared_ptr.
 */
class Manifold {
public:
    static ManifoldPtr circle(int n);
    static ManifoldPtr torus(int nx, int ny);
    static ManifoldPtr sphere(int nlat, int nlon);

    ManifoldKind kind() const { return kind_; }
    int node_count() const { return static_cast<int>(weights_.size()); }
    /** Components a vector field carries per node: 1, 2, or 3 (ambient). */
    int field_dim() const;
    double volume() const;

    int nx() const { return nx_; }     // S1: n; T2: nx; S2: nlat
    int ny() const { return ny_; }     // T2: ny; S2: nlon

    /** Node coordinates, field_dim-like layout: S1 x; T2 (x,y); S2 unit 3-vectors. */
    double node_coord(int node, int axis) const { return nodes_[static_cast<size_t>(node) * coord_dim_ + axis]; }
    int coord_dim() const { return coord_dim_; }
    std::span<const double> quadrature_weights() const { return weights_; }
    double weight(int node) const { return weights_[node]; }

    // Sphere-only accessors (lat-major grid: node = ilat*nlon + ilon).
    double theta(int ilat) const { return theta_[ilat]; }
    double phi(int ilon) const { return phi_[ilon]; }
    double sin_theta(int ilat) const { return sin_theta_[ilat]; }
    double cos_theta(int ilat) const { return cos_theta_[ilat]; }
    /** Orthonormal tangent frame at a sphere node: e_theta and e_phi-hat. */
    std::array<double, 3> frame_theta(int node) const;
    std::array<double, 3> frame_phi(int node) const;
    std::array<double, 3> point(int node) const;

    std::string describe() const;

private:
    Manifold() = default;

    ManifoldKind kind_{};
    int nx_ = 0, ny_ = 0;
    int coord_dim_ = 0;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    // Sphere grid data.
    std::vector<double> theta_, phi_, sin_theta_, cos_theta_;
};

bool same_grid(const Manifold& a, const Manifold& b);

/** One real value per node. */
class ScalarField {
public:
    explicit ScalarField(ManifoldPtr m);
    ScalarField(ManifoldPtr m, std::vector<double> values);

    const Manifold& manifold() const { return *m_; }
    const ManifoldPtr& manifold_ptr() const { return m_; }
    int size() const { return static_cast<int>(v_.size()); }
    double operator[](int i) const { return v_[i]; }
    double& operator[](int i) { return v_[i]; }
    std::span<const double> values() const { return v_; }
    std::span<double> values() { return v_; }

private:
    ManifoldPtr m_;
    std::vector<double> v_;
};

/** Sampled vector field; components stored one contiguous block each.
 *  On the sphere, components are ambient and must be tangent at nodes. */
class VectorField {
public:
    explicit VectorField(ManifoldPtr m);
    VectorField(ManifoldPtr m, std::vector<double> component_major);

    const Manifold& manifold() const { return *m_; }
    const ManifoldPtr& manifold_ptr() const { return m_; }
    int dim() const { return dim_; }
    int nodes() const { return n_; }

    std::span<const double> comp(int c) const { return {v_.data() + static_cast<size_t>(c) * n_, static_cast<size_t>(n_)}; }
    std::span<double> comp(int c) { return {v_.data() + static_cast<size_t>(c) * n_, static_cast<size_t>(n_)}; }
    double value(int node, int c) const { return v_[static_cast<size_t>(c) * n_ + node]; }
    double& value(int node, int c) { return v_[static_cast<size_t>(c) * n_ + node]; }
    std::span<const double> raw() const { return v_; }

    /** Worst-case |w(p).p| over sphere nodes (0 on flat manifolds). */
    double tangency_defect() const;
    /** Removes the normal component at every sphere node. */
    void project_tangent();
    /** Throws if the tangency invariant is violated. */
    void check_invariants(double tol = 1e-10) const;

private:
    ManifoldPtr m_;
    int n_ = 0, dim_ = 0;
    std::vector<double> v_;
};

/** Per-node square matrix ((1,1)-tensor); ambient 3x3 on the sphere. */
class TensorField11 {
public:
    explicit TensorField11(ManifoldPtr m);

    const Manifold& manifold() const { return *m_; }
    const ManifoldPtr& manifold_ptr() const { return m_; }
    int dim() const { return dim_; }
    int nodes() const { return n_; }

    double entry(int node, int i, int j) const { return v_[(static_cast<size_t>(i) * dim_ + j) * n_ + node]; }
    double& entry(int node, int i, int j) { return v_[(static_cast<size_t>(i) * dim_ + j) * n_ + node]; }

    /** Worst-case norm of (normal row / normal column) over sphere nodes. */
    double normal_defect() const;

private:
    ManifoldPtr m_;
    int n_ = 0, dim_ = 0;
    std::vector<double> v_;
};

// Pointwise arithmetic helpers used across modules.
VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(double s, const VectorField& a);
void axpy(double a, const VectorField& x, VectorField& y);

double sup_norm(const VectorField& a);
double sup_norm(const ScalarField& a);
/** L2 norm with respect to the quadrature weights. */
double l2_norm(const VectorField& a);

} // namespace lam

#endif
