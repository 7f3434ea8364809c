#include "lam/manifold.hpp"

#include "lam/quadrature.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lam {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
}

ManifoldPtr Manifold::circle(int n) {
    if (n < 8) throw std::invalid_argument("Manifold::circle: need n >= 8");
    auto m = std::shared_ptr<Manifold>(new Manifold());
    m->kind_ = ManifoldKind::CircleS1;
    m->nx_ = n;
    m->coord_dim_ = 1;
    m->nodes_.resize(n);
    m->weights_.assign(n, kTwoPi / n);
    for (int i = 0; i < n; i++) m->nodes_[i] = kTwoPi * i / n;
    return m;
}

ManifoldPtr Manifold::torus(int nx, int ny) {
    if (nx < 8 || ny < 8) throw std::invalid_argument("Manifold::torus: need nx,ny >= 8");
    auto m = std::shared_ptr<Manifold>(new Manifold());
    m->kind_ = ManifoldKind::TorusT2;
    m->nx_ = nx;
    m->ny_ = ny;
    m->coord_dim_ = 2;
    const int n = nx * ny;
    m->nodes_.resize(static_cast<size_t>(n) * 2);
    m->weights_.assign(n, kTwoPi * kTwoPi / n);
    for (int iy = 0; iy < ny; iy++)
        for (int ix = 0; ix < nx; ix++) {
            int node = iy * nx + ix;
            m->nodes_[static_cast<size_t>(node) * 2] = kTwoPi * ix / nx;
            m->nodes_[static_cast<size_t>(node) * 2 + 1] = kTwoPi * iy / ny;
        }
    return m;
}

ManifoldPtr Manifold::sphere(int nlat, int nlon) {
    if (nlat < 8 || nlon < 8) throw std::invalid_argument("Manifold::sphere: need nlat,nlon >= 8");
    if (nlon % 2 != 0)
        throw std::invalid_argument("Manifold::sphere: nlon must be even (pole wrap maps phi -> phi+pi)");
    auto m = std::shared_ptr<Manifold>(new Manifold());
    m->kind_ = ManifoldKind::SphereS2;
    m->nx_ = nlat;
    m->ny_ = nlon;
    m->coord_dim_ = 3;

    std::vector<double> x, w;
    gauss_legendre(nlat, x, w);   // nodes are cos(theta), ascending
    m->theta_.resize(nlat);
    m->sin_theta_.resize(nlat);
    m->cos_theta_.resize(nlat);
    // theta ascending (north to south): theta_i = acos(x_{nlat-1-i}).
    for (int i = 0; i < nlat; i++) {
        double c = x[nlat - 1 - i];
        m->theta_[i] = std::acos(c);
        m->cos_theta_[i] = c;
        m->sin_theta_[i] = std::sqrt(1.0 - c * c);
    }
    m->phi_.resize(nlon);
    for (int j = 0; j < nlon; j++) m->phi_[j] = kTwoPi * j / nlon;

    const int n = nlat * nlon;
    m->nodes_.resize(static_cast<size_t>(n) * 3);
    m->weights_.resize(n);
    for (int i = 0; i < nlat; i++) {
        const double st = m->sin_theta_[i], ct = m->cos_theta_[i];
        const double wl = w[nlat - 1 - i] * kTwoPi / nlon;
        for (int j = 0; j < nlon; j++) {
            int node = i * nlon + j;
            m->nodes_[static_cast<size_t>(node) * 3] = st * std::cos(m->phi_[j]);
            m->nodes_[static_cast<size_t>(node) * 3 + 1] = st * std::sin(m->phi_[j]);
            m->nodes_[static_cast<size_t>(node) * 3 + 2] = ct;
            m->weights_[node] = wl;
        }
    }
    return m;
}

int Manifold::field_dim() const {
    switch (kind_) {
        case ManifoldKind::CircleS1: return 1;
        case ManifoldKind::TorusT2: return 2;
        case ManifoldKind::SphereS2: return 3;
    }
    return 0;
}

double Manifold::volume() const {
    switch (kind_) {
        case ManifoldKind::CircleS1: return kTwoPi;
        case ManifoldKind::TorusT2: return kTwoPi * kTwoPi;
        case ManifoldKind::SphereS2: return 4.0 * M_PI;
    }
    return 0.0;
}

std::array<double, 3> Manifold::point(int node) const {
    return {nodes_[static_cast<size_t>(node) * 3],
            nodes_[static_cast<size_t>(node) * 3 + 1],
            nodes_[static_cast<size_t>(node) * 3 + 2]};
}

std::array<double, 3> Manifold::frame_theta(int node) const {
    const int i = node / ny_, j = node % ny_;
    const double ct = cos_theta_[i], st = sin_theta_[i];
    return {ct * std::cos(phi_[j]), ct * std::sin(phi_[j]), -st};
}

std::array<double, 3> Manifold::frame_phi(int node) const {
    const int j = node % ny_;
    return {-std::sin(phi_[j]), std::cos(phi_[j]), 0.0};
}

std::string Manifold::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case ManifoldKind::CircleS1: os << "S1(" << nx_ << ")"; break;
        case ManifoldKind::TorusT2: os << "T2(" << nx_ << "x" << ny_ << ")"; break;
        case ManifoldKind::SphereS2: os << "S2(" << nx_ << "x" << ny_ << ")"; break;
    }
    return os.str();
}

bool same_grid(const Manifold& a, const Manifold& b) {
    return &a == &b || (a.kind() == b.kind() && a.nx() == b.nx() && a.ny() == b.ny());
}

ScalarField::ScalarField(ManifoldPtr m) : m_(std::move(m)), v_(m_->node_count(), 0.0) {}

ScalarField::ScalarField(ManifoldPtr m, std::vector<double> values)
    : m_(std::move(m)), v_(std::move(values)) {
    if (static_cast<int>(v_.size()) != m_->node_count())
        throw std::invalid_argument("ScalarField: value count != node count");
}

VectorField::VectorField(ManifoldPtr m)
    : m_(std::move(m)), n_(m_->node_count()), dim_(m_->field_dim()),
      v_(static_cast<size_t>(n_) * dim_, 0.0) {}

VectorField::VectorField(ManifoldPtr m, std::vector<double> component_major)
    : m_(std::move(m)), n_(m_->node_count()), dim_(m_->field_dim()), v_(std::move(component_major)) {
    if (v_.size() != static_cast<size_t>(n_) * dim_)
        throw std::invalid_argument("VectorField: component data size mismatch");
}

double VectorField::tangency_defect() const {
    if (m_->kind() != ManifoldKind::SphereS2) return 0.0;
    double worst = 0.0;
    for (int i = 0; i < n_; i++) {
        auto p = m_->point(i);
        double d = value(i, 0) * p[0] + value(i, 1) * p[1] + value(i, 2) * p[2];
        worst = std::max(worst, std::abs(d));
    }
    return worst;
}

void VectorField::project_tangent() {
    if (m_->kind() != ManifoldKind::SphereS2) return;
    for (int i = 0; i < n_; i++) {
        auto p = m_->point(i);
        double d = value(i, 0) * p[0] + value(i, 1) * p[1] + value(i, 2) * p[2];
        for (int c = 0; c < 3; c++) value(i, c) -= d * p[c];
    }
}

void VectorField::check_invariants(double tol) const {
    for (double x : v_)
        if (!std::isfinite(x)) throw std::domain_error("VectorField: non-finite value");
    if (tangency_defect() > tol)
        throw std::domain_error("VectorField: non-tangent field on the sphere");
}

TensorField11::TensorField11(ManifoldPtr m)
    : m_(std::move(m)), n_(m_->node_count()), dim_(m_->field_dim()),
      v_(static_cast<size_t>(n_) * dim_ * dim_, 0.0) {}

double TensorField11::normal_defect() const {
    if (m_->kind() != ManifoldKind::SphereS2) return 0.0;
    double worst = 0.0;
    for (int node = 0; node < n_; node++) {
        auto p = m_->point(node);
        for (int i = 0; i < 3; i++) {
            double row = 0.0, col = 0.0;
            for (int j = 0; j < 3; j++) {
                row += entry(node, i, j) * p[j];   // A p (input normal)
                col += entry(node, j, i) * p[j];   // p^T A (output normal)
            }
            worst = std::max({worst, std::abs(row), std::abs(col)});
        }
    }
    return worst;
}

VectorField operator+(const VectorField& a, const VectorField& b) {
    VectorField r = a;
    for (int c = 0; c < a.dim(); c++)
        for (int i = 0; i < a.nodes(); i++) r.value(i, c) += b.value(i, c);
    return r;
}

VectorField operator-(const VectorField& a, const VectorField& b) {
    VectorField r = a;
    for (int c = 0; c < a.dim(); c++)
        for (int i = 0; i < a.nodes(); i++) r.value(i, c) -= b.value(i, c);
    return r;
}

VectorField operator*(double s, const VectorField& a) {
    VectorField r = a;
    for (int c = 0; c < a.dim(); c++)
        for (int i = 0; i < a.nodes(); i++) r.value(i, c) *= s;
    return r;
}

void axpy(double a, const VectorField& x, VectorField& y) {
    for (int c = 0; c < x.dim(); c++)
        for (int i = 0; i < x.nodes(); i++) y.value(i, c) += a * x.value(i, c);
}

double sup_norm(const VectorField& a) {
    double worst = 0.0;
    for (double x : a.raw()) worst = std::max(worst, std::abs(x));
    return worst;
}

double sup_norm(const ScalarField& a) {
    double worst = 0.0;
    for (double x : a.values()) worst = std::max(worst, std::abs(x));
    return worst;
}

double l2_norm(const VectorField& a) {
    double acc = 0.0;
    for (int i = 0; i < a.nodes(); i++) {
        double s = 0.0;
        for (int c = 0; c < a.dim(); c++) s += a.value(i, c) * a.value(i, c);
        acc += a.manifold().weight(i) * s;
    }
    return std::sqrt(acc);
}

} // namespace lam
