#include "lam/geometry.hpp"

#include "lam/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace lam {
namespace geometry {

// Sphere implementations live in geometry_sphere.cpp.
namespace sphere {
VectorField covariant_derivative(const VectorField& direction, const VectorField& field);
ScalarField divergence(const VectorField& u);
VectorField gradient(const ScalarField& f);
TensorField11 covariant_gradient(const VectorField& u);
VectorField rough_laplacian(const VectorField& u);
}

namespace {

void require_same(const Manifold& a, const Manifold& b, const char* who) {
    if (!same_grid(a, b)) throw std::invalid_argument(std::string(who) + ": manifold mismatch");
}

void require_flat(const Manifold& m, const char* who) {
    if (m.kind() == ManifoldKind::SphereS2)
        throw std::invalid_argument(std::string(who) + ": unsupported on the sphere");
}

// Spectral partial derivative of one component on a flat chart.
void flat_partial(const Manifold& m, std::span<const double> in, std::span<double> out,
                  int axis, int order) {
    if (m.kind() == ManifoldKind::CircleS1)
        spectral::derivative_1d(in, out, order);
    else
        spectral::derivative_2d(in, out, m.nx(), m.ny(), axis, order);
}

void flat_dealias(const Manifold& m, std::span<double> data) {
    if (m.kind() == ManifoldKind::CircleS1)
        spectral::dealias_1d(data);
    else
        spectral::dealias_2d(data, m.nx(), m.ny());
}

} // namespace

ScalarField metric_inner(const VectorField& u, const VectorField& v) {
    require_same(u.manifold(), v.manifold(), "metric_inner");
    ScalarField out(u.manifold_ptr());
    for (int i = 0; i < u.nodes(); i++) {
        double s = 0.0;
        for (int c = 0; c < u.dim(); c++) s += u.value(i, c) * v.value(i, c);
        out[i] = s;
    }
    return out;
}

double integrate(const ScalarField& f) {
    double acc = 0.0;
    auto w = f.manifold().quadrature_weights();
    for (int i = 0; i < f.size(); i++) acc += w[i] * f[i];
    return acc;
}

double inner_product(const VectorField& u, const VectorField& v) {
    return integrate(metric_inner(u, v));
}

VectorField covariant_derivative(const VectorField& direction, const VectorField& field) {
    require_same(direction.manifold(), field.manifold(), "covariant_derivative");
    const Manifold& m = field.manifold();
    if (m.kind() == ManifoldKind::SphereS2)
        return sphere::covariant_derivative(direction, field);

    // Flat connection: (w . grad) u componentwise, products dealiased.
    VectorField out(field.manifold_ptr());
    const int n = field.nodes();
    std::vector<double> d(n);
    for (int c = 0; c < field.dim(); c++) {
        auto oc = out.comp(c);
        for (int a = 0; a < field.dim(); a++) {
            flat_partial(m, field.comp(c), d, a, 1);
            auto wa = direction.comp(a);
            for (int i = 0; i < n; i++) oc[i] += wa[i] * d[i];
        }
        flat_dealias(m, oc);
    }
    return out;
}

VectorField lie_bracket(const VectorField& u, const VectorField& w) {
    require_same(u.manifold(), w.manifold(), "lie_bracket");
    return covariant_derivative(u, w) - covariant_derivative(w, u);
}

ScalarField divergence(const VectorField& u) {
    const Manifold& m = u.manifold();
    if (m.kind() == ManifoldKind::SphereS2) return sphere::divergence(u);
    ScalarField out(u.manifold_ptr());
    std::vector<double> d(u.nodes());
    for (int c = 0; c < u.dim(); c++) {
        flat_partial(m, u.comp(c), d, c, 1);
        for (int i = 0; i < u.nodes(); i++) out[i] += d[i];
    }
    return out;
}

VectorField gradient(const ScalarField& f) {
    const Manifold& m = f.manifold();
    if (m.kind() == ManifoldKind::SphereS2) return sphere::gradient(f);
    VectorField out(f.manifold_ptr());
    for (int c = 0; c < out.dim(); c++)
        flat_partial(m, f.values(), out.comp(c), c, 1);
    return out;
}

ScalarField poisson_solve(const ScalarField& f) {
    const Manifold& m = f.manifold();
    require_flat(m, "poisson_solve");
    const double mean = integrate(f);
    if (std::abs(mean) > 1e-8)
        throw std::domain_error("poisson_solve: right-hand side must have zero mean");
    ScalarField out(f.manifold_ptr());
    if (m.kind() == ManifoldKind::CircleS1)
        spectral::poisson_1d(f.values(), out.values());
    else
        spectral::poisson_2d(f.values(), out.values(), m.nx(), m.ny());
    return out;
}

TensorField11 covariant_gradient(const VectorField& u) {
    const Manifold& m = u.manifold();
    if (m.kind() == ManifoldKind::SphereS2) return sphere::covariant_gradient(u);
    TensorField11 out(u.manifold_ptr());
    std::vector<double> d(u.nodes());
    for (int i = 0; i < u.dim(); i++)
        for (int j = 0; j < u.dim(); j++) {
            flat_partial(m, u.comp(i), d, j, 1);
            for (int node = 0; node < u.nodes(); node++) out.entry(node, i, j) = d[node];
        }
    return out;
}

VectorField riemann(const VectorField& u, const VectorField& v, const VectorField& w) {
    require_same(u.manifold(), v.manifold(), "riemann");
    require_same(u.manifold(), w.manifold(), "riemann");
    VectorField out(u.manifold_ptr());
    if (u.manifold().kind() != ManifoldKind::SphereS2) return out;  // flat
    // Unit sphere: R(u,v)w = g(v,w) u - g(u,w) v.
    for (int i = 0; i < u.nodes(); i++) {
        double gvw = 0.0, guw = 0.0;
        for (int c = 0; c < 3; c++) {
            gvw += v.value(i, c) * w.value(i, c);
            guw += u.value(i, c) * w.value(i, c);
        }
        for (int c = 0; c < 3; c++)
            out.value(i, c) = gvw * u.value(i, c) - guw * v.value(i, c);
    }
    return out;
}

ScalarField ricci(const VectorField& u, const VectorField& v) {
    require_same(u.manifold(), v.manifold(), "ricci");
    if (u.manifold().kind() != ManifoldKind::SphereS2)
        return ScalarField(u.manifold_ptr());
    return metric_inner(u, v);  // Ric = (n-1) g = g on the unit 2-sphere
}

VectorField laplacian(const VectorField& u, LaplacianKind kind) {
    const Manifold& m = u.manifold();
    VectorField rough(u.manifold_ptr());
    if (m.kind() == ManifoldKind::SphereS2) {
        rough = sphere::rough_laplacian(u);
    } else {
        // Componentwise spectral Laplacian.
        std::vector<double> d(u.nodes());
        for (int c = 0; c < u.dim(); c++) {
            auto rc = rough.comp(c);
            for (int a = 0; a < u.dim(); a++) {
                flat_partial(m, u.comp(c), d, a, 2);
                for (int i = 0; i < u.nodes(); i++) rc[i] += d[i];
            }
        }
        return rough;  // all three kinds coincide (Ric = 0)
    }
    if (kind == LaplacianKind::Rough) return rough;
    // Ric is the identity on tangent vectors of the unit sphere.
    const double s = (kind == LaplacianKind::Hodge) ? -1.0 : 1.0;
    axpy(s, u, rough);
    return rough;
}

DeformationResult deformation(const VectorField& u) {
    TensorField11 grad = covariant_gradient(u);
    TensorField11 def(u.manifold_ptr());
    ScalarField norm2(u.manifold_ptr());
    const int d = grad.dim();
    for (int node = 0; node < grad.nodes(); node++) {
        double acc = 0.0;
        for (int i = 0; i < d; i++)
            for (int j = 0; j < d; j++) {
                double s = 0.5 * (grad.entry(node, i, j) + grad.entry(node, j, i));
                def.entry(node, i, j) = s;
                acc += s * s;
            }
        norm2[node] = acc;
    }
    return {std::move(def), std::move(norm2)};
}

VectorField helmholtz_apply(const VectorField& u, double eps) {
    require_flat(u.manifold(), "helmholtz_apply");
    if (eps < 0.0) throw std::invalid_argument("helmholtz_apply: eps must be >= 0");
    VectorField lap = laplacian(u, LaplacianKind::Ricci);
    VectorField out = u;
    axpy(-eps * eps, lap, out);
    return out;
}

VectorField helmholtz_solve(const VectorField& mfield, double eps) {
    const Manifold& m = mfield.manifold();
    require_flat(m, "helmholtz_solve");
    if (eps < 0.0) throw std::invalid_argument("helmholtz_solve: eps must be >= 0");
    if (eps == 0.0) return mfield;
    VectorField out(mfield.manifold_ptr());
    for (int c = 0; c < mfield.dim(); c++) {
        if (m.kind() == ManifoldKind::CircleS1)
            spectral::helmholtz_1d(mfield.comp(c), out.comp(c), eps);
        else
            spectral::helmholtz_2d(mfield.comp(c), out.comp(c), m.nx(), m.ny(), eps);
    }
    return out;
}

VectorField leray_project(const VectorField& u) {
    const Manifold& m = u.manifold();
    require_flat(m, "leray_project");
    VectorField out = u;
    if (m.kind() == ManifoldKind::CircleS1) {
        // Divergence-free on S1 means constant: keep the mean only.
        double mean = 0.0;
        auto c = out.comp(0);
        for (double x : c) mean += x;
        mean /= c.size();
        for (double& x : c) x = mean;
    } else {
        spectral::leray_2d(out.comp(0), out.comp(1), m.nx(), m.ny());
    }
    return out;
}

} // namespace geometry
} // namespace lam
