#include "lam/diffeo.hpp"

#include "lam/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace lam {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double wrap_pm_pi(double x) {
    x = std::fmod(x + M_PI, kTwoPi);
    if (x < 0) x += kTwoPi;
    return x - M_PI;
}

void require_flat_kind(const Manifold& m, const char* who) {
    if (m.kind() == ManifoldKind::SphereS2)
        throw std::invalid_argument(std::string(who) + ": diffeomorphisms supported on S1/T2 only");
}

} // namespace

Diffeo::Diffeo(ManifoldPtr m, std::vector<double> displacement)
    : m_(std::move(m)), n_(m_->node_count()), dim_(m_->field_dim()), d_(std::move(displacement)) {
    require_flat_kind(*m_, "Diffeo");
    if (d_.size() != static_cast<size_t>(n_) * dim_)
        throw std::invalid_argument("Diffeo: displacement size mismatch");
    build_splines();
    check_invertibility();
}

Diffeo Diffeo::identity(ManifoldPtr m) {
    require_flat_kind(*m, "Diffeo::identity");
    return Diffeo(std::move(m), std::vector<double>(static_cast<size_t>(m->node_count()) * m->field_dim(), 0.0));
}

Diffeo Diffeo::from_displacement(ManifoldPtr m, std::vector<double> displacement) {
    return Diffeo(std::move(m), std::move(displacement));
}

Diffeo Diffeo::translation(ManifoldPtr m, const std::vector<double>& shift) {
    require_flat_kind(*m, "Diffeo::translation");
    const int n = m->node_count(), dim = m->field_dim();
    if (static_cast<int>(shift.size()) != dim)
        throw std::invalid_argument("Diffeo::translation: shift dimension mismatch");
    std::vector<double> d(static_cast<size_t>(n) * dim);
    for (int c = 0; c < dim; c++)
        for (int i = 0; i < n; i++) d[static_cast<size_t>(c) * n + i] = shift[c];
    return Diffeo(std::move(m), std::move(d));
}

void Diffeo::build_splines() {
    if (m_->kind() == ManifoldKind::CircleS1) {
        spl1_.emplace_back(displacement_comp(0), kTwoPi);
    } else {
        for (int c = 0; c < 2; c++)
            spl2_.emplace_back(displacement_comp(c), m_->nx(), m_->ny(), kTwoPi, kTwoPi);
    }
}

void Diffeo::check_invertibility() const {
    if (m_->kind() == ManifoldKind::CircleS1) {
        // Strict monotonicity of the lift x + d(x), cyclically.
        for (int i = 0; i < n_; i++) {
            double here = m_->node_coord(i, 0) + displacement(i, 0);
            double next = (i + 1 < n_) ? m_->node_coord(i + 1, 0) + displacement(i + 1, 0)
                                       : kTwoPi + displacement(0, 0);
            if (next <= here)
                throw std::domain_error("Diffeo: lift is not strictly monotone (map folds)");
        }
    } else {
        TensorField11 J = jacobian();
        for (int i = 0; i < n_; i++) {
            double det = J.entry(i, 0, 0) * J.entry(i, 1, 1) - J.entry(i, 0, 1) * J.entry(i, 1, 0);
            if (det <= 0.0)
                throw std::domain_error("Diffeo: det(I + Dd) <= 0 (map folds)");
        }
    }
}

double Diffeo::image(int node, int axis) const {
    return m_->node_coord(node, axis) + displacement(node, axis);
}

void Diffeo::eval(const double* x, double* out) const {
    if (m_->kind() == ManifoldKind::CircleS1) {
        out[0] = x[0] + spl1_[0](x[0]);
    } else {
        out[0] = x[0] + spl2_[0](x[0], x[1]);
        out[1] = x[1] + spl2_[1](x[0], x[1]);
    }
}

TensorField11 Diffeo::jacobian() const {
    TensorField11 J(m_);
    std::vector<double> der(n_);
    for (int i = 0; i < dim_; i++)
        for (int j = 0; j < dim_; j++) {
            if (m_->kind() == ManifoldKind::CircleS1)
                spectral::derivative_1d(displacement_comp(i), der, 1);
            else
                spectral::derivative_2d(displacement_comp(i), der, m_->nx(), m_->ny(), j, 1);
            for (int node = 0; node < n_; node++)
                J.entry(node, i, j) = der[node] + (i == j ? 1.0 : 0.0);
        }
    return J;
}

double Diffeo::volume_distortion() const {
    TensorField11 J = jacobian();
    double worst = 0.0;
    for (int i = 0; i < n_; i++) {
        double det = dim_ == 1 ? J.entry(i, 0, 0)
                               : J.entry(i, 0, 0) * J.entry(i, 1, 1) - J.entry(i, 0, 1) * J.entry(i, 1, 0);
        worst = std::max(worst, std::abs(det - 1.0));
    }
    return worst;
}

Diffeo compose(const Diffeo& phi, const Diffeo& psi) {
    if (!same_grid(phi.manifold(), psi.manifold()))
        throw std::invalid_argument("compose: manifold mismatch");
    const int n = phi.nodes(), dim = phi.dim();
    std::vector<double> d(static_cast<size_t>(n) * dim);
    double img[2], out[2];
    for (int i = 0; i < n; i++) {
        for (int c = 0; c < dim; c++) img[c] = psi.image(i, c);
        phi.eval(img, out);
        for (int c = 0; c < dim; c++)
            d[static_cast<size_t>(c) * n + i] = out[c] - phi.manifold().node_coord(i, c);
    }
    return Diffeo::from_displacement(phi.manifold_ptr(), std::move(d));
}

Diffeo invert(const Diffeo& phi) {
    const Manifold& m = phi.manifold();
    const int n = phi.nodes(), dim = phi.dim();
    std::vector<double> d(static_cast<size_t>(n) * dim);

    if (m.kind() == ManifoldKind::CircleS1) {
        double maxd = 0.0;
        for (int i = 0; i < n; i++) maxd = std::max(maxd, std::abs(phi.displacement(i, 0)));
        for (int i = 0; i < n; i++) {
            const double y = m.node_coord(i, 0);
            // Solve z + d(z) = y on the monotone lift: bisection bracket,
            // then Newton polish.
            double lo = y - maxd - 1.0, hi = y + maxd + 1.0;
            double z = 0.5 * (lo + hi);
            for (int it = 0; it < 200; it++) {
                double fz = 0.0;
                phi.eval(&z, &fz);
                double r = fz - y;
                if (std::abs(r) < 1e-14) break;
                if (r > 0)
                    hi = z;
                else
                    lo = z;
                double step = z - r;  // Newton with unit slope guess
                z = (step > lo && step < hi) ? step : 0.5 * (lo + hi);
            }
            d[i] = z - y;
        }
    } else {
        for (int i = 0; i < n; i++) {
            const double y0 = m.node_coord(i, 0), y1 = m.node_coord(i, 1);
            double z[2] = {y0, y1}, img[2];
            bool done = false;
            for (int it = 0; it < 200; it++) {
                phi.eval(z, img);
                double r0 = img[0] - y0, r1 = img[1] - y1;
                z[0] -= r0;
                z[1] -= r1;
                if (std::abs(r0) < 1e-13 && std::abs(r1) < 1e-13) {
                    done = true;
                    break;
                }
            }
            if (!done)
                throw std::runtime_error("invert: fixed-point iteration failed (near-degenerate Jacobian)");
            d[i] = z[0] - y0;
            d[static_cast<size_t>(n) + i] = z[1] - y1;
        }
    }
    return Diffeo::from_displacement(phi.manifold_ptr(), std::move(d));
}

namespace {

// Spline evaluation of a vector field at arbitrary (possibly off-grid) points.
struct FieldInterp {
    const Manifold& m;
    std::vector<PeriodicSpline1D> s1;
    std::vector<PeriodicSpline2D> s2;

    explicit FieldInterp(const VectorField& f) : m(f.manifold()) {
        if (m.kind() == ManifoldKind::CircleS1) {
            s1.emplace_back(f.comp(0), kTwoPi);
        } else {
            for (int c = 0; c < 2; c++)
                s2.emplace_back(f.comp(c), m.nx(), m.ny(), kTwoPi, kTwoPi);
        }
    }
    void eval(const double* x, double* out) const {
        if (m.kind() == ManifoldKind::CircleS1) {
            out[0] = s1[0](x[0]);
        } else {
            out[0] = s2[0](x[0], x[1]);
            out[1] = s2[1](x[0], x[1]);
        }
    }
};

} // namespace

Diffeo flow(ManifoldPtr m, const VelocityFn& u, double T, double dt) {
    if (dt <= 0.0) throw std::invalid_argument("flow: dt must be positive");
    const int n = m->node_count(), dim = m->field_dim();
    std::vector<double> pos(static_cast<size_t>(n) * dim);
    for (int c = 0; c < dim; c++)
        for (int i = 0; i < n; i++) pos[static_cast<size_t>(c) * n + i] = m->node_coord(i, c);

    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(T) / dt - 1e-12)));
    const double h = T / steps;
    std::vector<double> k1(pos.size()), k2(pos.size()), k3(pos.size()), k4(pos.size()), tmp(pos.size());

    auto eval_velocity = [&](double t, const std::vector<double>& p, std::vector<double>& k) {
        FieldInterp interp(u(t));
        double x[2], v[2];
        for (int i = 0; i < n; i++) {
            for (int c = 0; c < dim; c++) x[c] = p[static_cast<size_t>(c) * n + i];
            interp.eval(x, v);
            for (int c = 0; c < dim; c++) k[static_cast<size_t>(c) * n + i] = v[c];
        }
    };

    double t = 0.0;
    for (int s = 0; s < steps; s++) {
        eval_velocity(t, pos, k1);
        for (size_t i = 0; i < pos.size(); i++) tmp[i] = pos[i] + 0.5 * h * k1[i];
        eval_velocity(t + 0.5 * h, tmp, k2);
        for (size_t i = 0; i < pos.size(); i++) tmp[i] = pos[i] + 0.5 * h * k2[i];
        eval_velocity(t + 0.5 * h, tmp, k3);
        for (size_t i = 0; i < pos.size(); i++) tmp[i] = pos[i] + h * k3[i];
        eval_velocity(t + h, tmp, k4);
        for (size_t i = 0; i < pos.size(); i++)
            pos[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t += h;
    }

    std::vector<double> d(pos.size());
    for (int c = 0; c < dim; c++)
        for (int i = 0; i < n; i++)
            d[static_cast<size_t>(c) * n + i] =
                pos[static_cast<size_t>(c) * n + i] - m->node_coord(i, c);
    return Diffeo::from_displacement(std::move(m), std::move(d));
}

Diffeo exp_map(const Diffeo& phi, const VectorField& w, double eps) {
    if (!same_grid(phi.manifold(), w.manifold()))
        throw std::invalid_argument("exp_map: manifold mismatch");
    const int n = phi.nodes(), dim = phi.dim();
    FieldInterp interp(w);
    std::vector<double> d(static_cast<size_t>(n) * dim);
    double x[2], v[2];
    for (int i = 0; i < n; i++) {
        for (int c = 0; c < dim; c++) x[c] = phi.image(i, c);
        interp.eval(x, v);
        for (int c = 0; c < dim; c++)
            d[static_cast<size_t>(c) * n + i] = phi.displacement(i, c) + eps * v[c];
    }
    return Diffeo::from_displacement(phi.manifold_ptr(), std::move(d));
}

std::vector<double> log_material(const Diffeo& phi, const Diffeo& psi) {
    if (!same_grid(phi.manifold(), psi.manifold()))
        throw std::invalid_argument("log_map: manifold mismatch");
    const Manifold& m = phi.manifold();
    const int n = phi.nodes(), dim = phi.dim();
    std::vector<double> delta(static_cast<size_t>(n) * dim);
    for (int c = 0; c < dim; c++) {
        for (int i = 0; i < n; i++) {
            double raw = psi.displacement(i, c) - phi.displacement(i, c);
            double a = wrap_pm_pi(raw);
            if (std::abs(a) > M_PI - 1e-9)
                throw std::domain_error("log_map: displacement exceeds injectivity range");
            delta[static_cast<size_t>(c) * n + i] = a;
        }
    }
    // A branch cut between neighboring nodes means the shortest
    // representative is not single-valued; multi-winding maps are
    // rejected rather than lifted.
    auto check_jump = [&](double a, double b) {
        if (std::abs(a - b) > M_PI)
            throw std::domain_error("log_map: displacement winds around the period");
    };
    for (int c = 0; c < dim; c++) {
        const double* d = delta.data() + static_cast<size_t>(c) * n;
        if (m.kind() == ManifoldKind::CircleS1) {
            for (int i = 0; i < n; i++) check_jump(d[i], d[(i + 1) % n]);
        } else {
            const int nx = m.nx(), ny = m.ny();
            for (int iy = 0; iy < ny; iy++)
                for (int ix = 0; ix < nx; ix++) {
                    check_jump(d[iy * nx + ix], d[iy * nx + (ix + 1) % nx]);
                    check_jump(d[iy * nx + ix], d[((iy + 1) % ny) * nx + ix]);
                }
        }
    }
    return delta;
}

VectorField log_map(const Diffeo& phi, const Diffeo& psi) {
    return log_map(phi, psi, invert(phi));
}

VectorField log_map(const Diffeo& phi, const Diffeo& psi, const Diffeo& inv) {
    const Manifold& m = phi.manifold();
    const int n = phi.nodes(), dim = phi.dim();
    std::vector<double> delta = log_material(phi, psi);

    // w(y) = delta(phi^{-1}(y)): spline delta over labels, pull back
    // through the inverse map.
    VectorField w(phi.manifold_ptr());
    if (m.kind() == ManifoldKind::CircleS1) {
        PeriodicSpline1D s(std::span<const double>(delta.data(), n), kTwoPi);
        for (int i = 0; i < n; i++) w.comp(0)[i] = s(inv.image(i, 0));
    } else {
        for (int c = 0; c < dim; c++) {
            PeriodicSpline2D s(std::span<const double>(delta.data() + static_cast<size_t>(c) * n, n),
                               m.nx(), m.ny(), kTwoPi, kTwoPi);
            for (int i = 0; i < n; i++)
                w.comp(c)[i] = s(inv.image(i, 0), inv.image(i, 1));
        }
    }
    return w;
}

double distance(const Diffeo& phi, const Diffeo& psi) {
    std::vector<double> delta = log_material(phi, psi);
    const int n = phi.nodes(), dim = phi.dim();
    double acc = 0.0;
    for (int i = 0; i < n; i++) {
        double s = 0.0;
        for (int c = 0; c < dim; c++) {
            double v = delta[static_cast<size_t>(c) * n + i];
            s += v * v;
        }
        acc += phi.manifold().weight(i) * s;
    }
    return std::sqrt(acc);
}

FlowPath sample_flow(ManifoldPtr m, const VelocityFn& u,
                     const std::vector<double>& times, double dt) {
    FlowPath path;
    path.times = times;
    for (double t : times) {
        path.maps.push_back(t == 0.0 ? Diffeo::identity(m) : flow(m, u, t, dt));
        path.velocities.push_back(u(t));
    }
    return path;
}

} // namespace lam
