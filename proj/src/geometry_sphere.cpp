#include "lam/geometry.hpp"
#include "lam/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

// Latitude-longitude differential operators on the unit sphere.
//
// Fields are sampled in ambient components on Gauss-Legendre latitude
// rings. Derivatives in theta use five-point Fornberg stencils on the
// nonuniform latitudes; rings extend across the poles via the chart
// identity p(-theta, phi) = p(theta, phi + pi), which holds verbatim for
// ambient components (no sign flips). Longitude derivatives are classic
// fourth-order central differences on the uniform periodic grid.

namespace lam {
namespace geometry {
namespace sphere {

namespace {

struct ThetaStencil {
    int lat[5];
    bool flip[5];      // shift longitude by pi when reading across a pole
    double w[5];       // first-derivative weights
};

struct StencilTable {
    std::vector<ThetaStencil> rows;
};

const StencilTable& stencils_for(const Manifold& m) {
    static std::mutex mtx;
    static std::map<int, std::unique_ptr<StencilTable>> cache;
    std::lock_guard<std::mutex> lk(mtx);
    auto& slot = cache[m.nx()];
    if (slot) return *slot;

    const int nlat = m.nx();
    auto table = std::make_unique<StencilTable>();
    table->rows.resize(nlat);
    for (int i = 0; i < nlat; i++) {
        ThetaStencil st{};
        double coords[5];
        for (int s = 0; s < 5; s++) {
            int g = i - 2 + s;
            if (g < 0) {
                st.lat[s] = -g - 1;
                st.flip[s] = true;
                coords[s] = -m.theta(st.lat[s]);
            } else if (g >= nlat) {
                st.lat[s] = 2 * nlat - 1 - g;
                st.flip[s] = true;
                coords[s] = 2.0 * M_PI - m.theta(st.lat[s]);
            } else {
                st.lat[s] = g;
                st.flip[s] = false;
                coords[s] = m.theta(g);
            }
        }
        auto w = fd_weights(m.theta(i), std::span<const double>(coords, 5), 1);
        for (int s = 0; s < 5; s++) st.w[s] = w[s];
        table->rows[i] = st;
    }
    slot = std::move(table);
    return *slot;
}

// d/dtheta of one sampled component, pole wrap included. Components of
// genuine sphere fields continue evenly across the pole (the chart point
// (-theta, phi) IS (theta, phi+pi)); chart-frame quantities contracted
// with e_theta flip sign there and need parity = -1.
void theta_derivative(const Manifold& m, std::span<const double> f, std::span<double> out,
                      double parity = 1.0) {
    const auto& table = stencils_for(m);
    const int nlat = m.nx(), nlon = m.ny(), half = m.ny() / 2;
    for (int i = 0; i < nlat; i++) {
        const ThetaStencil& st = table.rows[i];
        for (int j = 0; j < nlon; j++) {
            double acc = 0.0;
            for (int s = 0; s < 5; s++) {
                int jj = st.flip[s] ? (j + half) % nlon : j;
                double v = f[st.lat[s] * nlon + jj];
                acc += st.w[s] * (st.flip[s] ? parity * v : v);
            }
            out[i * nlon + j] = acc;
        }
    }
}

// d/dphi, fourth-order central on the periodic longitude grid.
void phi_derivative(const Manifold& m, std::span<const double> f, std::span<double> out) {
    const int nlat = m.nx(), nlon = m.ny();
    const double h = 2.0 * M_PI / nlon;
    for (int i = 0; i < nlat; i++) {
        const int base = i * nlon;
        for (int j = 0; j < nlon; j++) {
            int jm2 = (j + nlon - 2) % nlon, jm1 = (j + nlon - 1) % nlon;
            int jp1 = (j + 1) % nlon, jp2 = (j + 2) % nlon;
            out[base + j] = (8.0 * (f[base + jp1] - f[base + jm1]) -
                             (f[base + jp2] - f[base + jm2])) / (12.0 * h);
        }
    }
}

struct Partials {
    VectorField dtheta, dphi;
    Partials(const ManifoldPtr& m) : dtheta(m), dphi(m) {}
};

Partials partials(const VectorField& u) {
    Partials p(u.manifold_ptr());
    for (int c = 0; c < 3; c++) {
        theta_derivative(u.manifold(), u.comp(c), p.dtheta.comp(c));
        phi_derivative(u.manifold(), u.comp(c), p.dphi.comp(c));
    }
    return p;
}

inline void project_at(const Manifold& m, int node, double v[3]) {
    auto p = m.point(node);
    double d = v[0] * p[0] + v[1] * p[1] + v[2] * p[2];
    for (int c = 0; c < 3; c++) v[c] -= d * p[c];
}

// cov_{e_theta} u and cov_{e_phi-hat} u on the whole grid.
void frame_derivatives(const VectorField& u, VectorField& dth, VectorField& dph_unit) {
    const Manifold& m = u.manifold();
    Partials p = partials(u);
    const int nlon = m.ny();
    for (int node = 0; node < u.nodes(); node++) {
        const double st = m.sin_theta(node / nlon);
        double a[3], b[3];
        for (int c = 0; c < 3; c++) {
            a[c] = p.dtheta.value(node, c);
            b[c] = p.dphi.value(node, c) / st;
        }
        project_at(m, node, a);
        project_at(m, node, b);
        for (int c = 0; c < 3; c++) {
            dth.value(node, c) = a[c];
            dph_unit.value(node, c) = b[c];
        }
    }
}

} // namespace

VectorField covariant_derivative(const VectorField& direction, const VectorField& field) {
    if (direction.tangency_defect() > 1e-8)
        throw std::domain_error("covariant_derivative: direction is not tangent");
    const Manifold& m = field.manifold();
    Partials p = partials(field);
    VectorField out(field.manifold_ptr());
    const int nlon = m.ny();
    for (int node = 0; node < field.nodes(); node++) {
        const double st = m.sin_theta(node / nlon);
        auto eth = m.frame_theta(node);
        auto eph = m.frame_phi(node);
        double a = 0.0, b = 0.0;  // direction = a e_theta + b e_phi-hat
        for (int c = 0; c < 3; c++) {
            a += direction.value(node, c) * eth[c];
            b += direction.value(node, c) * eph[c];
        }
        double v[3];
        for (int c = 0; c < 3; c++)
            v[c] = a * p.dtheta.value(node, c) + (b / st) * p.dphi.value(node, c);
        project_at(m, node, v);
        for (int c = 0; c < 3; c++) out.value(node, c) = v[c];
    }
    return out;
}

ScalarField divergence(const VectorField& u) {
    const Manifold& m = u.manifold();
    Partials p = partials(u);
    ScalarField out(u.manifold_ptr());
    const int nlon = m.ny();
    for (int node = 0; node < u.nodes(); node++) {
        const double st = m.sin_theta(node / nlon);
        auto eth = m.frame_theta(node);
        auto eph = m.frame_phi(node);
        double acc = 0.0;
        for (int c = 0; c < 3; c++) {
            acc += p.dtheta.value(node, c) * eth[c];
            acc += p.dphi.value(node, c) * eph[c] / st;
        }
        out[node] = acc;
    }
    return out;
}

VectorField gradient(const ScalarField& f) {
    const Manifold& m = f.manifold();
    const int n = f.size(), nlon = m.ny();
    std::vector<double> ft(n), fp(n);
    theta_derivative(m, f.values(), ft);
    phi_derivative(m, f.values(), fp);
    VectorField out(f.manifold_ptr());
    for (int node = 0; node < n; node++) {
        const double st = m.sin_theta(node / nlon);
        auto eth = m.frame_theta(node);
        auto eph = m.frame_phi(node);
        for (int c = 0; c < 3; c++)
            out.value(node, c) = ft[node] * eth[c] + (fp[node] / st) * eph[c];
    }
    return out;
}

TensorField11 covariant_gradient(const VectorField& u) {
    const Manifold& m = u.manifold();
    VectorField dth(u.manifold_ptr()), dph(u.manifold_ptr());
    frame_derivatives(u, dth, dph);
    TensorField11 out(u.manifold_ptr());
    for (int node = 0; node < u.nodes(); node++) {
        auto eth = m.frame_theta(node);
        auto eph = m.frame_phi(node);
        // A = (cov_theta u) x e_theta + (cov_phihat u) x e_phihat
        for (int i = 0; i < 3; i++)
            for (int j = 0; j < 3; j++)
                out.entry(node, i, j) =
                    dth.value(node, i) * eth[j] + dph.value(node, i) * eph[j];
    }
    return out;
}

VectorField rough_laplacian(const VectorField& u) {
    const Manifold& m = u.manifold();
    const int nlon = m.ny();

    // V = cov_{e_theta} u, W = cov_{e_phi} u (coordinate frame, not unit).
    VectorField V(u.manifold_ptr()), W(u.manifold_ptr());
    {
        Partials p = partials(u);
        for (int node = 0; node < u.nodes(); node++) {
            double a[3], b[3];
            for (int c = 0; c < 3; c++) {
                a[c] = p.dtheta.value(node, c);
                b[c] = p.dphi.value(node, c);
            }
            project_at(m, node, a);
            project_at(m, node, b);
            for (int c = 0; c < 3; c++) {
                V.value(node, c) = a[c];
                W.value(node, c) = b[c];
            }
        }
    }
    // V is contracted with e_theta, which is odd across the pole.
    VectorField dth_V(u.manifold_ptr()), dph_W(u.manifold_ptr());
    for (int c = 0; c < 3; c++) {
        theta_derivative(m, V.comp(c), dth_V.comp(c), -1.0);
        phi_derivative(m, W.comp(c), dph_W.comp(c));
    }

    VectorField out(u.manifold_ptr());
    for (int node = 0; node < u.nodes(); node++) {
        const int ilat = node / nlon;
        const double st = m.sin_theta(ilat), ct = m.cos_theta(ilat);
        double v[3];
        // cov_th cov_th u + (1/sin^2) cov_ph cov_ph u + cot(th) cov_th u
        double t1[3], t2[3];
        for (int c = 0; c < 3; c++) {
            t1[c] = dth_V.value(node, c);
            t2[c] = dph_W.value(node, c);
        }
        project_at(m, node, t1);
        project_at(m, node, t2);
        for (int c = 0; c < 3; c++)
            v[c] = t1[c] + t2[c] / (st * st) + (ct / st) * V.value(node, c);
        project_at(m, node, v);
        for (int c = 0; c < 3; c++) out.value(node, c) = v[c];
    }
    return out;
}

} // namespace sphere
} // namespace geometry
} // namespace lam
