#include "lam/average.hpp"

#include "lam/geometry.hpp"
#include "lam/interp.hpp"

#include <cmath>
#include <stdexcept>

namespace lam {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Eulerian velocity of a discrete path at sample s by centered time
// differences of the map, composed with the inverse of the center map.
VectorField eulerian_velocity(const Diffeo& before, const Diffeo& center, const Diffeo& after,
                              double dt) {
    const Manifold& m = center.manifold();
    const int n = center.nodes(), dim = center.dim();
    std::vector<double> mat(static_cast<size_t>(n) * dim);
    for (int c = 0; c < dim; c++)
        for (int i = 0; i < n; i++)
            mat[static_cast<size_t>(c) * n + i] =
                (after.displacement(i, c) - before.displacement(i, c)) / (2.0 * dt);

    Diffeo inv = invert(center);
    VectorField u(center.manifold_ptr());
    if (m.kind() == ManifoldKind::CircleS1) {
        PeriodicSpline1D s(std::span<const double>(mat.data(), n), kTwoPi);
        for (int i = 0; i < n; i++) u.comp(0)[i] = s(inv.image(i, 0));
    } else {
        for (int c = 0; c < dim; c++) {
            PeriodicSpline2D s(std::span<const double>(mat.data() + static_cast<size_t>(c) * n, n),
                               m.nx(), m.ny(), kTwoPi, kTwoPi);
            for (int i = 0; i < n; i++)
                u.comp(c)[i] = s(inv.image(i, 0), inv.image(i, 1));
        }
    }
    return u;
}

} // namespace

Realization realization_flow(const FlowPath& path, const std::vector<VectorField>& fluctuation,
                             double eps) {
    if (path.size() < 3) throw std::invalid_argument("realization_flow: need at least 3 samples");
    if (static_cast<int>(fluctuation.size()) != path.size())
        throw std::invalid_argument("realization_flow: fluctuation path length mismatch");

    Realization r;
    r.maps.reserve(path.size());
    for (int s = 0; s < path.size(); s++)
        r.maps.push_back(exp_map(path.maps[s], fluctuation[s], eps));
    for (int s = 1; s + 1 < path.size(); s++) {
        double dt = 0.5 * (path.times[s + 1] - path.times[s - 1]);
        r.velocities.push_back(eulerian_velocity(r.maps[s - 1], r.maps[s], r.maps[s + 1], dt));
    }
    return r;
}

ExpansionCoefficients expansion_coefficients(const EpsilonSamples& s, bool richardson) {
    const double e = s.eps;
    if (e <= 0.0) throw std::invalid_argument("expansion_coefficients: eps must be positive");

    auto d1 = [&](const VectorField& p, const VectorField& q, double h) {
        VectorField r = p - q;
        return (1.0 / (2.0 * h)) * r;
    };
    auto d2 = [&](const VectorField& p, const VectorField& c, const VectorField& q, double h) {
        VectorField r = p - c;
        axpy(-1.0, c, r);
        axpy(1.0, q, r);
        return (1.0 / (h * h)) * r;
    };

    VectorField first = d1(s.plus, s.minus, e);
    VectorField second = d2(s.plus, s.center, s.minus, e);
    if (richardson) {
        VectorField first_h = d1(s.plus_half, s.minus_half, e / 2.0);
        VectorField second_h = d2(s.plus_half, s.center, s.minus_half, e / 2.0);
        first = (1.0 / 3.0) * ((4.0 * first_h) - first);
        second = (1.0 / 3.0) * ((4.0 * second_h) - second);
    }
    return {std::move(first), std::move(second)};
}

VectorField u_second_analytic(const VectorField& u, const VectorField& w) {
    using namespace geometry;
    VectorField convective = covariant_derivative(covariant_derivative(w, w), u);
    VectorField second_dir = covariant_derivative(w, covariant_derivative(w, u));
    VectorField out = convective - second_dir;
    if (u.manifold().kind() == ManifoldKind::SphereS2)
        axpy(-1.0, riemann(u, w, w), out);
    return out;
}

LagrangianReport averaged_lagrangian_empirical(const VectorField& u,
                                               const FluctuationEnsemble& ensemble,
                                               double eps, AveragingMode mode,
                                               const FlowPath* path) {
    using namespace geometry;
    if (!same_grid(u.manifold(), *ensemble.manifold))
        throw std::invalid_argument("averaged_lagrangian_empirical: manifold mismatch");

    LagrangianReport rep;
    rep.epsilon = eps;
    rep.ensemble_size = ensemble.size();
    rep.L0 = 0.5 * inner_product(u, u);
    rep.L2_closed = -inner_product(laplacian(u, LaplacianKind::Ricci), u);
    rep.Lbar_closed = rep.L0 + 0.5 * eps * eps * rep.L2_closed;

    if (mode == AveragingMode::AnalyticSecond) {
        double l2 = 0.0;
        for (int b = 0; b < ensemble.size(); b++)
            l2 += ensemble.weights[b] * inner_product(u, u_second_analytic(u, ensemble.members[b]));
        rep.L1 = 0.0;
        rep.L2_empirical = l2;
    } else {
        if (path == nullptr || path->size() < 3 || path->size() % 2 == 0)
            throw std::invalid_argument(
                "averaged_lagrangian_empirical: FiniteEps needs an odd-length path (>= 3 samples)");
        const int mid = path->size() / 2;
        double l1 = 0.0, l2 = 0.0;
        for (int b = 0; b < ensemble.size(); b++) {
            std::vector<VectorField> wt = taylor_transport(ensemble.members[b], *path);
            auto velocity_at = [&](double e) {
                return realization_flow(*path, wt, e).velocities[mid - 1];
            };
            EpsilonSamples samples{eps, velocity_at(0.0), velocity_at(eps), velocity_at(-eps),
                                   velocity_at(eps / 2.0), velocity_at(-eps / 2.0)};
            ExpansionCoefficients coef = expansion_coefficients(samples, /*richardson=*/false);
            l1 += ensemble.weights[b] * inner_product(u, coef.first);
            l2 += ensemble.weights[b] *
                  (inner_product(coef.first, coef.first) + inner_product(u, coef.second));
        }
        rep.L1 = l1;
        rep.L2_empirical = l2;
    }
    rep.Lbar_empirical = rep.L0 + eps * rep.L1 + 0.5 * eps * eps * rep.L2_empirical;

    rep.identity_residuals["curvature_term"] = identity_curvature_term(u, ensemble).residual;
    rep.identity_residuals["laplacian_term"] = identity_laplacian_term(u, ensemble).residual;
    if (u.manifold().kind() == ManifoldKind::TorusT2 && sup_norm(divergence(u)) <= 1e-8) {
        bool solenoidal = true;
        for (const VectorField& w : ensemble.members)
            if (sup_norm(divergence(w)) > 1e-8) solenoidal = false;
        if (solenoidal)
            rep.identity_residuals["pressure_term"] =
                std::abs(pressure_term_contribution(u, ensemble).mean);
    }
    return rep;
}

double averaged_lagrangian_closed(const VectorField& u, double eps) {
    using namespace geometry;
    return 0.5 * inner_product(u, u) -
           0.5 * eps * eps * inner_product(laplacian(u, LaplacianKind::Ricci), u);
}

CurvatureIdentity identity_curvature_term(const VectorField& u, const FluctuationEnsemble& e) {
    using namespace geometry;
    ScalarField field(u.manifold_ptr());
    for (int b = 0; b < e.size(); b++) {
        ScalarField term = metric_inner(riemann(u, e.members[b], e.members[b]), u);
        for (int i = 0; i < field.size(); i++) field[i] += e.weights[b] * term[i];
    }
    ScalarField ric = ricci(u, u);
    double worst = 0.0;
    for (int i = 0; i < field.size(); i++) worst = std::max(worst, std::abs(field[i] - ric[i]));
    return {std::move(field), worst};
}

LaplacianIdentity identity_laplacian_term(const VectorField& u, const FluctuationEnsemble& e) {
    using namespace geometry;
    VectorField field(u.manifold_ptr());
    for (int b = 0; b < e.size(); b++) {
        const VectorField& w = e.members[b];
        VectorField term = covariant_derivative(w, covariant_derivative(w, u)) -
                           covariant_derivative(covariant_derivative(w, w), u);
        axpy(e.weights[b], term, field);
    }
    VectorField rough = laplacian(u, LaplacianKind::Rough);
    double worst = sup_norm(field - rough);
    return {std::move(field), worst};
}

PressureTermResult pressure_term_contribution(const VectorField& u, const FluctuationEnsemble& e) {
    using namespace geometry;
    if (u.manifold().kind() != ManifoldKind::TorusT2)
        throw std::invalid_argument("pressure_term_contribution: T2 only");
    if (sup_norm(divergence(u)) > 1e-8)
        throw std::domain_error("pressure_term_contribution: u must be divergence-free");
    for (const VectorField& w : e.members)
        if (sup_norm(divergence(w)) > 1e-8)
            throw std::domain_error("pressure_term_contribution: ensemble must be divergence-free");

    // Fixed field of the integrated-by-parts form:
    // v = grad poisson^{-1} div (cov_u u + grad |u|^2 / 2).
    VectorField b = covariant_derivative(u, u);
    ScalarField u2(u.manifold_ptr());
    for (int i = 0; i < u2.size(); i++) {
        double s = 0.0;
        for (int c = 0; c < u.dim(); c++) s += u.value(i, c) * u.value(i, c);
        u2[i] = 0.5 * s;
    }
    b = b + gradient(u2);
    VectorField v = gradient(poisson_solve(divergence(b)));

    PressureTermResult out;
    out.per_member.reserve(e.size());
    out.per_member_dual.reserve(e.size());
    for (int idx = 0; idx < e.size(); idx++) {
        const VectorField& w = e.members[idx];
        ScalarField phi = poisson_solve(divergence(covariant_derivative(w, w)));
        for (int i = 0; i < phi.size(); i++) phi[i] = -phi[i];
        VectorField grad_phi = gradient(phi);
        double direct = inner_product(lie_bracket(u, grad_phi), u);
        double dual = -inner_product(w, covariant_derivative(w, v));
        out.per_member.push_back(direct);
        out.per_member_dual.push_back(dual);
        out.mean += e.weights[idx] * direct;
        out.max_formula_gap = std::max(out.max_formula_gap, std::abs(direct - dual));
    }
    return out;
}

} // namespace lam
