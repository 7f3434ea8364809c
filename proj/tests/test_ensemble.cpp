#include <doctest.h>

#include "lam/ensemble.hpp"
#include "lam/geometry.hpp"
#include "lam/spectral.hpp"

#include <cmath>

using namespace lam;

namespace {

double covariance_defect(const FluctuationEnsemble& e) {
    TensorField11 cov = covariance(e);
    const Manifold& m = *e.manifold;
    double worst = 0.0;
    for (int node = 0; node < cov.nodes(); node++)
        for (int i = 0; i < cov.dim(); i++)
            for (int j = 0; j < cov.dim(); j++) {
                double target = i == j ? 1.0 : 0.0;
                if (m.kind() == ManifoldKind::SphereS2) {
                    auto p = m.point(node);
                    target -= p[i] * p[j];
                }
                worst = std::max(worst, std::abs(cov.entry(node, i, j) - target));
            }
    return worst;
}

} // namespace

TEST_CASE("deterministic ensembles are exactly isotropic") {
    SUBCASE("circle") {
        auto e = deterministic_isotropic(Manifold::circle(32));
        e.validate();
        CHECK(covariance_defect(e) < 1e-15);
    }
    SUBCASE("torus") {
        auto e = deterministic_isotropic(Manifold::torus(16, 16));
        e.validate();
        CHECK(covariance_defect(e) < 1e-15);
        VectorField mean(e.manifold);
        for (int b = 0; b < e.size(); b++) axpy(e.weights[b], e.members[b], mean);
        CHECK(sup_norm(mean) == 0.0);
    }
    SUBCASE("sphere members are tangent divergence-free rotations") {
        auto e = deterministic_isotropic(Manifold::sphere(24, 48));
        e.validate();
        CHECK(covariance_defect(e) < 1e-12);
        for (const VectorField& w : e.members) {
            CHECK(w.tangency_defect() < 1e-13);
            CHECK(sup_norm(geometry::divergence(w)) < 1e-6);
        }
    }
}

TEST_CASE("single-member covariance is the outer product") {
    auto m = Manifold::torus(16, 16);
    FluctuationEnsemble e;
    e.manifold = m;
    VectorField w(m);
    for (int i = 0; i < w.nodes(); i++) {
        w.value(i, 0) = std::sin(m->node_coord(i, 1));
        w.value(i, 1) = 0.5;
    }
    e.members.push_back(w);
    e.weights.push_back(1.0);
    TensorField11 cov = covariance(e);
    for (int i = 0; i < cov.nodes(); i++) {
        CHECK(cov.entry(i, 0, 0) == doctest::Approx(w.value(i, 0) * w.value(i, 0)));
        CHECK(cov.entry(i, 0, 1) == doctest::Approx(w.value(i, 0) * w.value(i, 1)));
    }
}

TEST_CASE("random ensembles: determinism, centering, divergence-free variant") {
    auto m = Manifold::torus(24, 24);
    SUBCASE("same seed gives bit-identical members") {
        auto a = random_isotropic(m, 16, 42, {});
        auto b = random_isotropic(m, 16, 42, {});
        for (int k = 0; k < a.size(); k++) CHECK(sup_norm(a.members[k] - b.members[k]) == 0.0);
    }
    SUBCASE("recentred mean vanishes") {
        auto e = random_isotropic(m, 33, 7, {});
        e.validate();
    }
    SUBCASE("transverse members are divergence-free") {
        auto e = random_isotropic(m, 8, 3, {.divergence_free = true});
        for (const VectorField& w : e.members)
            CHECK(sup_norm(geometry::divergence(w)) < 1e-10);
    }
    SUBCASE("stratified phases give exact empirical covariance") {
        auto e = random_isotropic(m, 64, 5, {.divergence_free = true,
                                             .phase = PhaseSampling::Stratified});
        e.validate();
        CHECK(covariance_defect(e) < 1e-12);
    }
}

TEST_CASE("random covariance error decays like N^{-1/2}") {
    auto m = Manifold::torus(16, 16);
    std::vector<double> counts = {16, 64, 256, 1024}, errs;
    for (double c : counts) {
        double acc = 0.0;
        const int reps = 3;
        for (int r = 0; r < reps; r++)
            acc += covariance_defect(random_isotropic(m, static_cast<int>(c), 100 + 1000 * r, {}));
        errs.push_back(acc / reps);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < counts.size(); i++) {
        double x = std::log(counts[i]), y = std::log(errs[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double slope = (counts.size() * sxy - sx * sy) / (counts.size() * sxx - sx * sx);
    CHECK(slope > -0.65);
    CHECK(slope < -0.35);
}

TEST_CASE("taylor transport") {
    SUBCASE("zero velocity leaves the field frozen") {
        auto m = Manifold::circle(64);
        VectorField w0(m);
        for (int i = 0; i < w0.nodes(); i++) w0.comp(0)[i] = std::sin(m->node_coord(i, 0));
        VelocityFn zero = [&](double) { return VectorField(m); };
        FlowPath path = sample_flow(m, zero, {0.0, 0.5, 1.0}, 0.05);
        auto wt = taylor_transport(w0, path);
        for (const auto& w : wt) CHECK(sup_norm(w - w0) < 1e-12);
    }
    SUBCASE("translation flow advects the profile") {
        auto m = Manifold::circle(128);
        VectorField w0(m);
        for (int i = 0; i < w0.nodes(); i++) w0.comp(0)[i] = std::sin(m->node_coord(i, 0));
        const double c = 0.7, T = 0.9;
        VelocityFn u = [&](double) {
            VectorField v(m);
            for (int i = 0; i < v.nodes(); i++) v.comp(0)[i] = c;
            return v;
        };
        FlowPath path = sample_flow(m, u, {0.0, T}, 0.05);
        auto wt = taylor_transport(w0, path);
        double worst = 0.0;
        for (int i = 0; i < m->node_count(); i++)
            worst = std::max(worst, std::abs(wt[1].comp(0)[i] -
                                             std::sin(m->node_coord(i, 0) - c * T)));
        CHECK(worst < 1e-8);  // cubic-spline resampling floor
    }
    SUBCASE("matches direct integration of the transport closure") {
        // Oracle: RK4 for wdot = -[u, w] on the grid, shear flow on T2.
        auto m = Manifold::torus(48, 48);
        VectorField w0(m);
        for (int i = 0; i < w0.nodes(); i++) {
            w0.value(i, 0) = 0.3 * std::cos(m->node_coord(i, 0));
            w0.value(i, 1) = 0.2 * std::sin(m->node_coord(i, 1));
        }
        VectorField u(m);
        for (int i = 0; i < u.nodes(); i++) u.value(i, 0) = std::sin(m->node_coord(i, 1));
        VelocityFn ufn = [&](double) { return u; };

        const double T = 0.4;
        FlowPath path = sample_flow(m, ufn, {0.0, T}, 0.01);
        auto wt = taylor_transport(w0, path);

        VectorField w = w0;
        const int steps = 400;
        const double h = T / steps;
        for (int s = 0; s < steps; s++) {
            auto rhs = [&](const VectorField& f) { return (-1.0) * geometry::lie_bracket(u, f); };
            VectorField k1 = rhs(w);
            VectorField w2 = w;
            axpy(0.5 * h, k1, w2);
            VectorField k2 = rhs(w2);
            VectorField w3 = w;
            axpy(0.5 * h, k2, w3);
            VectorField k3 = rhs(w3);
            VectorField w4 = w;
            axpy(h, k3, w4);
            VectorField k4 = rhs(w4);
            axpy(h / 6.0, k1, w);
            axpy(h / 3.0, k2, w);
            axpy(h / 3.0, k3, w);
            axpy(h / 6.0, k4, w);
        }
        CHECK(sup_norm(wt[1] - w) < 1e-6);  // interpolation floor at this grid
    }
    SUBCASE("pushforward relation holds at the nodes") {
        auto m = Manifold::torus(48, 48);
        VectorField w0(m);
        for (int i = 0; i < w0.nodes(); i++) w0.value(i, 1) = std::cos(m->node_coord(i, 0));
        VectorField u(m);
        for (int i = 0; i < u.nodes(); i++) u.value(i, 0) = std::sin(m->node_coord(i, 1));
        FlowPath path = sample_flow(m, [&](double) { return u; }, {0.0, 0.3}, 0.01);
        auto wt = taylor_transport(w0, path);

        // w(t) o eta = Deta . w0, checked by evaluating w(t) at eta(x).
        const Diffeo& eta = path.maps[1];
        TensorField11 J = eta.jacobian();
        PeriodicSpline2D sx(wt[1].comp(0), 48, 48, 2 * M_PI, 2 * M_PI);
        PeriodicSpline2D sy(wt[1].comp(1), 48, 48, 2 * M_PI, 2 * M_PI);
        double worst = 0.0;
        for (int i = 0; i < m->node_count(); i++) {
            double img0 = eta.image(i, 0), img1 = eta.image(i, 1);
            double expect0 = J.entry(i, 0, 0) * w0.value(i, 0) + J.entry(i, 0, 1) * w0.value(i, 1);
            double expect1 = J.entry(i, 1, 0) * w0.value(i, 0) + J.entry(i, 1, 1) * w0.value(i, 1);
            worst = std::max(worst, std::abs(sx(img0, img1) - expect0));
            worst = std::max(worst, std::abs(sy(img0, img1) - expect1));
        }
        CHECK(worst < 5e-6);  // two interpolation layers
    }
}

TEST_CASE("invalid ensembles are rejected") {
    auto m = Manifold::torus(16, 16);
    CHECK_THROWS_AS(random_isotropic(m, 1, 0, {}), std::invalid_argument);
    CHECK_THROWS_AS(random_isotropic(Manifold::sphere(16, 32), 8, 0, {.divergence_free = true}),
                    std::invalid_argument);
    FluctuationEnsemble bad;
    bad.manifold = m;
    bad.members.push_back(VectorField(m));
    bad.weights.push_back(0.5);  // does not sum to 1
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
}
