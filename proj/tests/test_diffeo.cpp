#include <doctest.h>

#include "lam/diffeo.hpp"
#include "lam/geometry.hpp"
#include "lam/spectral.hpp"

#include <cmath>

using namespace lam;

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

ManifoldPtr s1(int n = 128) { return Manifold::circle(n); }
ManifoldPtr t2(int n = 32) { return Manifold::torus(n, n); }

Diffeo s1_sine_map(const ManifoldPtr& m, double amp, double phase = 0.0) {
    std::vector<double> d(m->node_count());
    for (int i = 0; i < m->node_count(); i++) d[i] = amp * std::sin(m->node_coord(i, 0) + phase);
    return Diffeo::from_displacement(m, std::move(d));
}

Diffeo t2_wave_map(const ManifoldPtr& m, double ax, double ay) {
    const int n = m->node_count();
    std::vector<double> d(static_cast<size_t>(2) * n);
    for (int i = 0; i < n; i++) {
        double x = m->node_coord(i, 0), y = m->node_coord(i, 1);
        d[i] = ax * std::sin(x) * std::cos(y);
        d[static_cast<size_t>(n) + i] = ay * std::cos(x + y);
    }
    return Diffeo::from_displacement(m, std::move(d));
}

} // namespace

TEST_CASE("identity and translations compose as a group") {
    auto m = s1();
    Diffeo id = Diffeo::identity(m);
    Diffeo a = Diffeo::translation(m, {0.4});
    Diffeo b = Diffeo::translation(m, {1.1});

    Diffeo ab = compose(a, b);
    for (int i = 0; i < ab.nodes(); i++)
        CHECK(ab.displacement(i, 0) == doctest::Approx(1.5).epsilon(1e-13));

    Diffeo ia = compose(a, id);
    for (int i = 0; i < ia.nodes(); i++)
        CHECK(ia.displacement(i, 0) == doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("composition is fourth-order accurate") {
    auto phi_fn = [](double x) { return x + 0.3 * std::sin(x); };
    auto psi_fn = [](double x) { return x + 0.2 * std::cos(2.0 * x); };
    std::vector<double> errs;
    std::vector<int> sizes = {32, 64, 128};
    for (int n : sizes) {
        auto m = s1(n);
        std::vector<double> dphi(n), dpsi(n);
        for (int i = 0; i < n; i++) {
            double x = m->node_coord(i, 0);
            dphi[i] = 0.3 * std::sin(x);
            dpsi[i] = 0.2 * std::cos(2.0 * x);
        }
        Diffeo phi = Diffeo::from_displacement(m, std::move(dphi));
        Diffeo psi = Diffeo::from_displacement(m, std::move(dpsi));
        Diffeo comp = compose(phi, psi);
        double worst = 0.0;
        for (int i = 0; i < n; i++) {
            double exact = phi_fn(psi_fn(m->node_coord(i, 0)));
            worst = std::max(worst, std::abs(m->node_coord(i, 0) + comp.displacement(i, 0) - exact));
        }
        errs.push_back(worst);
    }
    double rate = std::log2(errs[0] / errs[1]);
    CHECK(rate > 3.5);
    CHECK(rate < 4.6);
}

TEST_CASE("inversion residual on both manifolds") {
    SUBCASE("circle") {
        auto m = s1();
        Diffeo phi = s1_sine_map(m, 0.3);
        Diffeo inv = invert(phi);
        Diffeo round = compose(phi, inv);
        double worst = 0.0;
        for (int i = 0; i < round.nodes(); i++)
            worst = std::max(worst, std::abs(round.displacement(i, 0)));
        CHECK(worst < 1e-8);
    }
    SUBCASE("torus") {
        auto m = t2();
        Diffeo phi = t2_wave_map(m, 0.15, 0.1);
        Diffeo inv = invert(phi);
        Diffeo round = compose(phi, inv);
        double worst = 0.0;
        for (int i = 0; i < round.nodes(); i++)
            for (int c = 0; c < 2; c++) worst = std::max(worst, std::abs(round.displacement(i, c)));
        CHECK(worst < 1e-8);
    }
    SUBCASE("translations invert exactly") {
        auto m = s1();
        Diffeo inv = invert(Diffeo::translation(m, {0.7}));
        for (int i = 0; i < inv.nodes(); i++)
            CHECK(inv.displacement(i, 0) == doctest::Approx(-0.7).epsilon(1e-12));
    }
}

TEST_CASE("composition is associative within interpolation tolerance") {
    auto m = s1();
    Diffeo a = s1_sine_map(m, 0.2, 0.3);
    Diffeo b = s1_sine_map(m, 0.15, 1.1);
    Diffeo c = s1_sine_map(m, 0.1, 2.2);
    Diffeo left = compose(compose(a, b), c);
    Diffeo right = compose(a, compose(b, c));
    double worst = 0.0;
    for (int i = 0; i < left.nodes(); i++)
        worst = std::max(worst, std::abs(left.displacement(i, 0) - right.displacement(i, 0)));
    CHECK(worst < 1e-8);
}

TEST_CASE("monotonicity and folding are rejected") {
    auto m = s1(32);
    std::vector<double> d(32);
    for (int i = 0; i < 32; i++) d[i] = 1.2 * std::sin(m->node_coord(i, 0));
    CHECK_THROWS_AS(Diffeo::from_displacement(m, std::move(d)), std::domain_error);
}

TEST_CASE("flow of zero and constant fields") {
    auto m = s1();
    VelocityFn zero = [&](double) { return VectorField(m); };
    Diffeo id_flow = flow(m, zero, 1.0, 0.1);
    CHECK(id_flow.volume_distortion() < 1e-14);
    for (int i = 0; i < id_flow.nodes(); i++)
        CHECK(id_flow.displacement(i, 0) == doctest::Approx(0.0).epsilon(1e-15));

    VelocityFn c = [&](double) {
        VectorField u(m);
        for (int i = 0; i < u.nodes(); i++) u.comp(0)[i] = 0.8;
        return u;
    };
    Diffeo shift = flow(m, c, 2.0, 0.05);
    for (int i = 0; i < shift.nodes(); i++)
        CHECK(shift.displacement(i, 0) == doctest::Approx(1.6).epsilon(1e-12));
}

TEST_CASE("flow converges at fourth order in dt") {
    auto m = s1(64);
    VelocityFn u = [&](double t) {
        VectorField v(m);
        for (int i = 0; i < v.nodes(); i++) v.comp(0)[i] = std::sin(m->node_coord(i, 0) - t);
        return v;
    };
    std::vector<double> dts = {0.2, 0.1, 0.05}, errs;
    Diffeo ref = flow(m, u, 1.0, 0.003125);
    for (double dt : dts) {
        Diffeo d = flow(m, u, 1.0, dt);
        double worst = 0.0;
        for (int i = 0; i < d.nodes(); i++)
            worst = std::max(worst, std::abs(d.displacement(i, 0) - ref.displacement(i, 0)));
        errs.push_back(worst);
    }
    double slope = std::log(errs[0] / errs[2]) / std::log(dts[0] / dts[2]);
    CHECK(slope > 3.8);
    CHECK(slope < 4.2);
}

TEST_CASE("geodesic step: trivial cases and the distance identity") {
    auto m = s1();
    Diffeo phi = s1_sine_map(m, 0.2);
    VectorField w(m);
    for (int i = 0; i < w.nodes(); i++) w.comp(0)[i] = std::cos(m->node_coord(i, 0));

    SUBCASE("eps = 0 returns the base") {
        Diffeo same = exp_map(phi, w, 0.0);
        for (int i = 0; i < same.nodes(); i++)
            CHECK(same.displacement(i, 0) == doctest::Approx(phi.displacement(i, 0)).epsilon(1e-15));
    }
    SUBCASE("constant field on the identity is a shift") {
        VectorField c(m);
        for (int i = 0; i < c.nodes(); i++) c.comp(0)[i] = 0.5;
        Diffeo shifted = exp_map(Diffeo::identity(m), c, 0.3);
        for (int i = 0; i < shifted.nodes(); i++)
            CHECK(shifted.displacement(i, 0) == doctest::Approx(0.15).epsilon(1e-14));
    }
    SUBCASE("geodesics are straight: distance equals eps times material norm") {
        const double eps = 0.07;
        Diffeo tip = exp_map(phi, w, eps);
        double acc = 0.0;
        for (int i = 0; i < phi.nodes(); i++) {
            double img = phi.image(i, 0);
            acc += m->weight(i) * std::cos(img) * std::cos(img);
        }
        double material = std::sqrt(acc);
        CHECK(distance(phi, tip) == doctest::Approx(eps * material).epsilon(1e-6));
    }
}

TEST_CASE("log map: shifts, round trip, and injectivity errors") {
    auto m = s1();
    SUBCASE("log of a shift is the constant field") {
        Diffeo shifted = Diffeo::translation(m, {0.9});
        VectorField w = log_map(Diffeo::identity(m), shifted);
        for (int i = 0; i < w.nodes(); i++)
            CHECK(w.comp(0)[i] == doctest::Approx(0.9).epsilon(1e-12));
    }
    SUBCASE("identity log is zero") {
        Diffeo phi = s1_sine_map(m, 0.25);
        CHECK(sup_norm(log_map(phi, phi)) < 1e-14);
    }
    SUBCASE("exp after log returns the target from the identity base") {
        Diffeo psi = s1_sine_map(m, 0.2, 0.7);
        VectorField w = log_map(Diffeo::identity(m), psi);
        Diffeo back = exp_map(Diffeo::identity(m), w, 1.0);
        double worst = 0.0;
        for (int i = 0; i < back.nodes(); i++)
            worst = std::max(worst, std::abs(back.displacement(i, 0) - psi.displacement(i, 0)));
        CHECK(worst < 1e-10);
    }
    SUBCASE("generic base round trip at interpolation accuracy") {
        Diffeo phi = s1_sine_map(m, 0.15);
        Diffeo psi = s1_sine_map(m, 0.12, 1.3);
        VectorField w = log_map(phi, psi);
        Diffeo back = exp_map(phi, w, 1.0);
        double worst = 0.0;
        for (int i = 0; i < back.nodes(); i++)
            worst = std::max(worst, std::abs(back.displacement(i, 0) - psi.displacement(i, 0)));
        CHECK(worst < 1e-8);
    }
    SUBCASE("out-of-range displacement is rejected") {
        CHECK_THROWS_AS(log_map(Diffeo::identity(m), Diffeo::translation(m, {M_PI})),
                        std::domain_error);
    }
}

TEST_CASE("winding displacements are rejected") {
    auto m = s1();
    // Smooth lift that crosses the branch cut: wrapping makes it jump.
    std::vector<double> d(m->node_count());
    for (int i = 0; i < m->node_count(); i++)
        d[i] = 2.5 + 0.9 * std::sin(m->node_coord(i, 0));  // range [1.6, 3.4] spans pi
    Diffeo psi = Diffeo::from_displacement(m, std::move(d));
    CHECK_THROWS_AS(log_map(Diffeo::identity(m), psi), std::domain_error);
}

TEST_CASE("argument validation") {
    auto m = s1();
    CHECK_THROWS_AS(flow(m, [&](double) { return VectorField(m); }, 1.0, 0.0),
                    std::invalid_argument);
    VectorField w(Manifold::circle(64));
    CHECK_THROWS_AS(exp_map(Diffeo::identity(m), w, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(Diffeo::identity(Manifold::sphere(8, 8)), std::invalid_argument);
}

TEST_CASE("distance properties") {
    auto m = s1();
    Diffeo id = Diffeo::identity(m);
    Diffeo a = Diffeo::translation(m, {0.8});
    CHECK(distance(id, id) == 0.0);
    CHECK(distance(id, a) == doctest::Approx(0.8 * std::sqrt(kTwoPi)).epsilon(1e-12));
    Diffeo b = s1_sine_map(m, 0.2);
    CHECK(distance(a, b) == doctest::Approx(distance(b, a)).epsilon(1e-12));
    CHECK(distance(id, a) <= distance(id, b) + distance(b, a) + 1e-10);
}

TEST_CASE("exp solves the geodesic transport system") {
    // Oracle: integrate w' + cov_w w = 0, eta' = w(eta) with RK4 and
    // compare against the free-flight closed form.
    auto m = s1(128);
    VectorField w0(m);
    for (int i = 0; i < w0.nodes(); i++) w0.comp(0)[i] = 0.3 * std::sin(m->node_coord(i, 0));
    const double eps = 0.25;

    const int n = m->node_count();
    std::vector<double> w = {w0.comp(0).begin(), w0.comp(0).end()};
    std::vector<double> eta(n);
    for (int i = 0; i < n; i++) eta[i] = m->node_coord(i, 0);

    const int steps = 64;
    const double h = eps / steps;
    auto rhs = [&](const std::vector<double>& ws, const std::vector<double>& es,
                   std::vector<double>& dw, std::vector<double>& de) {
        std::vector<double> wx(n);
        spectral::derivative_1d(ws, wx, 1);
        for (int i = 0; i < n; i++) dw[i] = -ws[i] * wx[i];
        PeriodicSpline1D s(ws, kTwoPi);
        for (int i = 0; i < n; i++) de[i] = s(es[i]);
    };
    std::vector<double> k1w(n), k1e(n), k2w(n), k2e(n), k3w(n), k3e(n), k4w(n), k4e(n), tw(n), te(n);
    for (int s = 0; s < steps; s++) {
        rhs(w, eta, k1w, k1e);
        for (int i = 0; i < n; i++) {
            tw[i] = w[i] + 0.5 * h * k1w[i];
            te[i] = eta[i] + 0.5 * h * k1e[i];
        }
        rhs(tw, te, k2w, k2e);
        for (int i = 0; i < n; i++) {
            tw[i] = w[i] + 0.5 * h * k2w[i];
            te[i] = eta[i] + 0.5 * h * k2e[i];
        }
        rhs(tw, te, k3w, k3e);
        for (int i = 0; i < n; i++) {
            tw[i] = w[i] + h * k3w[i];
            te[i] = eta[i] + h * k3e[i];
        }
        rhs(tw, te, k4w, k4e);
        for (int i = 0; i < n; i++) {
            w[i] += h / 6.0 * (k1w[i] + 2 * k2w[i] + 2 * k3w[i] + k4w[i]);
            eta[i] += h / 6.0 * (k1e[i] + 2 * k2e[i] + 2 * k3e[i] + k4e[i]);
        }
    }

    Diffeo free_flight = exp_map(Diffeo::identity(m), w0, eps);
    double worst = 0.0;
    for (int i = 0; i < n; i++)
        worst = std::max(worst,
                         std::abs(eta[i] - (m->node_coord(i, 0) + free_flight.displacement(i, 0))));
    CHECK(worst < 1e-8);
}

TEST_CASE("flow/velocity duality") {
    auto m = s1(128);
    VelocityFn u = [&](double t) {
        VectorField v(m);
        for (int i = 0; i < v.nodes(); i++)
            v.comp(0)[i] = 0.5 * std::sin(m->node_coord(i, 0)) + 0.2 * std::cos(t);
        return v;
    };
    const double t = 0.5;
    std::vector<double> dts = {1e-2, 5e-3}, errs;
    for (double dt : dts) {
        Diffeo eta_t = flow(m, u, t, 1e-3);
        Diffeo eta_dt = flow(m, u, t + dt, 1e-3);
        Diffeo inv = invert(eta_t);
        VectorField expected = u(t);
        const int n = m->node_count();
        std::vector<double> rate(n);
        for (int i = 0; i < n; i++)
            rate[i] = (eta_dt.displacement(i, 0) - eta_t.displacement(i, 0)) / dt;
        PeriodicSpline1D s(rate, kTwoPi);
        double worst = 0.0;
        for (int i = 0; i < n; i++)
            worst = std::max(worst, std::abs(s(inv.image(i, 0)) - expected.comp(0)[i]));
        errs.push_back(worst);
    }
    CHECK(errs[1] < 0.75 * errs[0]);  // first order in dt
    CHECK(errs[1] < 5e-3);
}

TEST_CASE("sample_flow records maps and velocities") {
    auto m = t2();
    VelocityFn u = [&](double) {
        VectorField v(m);
        for (int i = 0; i < v.nodes(); i++) v.value(i, 0) = std::sin(m->node_coord(i, 1));
        return v;
    };
    FlowPath path = sample_flow(m, u, {0.0, 0.01, 0.02}, 0.0025);
    CHECK(path.size() == 3);
    CHECK(path.maps[0].volume_distortion() < 1e-14);
    // Shear flow: x-displacement equals t sin(y) exactly.
    double worst = 0.0;
    for (int i = 0; i < m->node_count(); i++)
        worst = std::max(worst, std::abs(path.maps[2].displacement(i, 0) -
                                         0.02 * std::sin(m->node_coord(i, 1))));
    CHECK(worst < 1e-12);
}
