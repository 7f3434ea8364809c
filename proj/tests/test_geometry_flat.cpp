#include <doctest.h>

#include "lam/experiments.hpp"
#include "lam/geometry.hpp"
#include "lam/manifold.hpp"

#include <cmath>
#include <thread>

using namespace lam;
using namespace lam::geometry;

namespace {

ManifoldPtr t2() {
    static ManifoldPtr m = Manifold::torus(32, 32);
    return m;
}
ManifoldPtr s1() {
    static ManifoldPtr m = Manifold::circle(64);
    return m;
}

VectorField t2_field(const ManifoldPtr& m, double (*fx)(double, double),
                     double (*fy)(double, double)) {
    VectorField u(m);
    for (int i = 0; i < u.nodes(); i++) {
        double x = m->node_coord(i, 0), y = m->node_coord(i, 1);
        u.value(i, 0) = fx(x, y);
        u.value(i, 1) = fy(x, y);
    }
    return u;
}

VectorField s1_field(const ManifoldPtr& m, double (*f)(double)) {
    VectorField u(m);
    for (int i = 0; i < u.nodes(); i++) u.comp(0)[i] = f(m->node_coord(i, 0));
    return u;
}

} // namespace

TEST_CASE("quadrature weights sum to the volume") {
    ScalarField one_t2(t2()), one_s1(s1());
    for (int i = 0; i < one_t2.size(); i++) one_t2[i] = 1.0;
    for (int i = 0; i < one_s1.size(); i++) one_s1[i] = 1.0;
    CHECK(integrate(one_t2) == doctest::Approx(4.0 * M_PI * M_PI).epsilon(1e-12));
    CHECK(integrate(one_s1) == doctest::Approx(2.0 * M_PI).epsilon(1e-12));
}

TEST_CASE("metric inner product of coordinate fields") {
    auto u = t2_field(t2(), [](double, double) { return 1.0; }, [](double, double) { return 0.0; });
    auto v = t2_field(t2(), [](double, double) { return 0.0; }, [](double, double) { return 1.0; });
    ScalarField g = metric_inner(u, v);
    CHECK(sup_norm(g) == 0.0);

    auto w = s1_field(s1(), [](double x) { return std::sin(x); });
    ScalarField g2 = metric_inner(w, w);
    for (int i = 0; i < g2.size(); i++) {
        double x = s1()->node_coord(i, 0);
        CHECK(g2[i] == doctest::Approx(std::sin(x) * std::sin(x)).epsilon(1e-14));
    }
}

TEST_CASE("integrate sin^2 over the circle") {
    auto w = s1_field(s1(), [](double x) { return std::sin(x); });
    CHECK(integrate(metric_inner(w, w)) == doctest::Approx(M_PI).epsilon(1e-13));
}

TEST_CASE("flat covariant derivative is the directional derivative") {
    auto u = s1_field(s1(), [](double x) { return std::cos(x); });
    auto one = s1_field(s1(), [](double) { return 1.0; });
    VectorField d = covariant_derivative(one, u);
    for (int i = 0; i < d.nodes(); i++)
        CHECK(d.comp(0)[i] == doctest::Approx(-std::sin(s1()->node_coord(i, 0))).epsilon(1e-12));

    auto w = t2_field(t2(), [](double, double) { return 1.0; }, [](double, double) { return 0.0; });
    auto f = t2_field(t2(), [](double x, double) { return std::sin(x); },
                      [](double, double) { return 0.0; });
    VectorField d2 = covariant_derivative(w, f);
    for (int i = 0; i < d2.nodes(); i++) {
        CHECK(d2.value(i, 0) == doctest::Approx(std::cos(t2()->node_coord(i, 0))).epsilon(1e-12));
        CHECK(d2.value(i, 1) == doctest::Approx(0.0).epsilon(1e-14));
    }
}

TEST_CASE("lie bracket coordinate example and antisymmetry") {
    auto u = t2_field(t2(), [](double, double) { return 1.0; }, [](double, double) { return 0.0; });
    auto w = t2_field(t2(), [](double, double) { return 0.0; },
                      [](double x, double) { return std::sin(x); });
    VectorField b = lie_bracket(u, w);
    for (int i = 0; i < b.nodes(); i++) {
        CHECK(b.value(i, 0) == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(b.value(i, 1) == doctest::Approx(std::cos(t2()->node_coord(i, 0))).epsilon(1e-12));
    }
    CHECK(sup_norm(lie_bracket(w, w)) == doctest::Approx(0.0).epsilon(1e-16));
}

TEST_CASE("divergence of shear and gradient flows") {
    auto shear = t2_field(t2(), [](double, double y) { return std::sin(y); },
                          [](double, double) { return 0.0; });
    CHECK(sup_norm(divergence(shear)) < 1e-13);

    auto u = s1_field(s1(), [](double x) { return std::sin(x); });
    ScalarField d = divergence(u);
    for (int i = 0; i < d.size(); i++)
        CHECK(d[i] == doctest::Approx(std::cos(s1()->node_coord(i, 0))).epsilon(1e-12));
}

TEST_CASE("gradient examples") {
    ScalarField f(t2());
    for (int i = 0; i < f.size(); i++) f[i] = std::cos(t2()->node_coord(i, 0));
    VectorField g = gradient(f);
    for (int i = 0; i < g.nodes(); i++) {
        CHECK(g.value(i, 0) == doctest::Approx(-std::sin(t2()->node_coord(i, 0))).epsilon(1e-12));
        CHECK(g.value(i, 1) == doctest::Approx(0.0).epsilon(1e-14));
    }
}

TEST_CASE("poisson solve examples and error paths") {
    SUBCASE("zero input") {
        ScalarField z(s1());
        CHECK(sup_norm(poisson_solve(z)) == 0.0);
    }
    SUBCASE("circle") {
        ScalarField f(s1());
        for (int i = 0; i < f.size(); i++) f[i] = -std::sin(s1()->node_coord(i, 0));
        ScalarField phi = poisson_solve(f);
        for (int i = 0; i < phi.size(); i++)
            CHECK(phi[i] == doctest::Approx(std::sin(s1()->node_coord(i, 0))).epsilon(1e-12));
    }
    SUBCASE("torus") {
        ScalarField f(t2());
        for (int i = 0; i < f.size(); i++)
            f[i] = -2.0 * std::cos(t2()->node_coord(i, 0)) * std::cos(t2()->node_coord(i, 1));
        ScalarField phi = poisson_solve(f);
        for (int i = 0; i < phi.size(); i++)
            CHECK(phi[i] == doctest::Approx(std::cos(t2()->node_coord(i, 0)) *
                                            std::cos(t2()->node_coord(i, 1)))
                                .epsilon(1e-12));
    }
    SUBCASE("nonzero mean rejected") {
        ScalarField f(s1());
        for (int i = 0; i < f.size(); i++) f[i] = 1.0;
        CHECK_THROWS_AS(poisson_solve(f), std::domain_error);
    }
    SUBCASE("sphere unsupported") {
        ScalarField f(Manifold::sphere(8, 8));
        CHECK_THROWS_AS(poisson_solve(f), std::invalid_argument);
        VectorField v(Manifold::sphere(8, 8));
        CHECK_THROWS_AS(leray_project(v), std::invalid_argument);
        CHECK_THROWS_AS(helmholtz_solve(v, 0.1), std::invalid_argument);
    }
    SUBCASE("negative eps rejected") {
        VectorField v(s1());
        CHECK_THROWS_AS(helmholtz_solve(v, -0.1), std::invalid_argument);
    }
    SUBCASE("odd longitude count rejected") {
        CHECK_THROWS_AS(Manifold::sphere(16, 15), std::invalid_argument);
    }
}

TEST_CASE("curvature vanishes on flat charts") {
    auto u = t2_field(t2(), [](double x, double) { return std::sin(x); },
                      [](double, double y) { return std::cos(y); });
    auto v = t2_field(t2(), [](double, double y) { return std::sin(y); },
                      [](double, double) { return 1.0; });
    CHECK(sup_norm(riemann(u, v, u)) == 0.0);
    CHECK(sup_norm(ricci(u, v)) == 0.0);
}

TEST_CASE("all three laplacians coincide on flat charts") {
    auto u = s1_field(s1(), [](double x) { return std::sin(x); });
    for (auto kind : {LaplacianKind::Rough, LaplacianKind::Hodge, LaplacianKind::Ricci}) {
        VectorField lap = laplacian(u, kind);
        for (int i = 0; i < lap.nodes(); i++)
            CHECK(lap.comp(0)[i] ==
                  doctest::Approx(-std::sin(s1()->node_coord(i, 0))).epsilon(1e-12));
    }
    auto shear = t2_field(t2(), [](double, double y) { return std::sin(y); },
                          [](double, double) { return 0.0; });
    VectorField lap = laplacian(shear, LaplacianKind::Hodge);
    for (int i = 0; i < lap.nodes(); i++)
        CHECK(lap.value(i, 0) == doctest::Approx(-std::sin(t2()->node_coord(i, 1))).epsilon(1e-12));
}

TEST_CASE("deformation tensor of the shear flow") {
    auto u = t2_field(t2(), [](double, double y) { return std::sin(y); },
                      [](double, double) { return 0.0; });
    auto def = deformation(u);
    for (int i = 0; i < u.nodes(); i++) {
        double c = 0.5 * std::cos(t2()->node_coord(i, 1));
        CHECK(def.tensor.entry(i, 0, 1) == doctest::Approx(c).epsilon(1e-12));
        CHECK(def.tensor.entry(i, 1, 0) == doctest::Approx(c).epsilon(1e-12));
        CHECK(def.tensor.entry(i, 0, 0) == doctest::Approx(0.0).epsilon(1e-13));
        CHECK(def.norm_squared[i] == doctest::Approx(2 * c * c).epsilon(1e-12));
    }
    auto constant = t2_field(t2(), [](double, double) { return 0.7; },
                             [](double, double) { return -0.2; });
    CHECK(sup_norm(deformation(constant).norm_squared) < 1e-26);
}

TEST_CASE("helmholtz solve and forward operator") {
    const double eps = 0.5;
    SUBCASE("identity at eps = 0") {
        auto u = s1_field(s1(), [](double x) { return std::sin(x); });
        CHECK(sup_norm(helmholtz_solve(u, 0.0) - u) == 0.0);  // identity, bit-exact
    }
    SUBCASE("circle eigenfunction") {
        auto m = s1_field(s1(), [](double x) { return std::sin(x); });
        VectorField scaled = (1.0 + eps * eps) * m;
        VectorField u = helmholtz_solve(scaled, eps);
        CHECK(sup_norm(u - m) < 1e-12);
    }
    SUBCASE("torus eigenfunction") {
        auto m = t2_field(t2(), [](double, double y) { return std::sin(y); },
                          [](double, double) { return 0.0; });
        VectorField u = helmholtz_solve((1.0 + eps * eps) * m, eps);
        CHECK(sup_norm(u - m) < 1e-12);
    }
    SUBCASE("roundtrip") {
        auto m = t2_field(t2(), [](double x, double y) { return std::sin(x + y); },
                          [](double x, double) { return std::cos(2 * x); });
        CHECK(sup_norm(helmholtz_apply(helmholtz_solve(m, eps), eps) - m) < 1e-12);
    }
    SUBCASE("self-adjointness") {
        auto u = t2_field(t2(), [](double x, double) { return std::sin(2 * x); },
                          [](double, double y) { return std::cos(y); });
        auto v = t2_field(t2(), [](double x, double y) { return std::cos(x) * std::sin(y); },
                          [](double, double) { return 1.0; });
        double a = inner_product(helmholtz_apply(u, eps), v);
        double b = inner_product(u, helmholtz_apply(v, eps));
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
}

TEST_CASE("leray projection") {
    SUBCASE("kills mean-zero gradients") {
        ScalarField f(t2());
        for (int i = 0; i < f.size(); i++) f[i] = std::cos(t2()->node_coord(i, 0));
        VectorField g = gradient(f);
        CHECK(sup_norm(leray_project(g)) < 1e-13);
    }
    SUBCASE("fixes divergence-free fields") {
        auto u = t2_field(t2(), [](double, double y) { return std::sin(y); },
                          [](double, double) { return 0.0; });
        CHECK(sup_norm(leray_project(u) - u) < 1e-13);
    }
    SUBCASE("pure gradient example") {
        auto u = t2_field(t2(), [](double x, double) { return std::sin(x); },
                          [](double, double) { return 0.0; });
        CHECK(sup_norm(leray_project(u)) < 1e-13);
    }
    SUBCASE("result is divergence-free and projection idempotent") {
        auto u = t2_field(t2(), [](double x, double y) { return std::sin(x + 2 * y); },
                          [](double x, double) { return std::cos(x); });
        VectorField p = leray_project(u);
        CHECK(sup_norm(divergence(p)) < 1e-12);
        CHECK(sup_norm(leray_project(p) - p) < 1e-13);
    }
}

TEST_CASE("green formulas on the torus") {
    // Shear benchmark: both sides equal 2 pi^2.
    auto u = t2_field(t2(), [](double, double y) { return std::sin(y); },
                      [](double, double) { return 0.0; });
    auto def = deformation(u);
    double lhs = 2.0 * integrate(def.norm_squared);
    double rhs = -inner_product(laplacian(u, LaplacianKind::Ricci) + gradient(divergence(u)), u);
    CHECK(lhs == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-13));
    CHECK(rhs == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-13));
}

TEST_CASE("connection and operator identities hold across random fields") {
    // Seed-swept property checks of the structural identities.
    auto m = Manifold::torus(24, 24);
    for (std::uint64_t seed = 0; seed < 10; seed++) {
        VectorField u = lam::presets::random_field(m, 1000 + 3 * seed, false);
        VectorField v = lam::presets::random_field(m, 1001 + 3 * seed, false);
        VectorField x = lam::presets::random_field(m, 1002 + 3 * seed, false);

        // Torsion-free connection.
        VectorField torsion =
            covariant_derivative(u, v) - covariant_derivative(v, u) - lie_bracket(u, v);
        CHECK(sup_norm(torsion) < 1e-12);

        // Leibniz rule for the metric.
        ScalarField lhs = metric_inner(gradient(metric_inner(u, v)), x);
        ScalarField r1 = metric_inner(covariant_derivative(x, u), v);
        ScalarField r2 = metric_inner(u, covariant_derivative(x, v));
        double worst = 0.0;
        for (int i = 0; i < lhs.size(); i++)
            worst = std::max(worst, std::abs(lhs[i] - r1[i] - r2[i]));
        CHECK(worst < 1e-8);

        // Green formula for the covariant gradient.
        TensorField11 gu = covariant_gradient(u), gv = covariant_gradient(v);
        ScalarField pair(m);
        for (int node = 0; node < u.nodes(); node++) {
            double sacc = 0.0;
            for (int i = 0; i < 2; i++)
                for (int j = 0; j < 2; j++) sacc += gu.entry(node, i, j) * gv.entry(node, i, j);
            pair[node] = sacc;
        }
        double green = integrate(pair) + inner_product(laplacian(u, LaplacianKind::Rough), v);
        CHECK(std::abs(green) < 1e-8 * std::max(1.0, std::abs(integrate(pair))));

        // Self-adjointness of the momentum operator.
        double a = inner_product(helmholtz_apply(u, 0.4), v);
        double b = inner_product(u, helmholtz_apply(v, 0.4));
        CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("operations are safe to call concurrently") {
    auto m = Manifold::torus(32, 32);
    VectorField u = lam::presets::random_field(m, 77, false);
    VectorField serial = laplacian(u, LaplacianKind::Rough);
    std::vector<VectorField> results(4, VectorField(m));
    std::vector<std::thread> pool;
    for (int t = 0; t < 4; t++)
        pool.emplace_back([&, t] { results[t] = laplacian(u, LaplacianKind::Rough); });
    for (auto& th : pool) th.join();
    for (const VectorField& r : results) CHECK(sup_norm(r - serial) == 0.0);
}

TEST_CASE("manifold mismatch is rejected") {
    VectorField a(t2());
    VectorField b(Manifold::torus(16, 16));
    CHECK_THROWS_AS(metric_inner(a, b), std::invalid_argument);
}
