#include <doctest.h>

#include "lam/experiments.hpp"
#include "lam/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace lam;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("lam_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("vector field csv round trip") {
    auto dir = temp_dir("field");
    auto m = Manifold::torus(16, 16);
    VectorField f = presets::random_field(m, 3, false);
    io::write_vector_csv(dir / "f.csv", f);
    VectorField g = io::read_vector_csv(dir / "f.csv", m);
    CHECK(sup_norm(f - g) == 0.0);  // %.17g is lossless for doubles
}

TEST_CASE("diffeo csv round trip") {
    auto dir = temp_dir("diffeo");
    auto m = Manifold::circle(32);
    std::vector<double> d(32);
    for (int i = 0; i < 32; i++) d[i] = 0.2 * std::sin(m->node_coord(i, 0) + 0.4);
    Diffeo phi = Diffeo::from_displacement(m, std::move(d));
    io::write_diffeo_csv(dir / "phi.csv", phi);
    Diffeo psi = io::read_diffeo_csv(dir / "phi.csv", m);
    for (int i = 0; i < 32; i++)
        CHECK(psi.displacement(i, 0) == phi.displacement(i, 0));
}

TEST_CASE("ensemble round trip keeps weights, seed and members") {
    auto dir = temp_dir("ensemble");
    auto m = Manifold::torus(16, 16);
    FluctuationEnsemble e = random_isotropic(m, 6, 99, {.divergence_free = true});
    io::write_ensemble(dir, e);
    FluctuationEnsemble r = io::read_ensemble(dir, m);
    CHECK(r.seed == e.seed);
    CHECK(r.construction == e.construction);
    REQUIRE(r.size() == e.size());
    for (int b = 0; b < e.size(); b++) CHECK(sup_norm(r.members[b] - e.members[b]) == 0.0);
}

TEST_CASE("config parsing is strict") {
    SUBCASE("valid config") {
        nlohmann::json j = {{"kind", "solve"},
                            {"manifold", {{"kind", "S1"}, {"n", 64}}},
                            {"epsilon", 0.2},
                            {"preset", "smooth"},
                            {"solver", "ch"},
                            {"horizon", 0.5},
                            {"dt", 1e-2}};
        ExperimentConfig c = ExperimentConfig::from_json(j);
        CHECK(c.kind == "solve");
        CHECK(c.n == 64);
    }
    SUBCASE("unknown top-level key rejected") {
        nlohmann::json j = {{"kind", "solve"}, {"bogus", 1}};
        CHECK_THROWS_AS(ExperimentConfig::from_json(j), std::invalid_argument);
    }
    SUBCASE("unknown manifold key rejected") {
        nlohmann::json j = {{"kind", "solve"}, {"manifold", {{"kind", "S1"}, {"m", 3}}}};
        CHECK_THROWS_AS(ExperimentConfig::from_json(j), std::invalid_argument);
    }
    SUBCASE("unknown kind rejected") {
        nlohmann::json j = {{"kind", "frobnicate"}};
        CHECK_THROWS_AS(ExperimentConfig::from_json(j), std::invalid_argument);
    }
    SUBCASE("non-positive dt rejected") {
        nlohmann::json j = {{"kind", "solve"}, {"dt", 0.0}};
        CHECK_THROWS_AS(ExperimentConfig::from_json(j), std::invalid_argument);
    }
    SUBCASE("all eight kinds are listed") {
        std::string text = list_experiments();
        for (const char* kind : {"verify-geometry", "ensemble-stats", "expansion",
                                 "average-lagrangian", "karcher-mean", "pressure-term",
                                 "solve", "action-check"})
            CHECK(text.find(kind) != std::string::npos);
    }
    SUBCASE("listed sample config parses back") {
        std::string text = list_experiments();
        auto pos = text.find("Sample config:\n");
        REQUIRE(pos != std::string::npos);
        std::string sample = text.substr(pos + 15);
        ExperimentConfig c = ExperimentConfig::from_json(nlohmann::json::parse(sample));
        CHECK(c.kind == "average-lagrangian");
    }
}

TEST_CASE("experiment runs are deterministic and write reports") {
    auto dir1 = temp_dir("run1");
    auto dir2 = temp_dir("run2");
    ExperimentConfig cfg;
    cfg.kind = "ensemble-stats";
    cfg.manifold_kind = "T2";
    cfg.nx = cfg.ny = 16;
    cfg.ensemble_size = 16;
    cfg.seed = 5;

    RunReport r1 = run_experiment(cfg, dir1);
    RunReport r2 = run_experiment(cfg, dir2);
    CHECK(r1.pass);
    CHECK(r2.pass);
    CHECK(std::filesystem::exists(dir1 / "report.json"));

    // Data artifacts are byte-identical across identical runs (the JSON
    // report differs only in the seconds field).
    CHECK(slurp(dir1 / "mc_sweep.csv") == slurp(dir2 / "mc_sweep.csv"));
    CHECK(slurp(dir1 / "ensemble" / "member_000.csv") == slurp(dir2 / "ensemble" / "member_000.csv"));
    for (size_t i = 0; i < r1.checks.size(); i++)
        CHECK(r1.checks[i].measured == r2.checks[i].measured);
}

TEST_CASE("solve experiment writes diagnostics tables") {
    auto dir = temp_dir("solve");
    ExperimentConfig cfg;
    cfg.kind = "solve";
    cfg.solver = "ch";
    cfg.preset = "zero";
    cfg.manifold_kind = "S1";
    cfg.n = 64;
    cfg.epsilon = 0.2;
    cfg.horizon = 0.1;
    cfg.dt = 1e-2;
    RunReport rep = run_experiment(cfg, dir);
    CHECK(rep.pass);
    CHECK(std::filesystem::exists(dir / "diagnostics.csv"));
    CHECK(std::filesystem::exists(dir / "states.csv"));
    std::string diag = slurp(dir / "diagnostics.csv");
    CHECK(diag.rfind("t,energy,momentum_x,momentum_y,div_sup,tail", 0) == 0);
}
