#include "lam/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lam {
namespace io {

namespace {

std::vector<std::vector<double>> read_csv(const std::filesystem::path& file, size_t columns) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != columns)
            throw std::runtime_error("unexpected column count in " + file.string());
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_scalar_csv(const std::filesystem::path& file, const ScalarField& f) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << "index,c0\n";
    for (int i = 0; i < f.size(); i++) out << i << ',' << format_double(f[i]) << '\n';
}

void write_vector_csv(const std::filesystem::path& file, const VectorField& f) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << "index";
    for (int c = 0; c < f.dim(); c++) out << ",c" << c;
    out << '\n';
    for (int i = 0; i < f.nodes(); i++) {
        out << i;
        for (int c = 0; c < f.dim(); c++) out << ',' << format_double(f.value(i, c));
        out << '\n';
    }
}

VectorField read_vector_csv(const std::filesystem::path& file, ManifoldPtr m) {
    const int dim = m->field_dim();
    auto rows = read_csv(file, static_cast<size_t>(dim) + 1);
    if (static_cast<int>(rows.size()) != m->node_count())
        throw std::runtime_error("node count mismatch in " + file.string());
    VectorField f(std::move(m));
    for (int i = 0; i < f.nodes(); i++)
        for (int c = 0; c < dim; c++) f.value(i, c) = rows[i][c + 1];
    return f;
}

void write_diffeo_csv(const std::filesystem::path& file, const Diffeo& d) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << "index";
    for (int c = 0; c < d.dim(); c++) out << ",d" << c;
    out << '\n';
    for (int i = 0; i < d.nodes(); i++) {
        out << i;
        for (int c = 0; c < d.dim(); c++) out << ',' << format_double(d.displacement(i, c));
        out << '\n';
    }
}

Diffeo read_diffeo_csv(const std::filesystem::path& file, ManifoldPtr m) {
    const int dim = m->field_dim();
    const int n = m->node_count();
    auto rows = read_csv(file, static_cast<size_t>(dim) + 1);
    if (static_cast<int>(rows.size()) != n)
        throw std::runtime_error("node count mismatch in " + file.string());
    std::vector<double> disp(static_cast<size_t>(n) * dim);
    for (int i = 0; i < n; i++)
        for (int c = 0; c < dim; c++) disp[static_cast<size_t>(c) * n + i] = rows[i][c + 1];
    return Diffeo::from_displacement(std::move(m), std::move(disp));
}

void write_ensemble(const std::filesystem::path& dir, const FluctuationEnsemble& e) {
    std::filesystem::create_directories(dir);
    nlohmann::ordered_json manifest;
    manifest["construction"] = e.construction;
    manifest["seed"] = e.seed;
    manifest["amplitude"] = e.amplitude;
    manifest["weights"] = e.weights;
    manifest["members"] = nlohmann::ordered_json::array();
    for (int b = 0; b < e.size(); b++) {
        char name[32];
        std::snprintf(name, sizeof(name), "member_%03d.csv", b);
        write_vector_csv(dir / name, e.members[b]);
        manifest["members"].push_back(name);
    }
    std::ofstream out(dir / "manifest.json");
    out << manifest.dump(2) << '\n';
}

FluctuationEnsemble read_ensemble(const std::filesystem::path& dir, ManifoldPtr m) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw std::runtime_error("cannot open ensemble manifest in " + dir.string());
    nlohmann::json manifest = nlohmann::json::parse(in);
    FluctuationEnsemble e;
    e.manifold = m;
    e.construction = manifest.at("construction").get<std::string>();
    e.seed = manifest.at("seed").get<std::uint64_t>();
    e.amplitude = manifest.at("amplitude").get<double>();
    e.weights = manifest.at("weights").get<std::vector<double>>();
    for (const auto& name : manifest.at("members"))
        e.members.push_back(read_vector_csv(dir / name.get<std::string>(), m));
    return e;
}

nlohmann::ordered_json lagrangian_report_json(const LagrangianReport& rep) {
    nlohmann::ordered_json j;
    j["L0"] = rep.L0;
    j["L1"] = rep.L1;
    j["L2_empirical"] = rep.L2_empirical;
    j["L2_closed"] = rep.L2_closed;
    j["Lbar_empirical"] = rep.Lbar_empirical;
    j["Lbar_closed"] = rep.Lbar_closed;
    j["epsilon"] = rep.epsilon;
    j["ensemble_size"] = rep.ensemble_size;
    j["identity_residuals"] = rep.identity_residuals;
    return j;
}

void write_diagnostics_csv(const std::filesystem::path& file, const Trajectory& traj) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << "t,energy,momentum_x,momentum_y,div_sup,tail\n";
    const Diagnostics& d = traj.diagnostics;
    for (size_t i = 0; i < d.time.size(); i++) {
        out << format_double(d.time[i]) << ',' << format_double(d.energy[i]) << ','
            << format_double(d.momentum[i][0]) << ',' << format_double(d.momentum[i][1]) << ','
            << format_double(d.divergence_sup[i]) << ',' << format_double(d.tail_fraction[i]) << '\n';
    }
}

void write_states_csv(const std::filesystem::path& file, const Trajectory& traj) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    if (traj.states.empty()) return;
    const int dim = traj.states[0].u.dim();
    out << "t,node";
    for (int c = 0; c < dim; c++) out << ",u" << c;
    for (int c = 0; c < dim; c++) out << ",m" << c;
    out << '\n';
    for (const SolverState& s : traj.states)
        for (int i = 0; i < s.u.nodes(); i++) {
            out << format_double(s.t) << ',' << i;
            for (int c = 0; c < dim; c++) out << ',' << format_double(s.u.value(i, c));
            for (int c = 0; c < dim; c++) out << ',' << format_double(s.m.value(i, c));
            out << '\n';
        }
}

} // namespace io
} // namespace lam
