#include "lam/ensemble.hpp"

#include "lam/geometry.hpp"
#include "lam/interp.hpp"

#include <cmath>
#include <stdexcept>

namespace lam {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Deterministic uniform generator (splitmix64); avoids libstdc++
// distribution implementation differences.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next_u64() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double normal() {
        // Box-Muller; one value per call keeps member streams independent.
        double u1 = std::max(uniform(), 1e-300), u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    }
};

struct Mode2D {
    int kx, ky;
    double dir[2];  // polarization (unit)
};

// Symmetric low-wavenumber set; transverse polarizations sum to the
// identity over the set, so do the full (k-hat, k-perp) pairs.
std::vector<Mode2D> torus_modes(bool divergence_free) {
    const int ks[4][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}};
    std::vector<Mode2D> modes;
    for (auto& k : ks) {
        double norm = std::sqrt(static_cast<double>(k[0]) * k[0] + static_cast<double>(k[1]) * k[1]);
        Mode2D perp{k[0], k[1], {-k[1] / norm, k[0] / norm}};
        modes.push_back(perp);
        if (!divergence_free) {
            Mode2D para{k[0], k[1], {k[0] / norm, k[1] / norm}};
            modes.push_back(para);
        }
    }
    return modes;
}

// Stratified strides: one odd stride per mode such that no pairwise sum,
// difference, or double collides with 0 mod N. Keeps every root-of-unity
// phase sum over the ensemble exactly zero.
std::vector<int> pick_strides(int nmodes, int N) {
    std::vector<int> strides;
    int cand = 1;
    while (static_cast<int>(strides.size()) < nmodes) {
        bool ok = (2 * cand) % N != 0;
        for (int s : strides)
            if ((cand + s) % N == 0 || (cand - s) % N == 0) ok = false;
        if (ok) strides.push_back(cand);
        cand += 2;
        if (cand > 64 * nmodes + N)
            throw std::invalid_argument("random_isotropic: ensemble too small for stratified phases");
    }
    return strides;
}

VectorField rotation_field(const ManifoldPtr& m, int axis) {
    VectorField w(m);
    for (int i = 0; i < w.nodes(); i++) {
        auto p = m->point(i);
        double a[3] = {0, 0, 0};
        a[axis] = 1.0;
        w.value(i, 0) = a[1] * p[2] - a[2] * p[1];
        w.value(i, 1) = a[2] * p[0] - a[0] * p[2];
        w.value(i, 2) = a[0] * p[1] - a[1] * p[0];
    }
    return w;
}

void recenter(FluctuationEnsemble& e) {
    if (e.members.empty()) return;
    VectorField mean(e.manifold);
    for (int b = 0; b < e.size(); b++) axpy(e.weights[b], e.members[b], mean);
    for (auto& w : e.members) axpy(-1.0, mean, w);
}

} // namespace

void FluctuationEnsemble::validate(double tol) const {
    if (members.empty()) throw std::domain_error("FluctuationEnsemble: empty");
    if (weights.size() != members.size())
        throw std::domain_error("FluctuationEnsemble: weight count mismatch");
    double sum = 0.0;
    for (double w : weights) {
        if (w <= 0.0) throw std::domain_error("FluctuationEnsemble: weights must be positive");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::domain_error("FluctuationEnsemble: weights must sum to 1");
    VectorField mean(manifold);
    for (int b = 0; b < size(); b++) axpy(weights[b], members[b], mean);
    if (l2_norm(mean) > tol)
        throw std::domain_error("FluctuationEnsemble: weighted mean field is not centered");
}

FluctuationEnsemble deterministic_isotropic(ManifoldPtr m) {
    FluctuationEnsemble e;
    e.manifold = m;
    e.construction = "deterministic";
    switch (m->kind()) {
        case ManifoldKind::CircleS1: {
            for (double s : {1.0, -1.0}) {
                VectorField w(m);
                for (int i = 0; i < w.nodes(); i++) w.comp(0)[i] = s;
                e.members.push_back(std::move(w));
                e.weights.push_back(0.5);
            }
            break;
        }
        case ManifoldKind::TorusT2: {
            const double a = std::sqrt(2.0);
            for (int axis = 0; axis < 2; axis++)
                for (double s : {a, -a}) {
                    VectorField w(m);
                    for (int i = 0; i < w.nodes(); i++) w.comp(axis)[i] = s;
                    e.members.push_back(std::move(w));
                    e.weights.push_back(0.25);
                }
            break;
        }
        case ManifoldKind::SphereS2: {
            const double a = std::sqrt(3.0);
            for (int axis = 0; axis < 3; axis++) {
                VectorField L = rotation_field(m, axis);
                for (double s : {a, -a}) {
                    e.members.push_back(s * L);
                    e.weights.push_back(1.0 / 6.0);
                }
            }
            break;
        }
    }
    return e;
}

FluctuationEnsemble random_isotropic(ManifoldPtr m, int count, std::uint64_t seed,
                                     const RandomEnsembleOptions& opts) {
    if (count < 2) throw std::invalid_argument("random_isotropic: need at least 2 members");
    if (opts.divergence_free && m->kind() == ManifoldKind::SphereS2)
        throw std::invalid_argument("random_isotropic: divergence-free variant is S1/T2 only");

    FluctuationEnsemble e;
    e.manifold = m;
    e.seed = seed;
    e.construction = opts.phase == PhaseSampling::Stratified ? "random-stratified" : "random-iid";
    if (opts.divergence_free) e.construction += "-divfree";
    e.weights.assign(count, 1.0 / count);

    switch (m->kind()) {
        case ManifoldKind::CircleS1: {
            if (opts.divergence_free) {
                // Divergence-free on S1 means constant; random signs.
                for (int b = 0; b < count; b++) {
                    Rng rng(seed + b);
                    double s = opts.phase == PhaseSampling::Stratified
                                   ? (b % 2 == 0 ? 1.0 : -1.0)
                                   : (rng.uniform() < 0.5 ? 1.0 : -1.0);
                    VectorField w(m);
                    for (int i = 0; i < w.nodes(); i++) w.comp(0)[i] = s;
                    e.members.push_back(std::move(w));
                }
                break;
            }
            const int kset[2] = {1, 2};
            const double amp = 1.0;  // sum_k amp^2/2 * |K| = 1
            std::vector<int> strides = opts.phase == PhaseSampling::Stratified
                                           ? pick_strides(2, count)
                                           : std::vector<int>{};
            Rng offs(seed);
            double omega[2] = {offs.uniform() * kTwoPi, offs.uniform() * kTwoPi};
            for (int b = 0; b < count; b++) {
                Rng rng(seed + b);
                VectorField w(m);
                for (int q = 0; q < 2; q++) {
                    double phase = opts.phase == PhaseSampling::Stratified
                                       ? omega[q] + kTwoPi * strides[q] * b / count
                                       : rng.uniform() * kTwoPi;
                    for (int i = 0; i < w.nodes(); i++)
                        w.comp(0)[i] += amp * std::cos(kset[q] * m->node_coord(i, 0) + phase);
                }
                e.members.push_back(std::move(w));
            }
            break;
        }
        case ManifoldKind::TorusT2: {
            auto modes = torus_modes(opts.divergence_free);
            const int nm = static_cast<int>(modes.size());
            // E[w (x) w] = sum_q amp^2/2 dir dir^T = I for both variants.
            const double amp = std::sqrt(2.0 * 2.0 / nm);
            std::vector<int> strides = opts.phase == PhaseSampling::Stratified
                                           ? pick_strides(nm, count)
                                           : std::vector<int>{};
            Rng offs(seed);
            std::vector<double> omega(nm);
            for (int q = 0; q < nm; q++) omega[q] = offs.uniform() * kTwoPi;
            for (int b = 0; b < count; b++) {
                Rng rng(seed + b);
                VectorField w(m);
                for (int q = 0; q < nm; q++) {
                    double phase = opts.phase == PhaseSampling::Stratified
                                       ? omega[q] + kTwoPi * strides[q] * b / count
                                       : rng.uniform() * kTwoPi;
                    for (int i = 0; i < w.nodes(); i++) {
                        double arg = modes[q].kx * m->node_coord(i, 0) +
                                     modes[q].ky * m->node_coord(i, 1) + phase;
                        double c = amp * std::cos(arg);
                        w.value(i, 0) += c * modes[q].dir[0];
                        w.value(i, 1) += c * modes[q].dir[1];
                    }
                }
                e.members.push_back(std::move(w));
            }
            break;
        }
        case ManifoldKind::SphereS2: {
            if (opts.phase == PhaseSampling::Stratified)
                throw std::invalid_argument("random_isotropic: stratified phases are S1/T2 only");
            // Gaussian combinations of the rotation fields: covariance
            // sum_a L_a L_a^T = I - p p^T, the tangential projector.
            VectorField L[3] = {rotation_field(m, 0), rotation_field(m, 1), rotation_field(m, 2)};
            for (int b = 0; b < count; b++) {
                Rng rng(seed + b);
                VectorField w(m);
                for (int a = 0; a < 3; a++) axpy(rng.normal(), L[a], w);
                e.members.push_back(std::move(w));
            }
            break;
        }
    }

    recenter(e);
    return e;
}

TensorField11 covariance(const FluctuationEnsemble& e) {
    if (e.members.empty()) throw std::domain_error("covariance: empty ensemble");
    TensorField11 out(e.manifold);
    const int d = out.dim();
    for (int b = 0; b < e.size(); b++) {
        const VectorField& w = e.members[b];
        const double p = e.weights[b];
        for (int node = 0; node < out.nodes(); node++)
            for (int i = 0; i < d; i++)
                for (int j = 0; j < d; j++)
                    out.entry(node, i, j) += p * w.value(node, i) * w.value(node, j);
    }
    return out;
}

std::vector<VectorField> taylor_transport(const VectorField& w0, const FlowPath& path) {
    if (path.size() == 0) throw std::invalid_argument("taylor_transport: empty path");
    if (!same_grid(w0.manifold(), path.maps[0].manifold()))
        throw std::invalid_argument("taylor_transport: manifold mismatch");
    const Manifold& m = w0.manifold();
    const int n = w0.nodes(), dim = w0.dim();

    std::vector<VectorField> out;
    out.reserve(path.size());
    for (int s = 0; s < path.size(); s++) {
        const Diffeo& eta = path.maps[s];
        // Material pushforward at the labels, then resample at eta^{-1}.
        TensorField11 J = eta.jacobian();
        std::vector<double> mat(static_cast<size_t>(n) * dim, 0.0);
        for (int node = 0; node < n; node++)
            for (int i = 0; i < dim; i++) {
                double acc = 0.0;
                for (int j = 0; j < dim; j++) acc += J.entry(node, i, j) * w0.value(node, j);
                mat[static_cast<size_t>(i) * n + node] = acc;
            }
        Diffeo inv = invert(eta);
        VectorField w(w0.manifold_ptr());
        if (m.kind() == ManifoldKind::CircleS1) {
            PeriodicSpline1D s1(std::span<const double>(mat.data(), n), kTwoPi);
            for (int i = 0; i < n; i++) w.comp(0)[i] = s1(inv.image(i, 0));
        } else {
            for (int c = 0; c < dim; c++) {
                PeriodicSpline2D s2(std::span<const double>(mat.data() + static_cast<size_t>(c) * n, n),
                                    m.nx(), m.ny(), kTwoPi, kTwoPi);
                for (int i = 0; i < n; i++)
                    w.comp(c)[i] = s2(inv.image(i, 0), inv.image(i, 1));
            }
        }
        out.push_back(std::move(w));
    }
    return out;
}

} // namespace lam
