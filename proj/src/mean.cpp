#include "lam/mean.hpp"

#include "lam/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace lam {

namespace {

void validate_inputs(const std::vector<Diffeo>& members, const std::vector<double>& weights) {
    if (members.empty()) throw std::invalid_argument("karcher_mean: no members");
    if (weights.size() != members.size())
        throw std::invalid_argument("karcher_mean: weight count mismatch");
    double sum = 0.0;
    for (double w : weights) {
        if (w <= 0.0) throw std::invalid_argument("karcher_mean: weights must be positive");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("karcher_mean: weights must sum to 1");
    for (const Diffeo& d : members)
        if (!same_grid(d.manifold(), members[0].manifold()))
            throw std::invalid_argument("karcher_mean: manifold mismatch");
}

double objective(const Diffeo& eta, const std::vector<Diffeo>& members,
                 const std::vector<double>& weights) {
    double acc = 0.0;
    for (size_t b = 0; b < members.size(); b++) {
        double d = distance(eta, members[b]);
        acc += weights[b] * d * d;
    }
    return acc;
}

int medoid_index(const std::vector<Diffeo>& members, const std::vector<double>& weights) {
    int best = 0;
    double best_obj = objective(members[0], members, weights);
    for (size_t j = 1; j < members.size(); j++) {
        double obj = objective(members[j], members, weights);
        if (obj < best_obj) {
            best_obj = obj;
            best = static_cast<int>(j);
        }
    }
    return best;
}

MeanResult iterate(const std::vector<Diffeo>& members, const std::vector<double>& weights,
                   const KarcherOptions& opts, bool volume_constrained) {
    validate_inputs(members, weights);
    const ManifoldPtr m = members[0].manifold_ptr();
    if (volume_constrained) {
        if (m->kind() != ManifoldKind::TorusT2)
            throw std::invalid_argument("karcher_mean_volume_constrained: T2 only");
        for (const Diffeo& d : members)
            if (d.volume_distortion() > 1e-6)
                throw std::domain_error("karcher_mean_volume_constrained: member is not volume-preserving");
    }

    Diffeo eta = members[medoid_index(members, weights)];
    double obj = objective(eta, members, weights);
    double tau = opts.step;

    MeanResult result{eta, {}, 0.0, {}, 0, false, ScalarField(m)};
    VectorField mean_log(m);

    for (int it = 0; it < opts.max_iterations; it++) {
        Diffeo inv = invert(eta);
        mean_log = VectorField(m);
        std::vector<VectorField> logs;
        logs.reserve(members.size());
        for (size_t b = 0; b < members.size(); b++) {
            logs.push_back(log_map(eta, members[b], inv));
            axpy(weights[b], logs.back(), mean_log);
        }
        VectorField update = volume_constrained ? geometry::leray_project(mean_log) : mean_log;
        double res = l2_norm(update);
        result.residual_history.push_back(res);
        result.iterations = it;
        if (res <= opts.tol) {
            result.mean = eta;
            result.fluctuation_logs = std::move(logs);
            result.residual = res;
            result.converged = true;
            break;
        }

        // Descent step with halving on objective increase. The constrained
        // variant steps along the flow of the solenoidal update, which
        // keeps the iterate volume-preserving; free flight would drift at
        // second order in the update.
        bool accepted = false;
        while (tau > 1e-8) {
            Diffeo trial = volume_constrained
                               ? compose(flow(m, [&](double) { return update; }, tau,
                                              std::max(tau / 4.0, 1e-3)),
                                         eta)
                               : exp_map(eta, update, tau);
            double trial_obj = objective(trial, members, weights);
            if (trial_obj <= obj + 1e-12) {
                eta = trial;
                obj = trial_obj;
                accepted = true;
                break;
            }
            tau *= 0.5;
        }
        if (!accepted)
            throw std::runtime_error("karcher_mean: step size collapsed without progress");
    }

    if (!result.converged)
        throw std::runtime_error("karcher_mean: no convergence within max_iterations");

    if (volume_constrained) {
        // Optimality leaves a pure-gradient mean log; recover its potential.
        result.potential = geometry::poisson_solve(geometry::divergence(mean_log));
    }
    return result;
}

} // namespace

MeanResult karcher_mean(const std::vector<Diffeo>& members, const std::vector<double>& weights,
                        const KarcherOptions& opts) {
    return iterate(members, weights, opts, false);
}

MeanResult karcher_mean_volume_constrained(const std::vector<Diffeo>& members,
                                           const std::vector<double>& weights,
                                           const KarcherOptions& opts) {
    return iterate(members, weights, opts, true);
}

} // namespace lam
