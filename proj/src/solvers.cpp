#include "lam/solvers.hpp"

#include "lam/geometry.hpp"
#include "lam/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace lam {

namespace {

using Buffer = std::vector<double>;

// Shared fixed-step RK4 driver over the raw momentum buffer.
struct Stepper {
    ManifoldPtr m;
    double eps;
    SolveOptions opts;
    std::function<void(const Buffer&, Buffer&)> rhs;  // dm/dt
    std::function<void(const Buffer&, Buffer&)> recover_u;

    Trajectory run(const Buffer& m0) {
        const int steps = std::max(1, static_cast<int>(std::llround(opts.T / opts.dt)));
        const double h = opts.T / steps;
        const int kmax = std::max(m->nx(), m->ny()) / 3;

        // The evolution lives on the dealiased basis; truncate the data
        // once so products never see modes above the 2/3 cutoff.
        Buffer mm = m0, u(m0.size());
        dealias(mm);
        Buffer k1(m0.size()), k2(m0.size()), k3(m0.size()), k4(m0.size()), tmp(m0.size());
        recover_u(mm, u);
        const double sup0 = std::max(sup(u), 1e-12);

        Trajectory traj;
        traj.eps = eps;
        traj.dt = h;
        record(traj, 0.0, u, mm);
        snapshot(traj, 0.0, u, mm);

        double t = 0.0;
        for (int s = 0; s < steps; s++) {
            double supu = sup(u);
            if (supu > opts.blowup_factor * sup0)
                throw std::runtime_error("solver: blow-up detected (sup|u| growth)");
            if (supu * kmax * h > opts.cfl_limit)
                throw std::runtime_error("solver: CFL violation (reduce dt)");

            rhs(mm, k1);
            add_scaled(mm, 0.5 * h, k1, tmp);
            rhs(tmp, k2);
            add_scaled(mm, 0.5 * h, k2, tmp);
            rhs(tmp, k3);
            add_scaled(mm, h, k3, tmp);
            rhs(tmp, k4);
            for (size_t i = 0; i < mm.size(); i++)
                mm[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            if (opts.spectral_filter) filter(mm);
            t = (s + 1) * h;
            recover_u(mm, u);

            record(traj, t, u, mm);
            if ((s + 1) % opts.store_every == 0 || s + 1 == steps) snapshot(traj, t, u, mm);
        }
        return traj;
    }

    static void add_scaled(const Buffer& a, double c, const Buffer& b, Buffer& out) {
        for (size_t i = 0; i < a.size(); i++) out[i] = a[i] + c * b[i];
    }

    void dealias(Buffer& mm) const {
        const int n = m->node_count();
        for (int c = 0; c < m->field_dim(); c++) {
            std::span<double> comp(mm.data() + static_cast<size_t>(c) * n, static_cast<size_t>(n));
            if (m->field_dim() == 1)
                spectral::dealias_1d(comp);
            else
                spectral::dealias_2d(comp, m->nx(), m->ny());
        }
    }
    static double sup(const Buffer& a) {
        double worst = 0.0;
        for (double x : a) worst = std::max(worst, std::abs(x));
        return worst;
    }

    // Exponential roll-off at the dealias cutoff; rounds the hard
    // spectral truncation for data that is only weakly differentiable.
    void filter(Buffer& mm) const {
        const int n = m->node_count();
        const int dim = m->field_dim();
        for (int c = 0; c < dim; c++) {
            std::span<double> comp(mm.data() + static_cast<size_t>(c) * n, static_cast<size_t>(n));
            if (dim == 1) {
                const double kc = m->nx() / 3.0;
                spectral::apply_symbol_1d(comp, comp, [kc](double k) {
                    return std::exp(-36.0 * std::pow(std::abs(k) / kc, 36.0));
                });
            } else {
                const double kcx = m->nx() / 3.0, kcy = m->ny() / 3.0;
                spectral::apply_symbol_2d(comp, comp, m->nx(), m->ny(), [&](double kx, double ky) {
                    return std::exp(-36.0 * (std::pow(std::abs(kx) / kcx, 36.0) +
                                             std::pow(std::abs(ky) / kcy, 36.0)));
                });
            }
        }
    }

    void record(Trajectory& traj, double t, const Buffer& u, const Buffer& mm) const {
        const int n = m->node_count(), dim = m->field_dim();
        auto w = m->quadrature_weights();
        double energy = 0.0;
        std::array<double, 2> mom{0.0, 0.0};
        for (int c = 0; c < dim; c++)
            for (int i = 0; i < n; i++) {
                size_t idx = static_cast<size_t>(c) * n + i;
                energy += 0.5 * w[i] * mm[idx] * u[idx];
                mom[c] += w[i] * mm[idx];
            }
        double div_sup = 0.0, tail = 0.0;
        if (dim == 2) {
            Buffer dx(n), dy(n);
            spectral::derivative_2d({u.data(), static_cast<size_t>(n)}, dx, m->nx(), m->ny(), 0, 1);
            spectral::derivative_2d({u.data() + n, static_cast<size_t>(n)}, dy, m->nx(), m->ny(), 1, 1);
            for (int i = 0; i < n; i++) div_sup = std::max(div_sup, std::abs(dx[i] + dy[i]));
            tail = spectral::tail_fraction_2d({u.data(), static_cast<size_t>(n)}, m->nx(), m->ny());
        } else {
            tail = spectral::tail_fraction_1d({u.data(), static_cast<size_t>(n)});
        }
        traj.diagnostics.time.push_back(t);
        traj.diagnostics.energy.push_back(energy);
        traj.diagnostics.momentum.push_back(mom);
        traj.diagnostics.divergence_sup.push_back(div_sup);
        traj.diagnostics.tail_fraction.push_back(tail);
    }

    void snapshot(Trajectory& traj, double t, const Buffer& u, const Buffer& mm) const {
        SolverState st{t, VectorField(m, u), VectorField(m, mm), eps};
        traj.states.push_back(std::move(st));
    }
};

} // namespace

Trajectory solve_camassa_holm(const VectorField& u0, double eps, const SolveOptions& opts) {
    if (u0.manifold().kind() != ManifoldKind::CircleS1)
        throw std::invalid_argument("solve_camassa_holm: S1 only");
    if (eps <= 0.0) throw std::invalid_argument("solve_camassa_holm: eps must be positive");
    const ManifoldPtr m = u0.manifold_ptr();
    const int n = m->node_count();

    Stepper st;
    st.m = m;
    st.eps = eps;
    st.opts = opts;
    st.recover_u = [n, eps](const Buffer& mm, Buffer& u) {
        spectral::helmholtz_1d({mm.data(), static_cast<size_t>(n)}, {u.data(), static_cast<size_t>(n)}, eps);
    };
    st.rhs = [n, eps](const Buffer& mm, Buffer& out) {
        // m_t = -d/dx ( u m + u^2/2 - eps^2 u_x^2/2 ): the flux form keeps
        // Integral m conserved to round-off.
        Buffer u(n), ux(n), flux(n);
        std::span<const double> ms(mm.data(), static_cast<size_t>(n));
        spectral::helmholtz_1d(ms, u, eps);
        spectral::derivative_1d(u, ux, 1);
        for (int i = 0; i < n; i++)
            flux[i] = u[i] * mm[i] + 0.5 * u[i] * u[i] - 0.5 * eps * eps * ux[i] * ux[i];
        spectral::dealias_1d(flux);
        spectral::derivative_1d(flux, {out.data(), static_cast<size_t>(n)}, 1);
        for (int i = 0; i < n; i++) out[i] = -out[i];
    };

    Buffer m0(n);
    spectral::apply_symbol_1d(u0.comp(0), m0, [eps](double k) { return 1.0 + eps * eps * k * k; });
    return st.run(m0);
}

namespace {

// Shared EPDiff tendency pieces on T2 (without the sign):
// conv_i = u_j d_j m_i, stretch_i = m_j d_i u_j, divterm_i = m_i div u.
struct Tendency2D {
    int nx, ny, n;
    Buffer u, dxm, dym, du[2][2], divu, work;

    explicit Tendency2D(const Manifold& man)
        : nx(man.nx()), ny(man.ny()), n(man.node_count()),
          u(static_cast<size_t>(2) * n), dxm(n), dym(n), divu(n), work(n) {
        for (auto& row : du)
            for (auto& b : row) b.assign(n, 0.0);
    }

    std::span<const double> comp(const Buffer& f, int c) const {
        return {f.data() + static_cast<size_t>(c) * n, static_cast<size_t>(n)};
    }
    std::span<double> comp(Buffer& f, int c) const {
        return {f.data() + static_cast<size_t>(c) * n, static_cast<size_t>(n)};
    }

    void compute(const Buffer& mm, double eps, bool with_div_term, Buffer& out) {
        for (int c = 0; c < 2; c++)
            spectral::helmholtz_2d(comp(mm, c), comp(u, c), nx, ny, eps);
        for (int i = 0; i < 2; i++)
            for (int j = 0; j < 2; j++)
                spectral::derivative_2d(comp(u, i), du[i][j], nx, ny, j, 1);
        for (int i = 0; i < n; i++) divu[i] = du[0][0][i] + du[1][1][i];

        for (int c = 0; c < 2; c++) {
            spectral::derivative_2d(comp(mm, c), dxm, nx, ny, 0, 1);
            spectral::derivative_2d(comp(mm, c), dym, nx, ny, 1, 1);
            auto oc = comp(out, c);
            for (int i = 0; i < n; i++) {
                double conv = u[i] * dxm[i] + u[static_cast<size_t>(n) + i] * dym[i];
                double stretch = mm[i] * du[0][c][i] + mm[static_cast<size_t>(n) + i] * du[1][c][i];
                double divterm = with_div_term ? mm[static_cast<size_t>(c) * n + i] * divu[i] : 0.0;
                oc[i] = -(conv + stretch + divterm);
            }
            spectral::dealias_2d(oc, nx, ny);
        }
    }
};

} // namespace

Trajectory solve_epdiff(const VectorField& u0, double eps, const SolveOptions& opts) {
    if (u0.manifold().kind() != ManifoldKind::TorusT2)
        throw std::invalid_argument("solve_epdiff: T2 only");
    if (eps <= 0.0) throw std::invalid_argument("solve_epdiff: eps must be positive");
    const ManifoldPtr m = u0.manifold_ptr();
    const int n = m->node_count();

    auto tendency = std::make_shared<Tendency2D>(*m);
    Stepper st;
    st.m = m;
    st.eps = eps;
    st.opts = opts;
    st.recover_u = [m, n, eps](const Buffer& mm, Buffer& u) {
        for (int c = 0; c < 2; c++)
            spectral::helmholtz_2d({mm.data() + static_cast<size_t>(c) * n, static_cast<size_t>(n)},
                                   {u.data() + static_cast<size_t>(c) * n, static_cast<size_t>(n)},
                                   m->nx(), m->ny(), eps);
    };
    st.rhs = [tendency, eps](const Buffer& mm, Buffer& out) {
        tendency->compute(mm, eps, /*with_div_term=*/true, out);
    };

    Buffer m0(static_cast<size_t>(2) * n);
    for (int c = 0; c < 2; c++)
        spectral::apply_symbol_2d(u0.comp(c), {m0.data() + static_cast<size_t>(c) * n, static_cast<size_t>(n)},
                                  m->nx(), m->ny(),
                                  [eps](double kx, double ky) { return 1.0 + eps * eps * (kx * kx + ky * ky); });
    return st.run(m0);
}

Trajectory solve_euler_alpha(const VectorField& u0, double eps, const SolveOptions& opts) {
    if (u0.manifold().kind() != ManifoldKind::TorusT2)
        throw std::invalid_argument("solve_euler_alpha: T2 only");
    if (eps < 0.0) throw std::invalid_argument("solve_euler_alpha: eps must be >= 0");
    if (sup_norm(geometry::divergence(u0)) > 1e-10)
        throw std::domain_error("solve_euler_alpha: u0 must be divergence-free");
    const ManifoldPtr m = u0.manifold_ptr();
    const int n = m->node_count();

    auto tendency = std::make_shared<Tendency2D>(*m);
    Stepper st;
    st.m = m;
    st.eps = eps;
    st.opts = opts;
    st.recover_u = [m, n, eps](const Buffer& mm, Buffer& u) {
        for (int c = 0; c < 2; c++)
            spectral::helmholtz_2d({mm.data() + static_cast<size_t>(c) * n, static_cast<size_t>(n)},
                                   {u.data() + static_cast<size_t>(c) * n, static_cast<size_t>(n)},
                                   m->nx(), m->ny(), eps);
    };
    st.rhs = [tendency, eps, m, n](const Buffer& mm, Buffer& out) {
        // Projecting the tendency realizes the pressure gradient.
        tendency->compute(mm, eps, /*with_div_term=*/false, out);
        spectral::leray_2d({out.data(), static_cast<size_t>(n)},
                           {out.data() + n, static_cast<size_t>(n)}, m->nx(), m->ny());
    };

    Buffer m0(static_cast<size_t>(2) * n);
    for (int c = 0; c < 2; c++)
        spectral::apply_symbol_2d(u0.comp(c), {m0.data() + static_cast<size_t>(c) * n, static_cast<size_t>(n)},
                                  m->nx(), m->ny(),
                                  [eps](double kx, double ky) { return 1.0 + eps * eps * (kx * kx + ky * ky); });
    spectral::leray_2d({m0.data(), static_cast<size_t>(n)}, {m0.data() + n, static_cast<size_t>(n)},
                       m->nx(), m->ny());
    return st.run(m0);
}

StationarityReport action_stationarity_check(const Trajectory& trajectory,
                                             const TestFieldFn& w, const TestFieldFn& wdot,
                                             const std::vector<double>& ladder) {
    using namespace geometry;
    if (trajectory.states.size() < 3)
        throw std::invalid_argument("action_stationarity_check: need at least 3 snapshots");
    if (ladder.size() < 2)
        throw std::invalid_argument("action_stationarity_check: need at least 2 perturbation sizes");
    const double t1 = trajectory.states.front().t, t2 = trajectory.states.back().t;
    if (sup_norm(w(t1)) > 1e-12 || sup_norm(w(t2)) > 1e-12)
        throw std::invalid_argument("action_stationarity_check: w must vanish at the endpoints");

    const double eps = trajectory.eps;
    // delta u(t) = wdot + [u, w] along the stored trajectory.
    std::vector<VectorField> du;
    du.reserve(trajectory.states.size());
    for (const SolverState& s : trajectory.states) {
        VectorField v = wdot(s.t);
        v = v + lie_bracket(s.u, w(s.t));
        du.push_back(std::move(v));
    }

    auto action = [&](double h) {
        double acc = 0.0;
        for (size_t s = 0; s < trajectory.states.size(); s++) {
            VectorField uh = trajectory.states[s].u;
            if (h != 0.0) axpy(h, du[s], uh);
            double lag = 0.5 * inner_product(helmholtz_apply(uh, eps), uh);
            double wgt;
            if (s == 0)
                wgt = 0.5 * (trajectory.states[1].t - trajectory.states[0].t);
            else if (s + 1 == trajectory.states.size())
                wgt = 0.5 * (trajectory.states[s].t - trajectory.states[s - 1].t);
            else
                wgt = 0.5 * (trajectory.states[s + 1].t - trajectory.states[s - 1].t);
            acc += wgt * lag;
        }
        return acc;
    };

    StationarityReport rep;
    rep.base_action = action(0.0);
    rep.perturbations = ladder;
    for (double h : ladder) rep.action_changes.push_back(action(h) - rep.base_action);

    // Least-squares slope of log|dS| against log h.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int cnt = 0;
    for (size_t i = 0; i < ladder.size(); i++) {
        if (rep.action_changes[i] == 0.0) continue;
        double x = std::log(std::abs(ladder[i]));
        double y = std::log(std::abs(rep.action_changes[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        cnt++;
    }
    rep.slope = cnt >= 2 ? (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx) : 0.0;
    return rep;
}

} // namespace lam
