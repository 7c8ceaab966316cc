#include "sns/solver_ns.hpp"

#include <cmath>

#include "sns/noise.hpp"

namespace sns {

VelocityField step_ns(const VelocityField& u, double nu, double dt,
                      const VelocityField& dW) {
    const ChannelGrid& g = u.grid;
    const double h = std::min(g.dx(), g.dy());
    const double speed = max_speed(u);
    if (speed * dt / h > 0.5) throw StepRejected(0.5 * h / std::max(speed, 1e-300));

    VelocityField adv = advect(u);
    VelocityField star = u;
    star.axpy(-dt, adv);
    star.axpy(1.0, dW);
    star.bc = BcTag::NoSlip;
    if (nu > 0.0) star = helmholtz_solve(star, nu * dt);
    return leray_project(star, BcTag::NoSlip);
}

NSRun run_ns(const ModeSet& ms, const NoisePath& path, double nu,
             const VelocityField& u0, const std::vector<VelocityField>* ref,
             int snapshot_every) {
    NSRun run;
    run.grid = ms.grid;
    run.nu = nu;
    run.trace_q0 = ms.trace_q0();
    run.path_hash = path.content_hash();
    const int M = path.steps();
    run.t = path.t;
    run.energy.resize(M + 1);
    run.grad_sq.resize(M + 1);
    run.diss_sq.resize(M + 1);
    run.ito.assign(M + 1, 0.0);
    run.profiles.resize(M + 1);
    if (ref) {
        if (static_cast<int>(ref->size()) != M + 1)
            throw std::invalid_argument("run_ns: reference trajectory length mismatch");
        run.err_vs_ref.resize(M + 1);
    }

    const ScalarField wfull = full_weights(ms.grid);
    VelocityField u = u0;
    u.bc = BcTag::NoSlip;

    auto record = [&](int n) {
        run.energy[n] = l2_norm_sq(u);
        run.profiles[n] = derivative_row_profiles(u);
        double gs = 0.0;
        for (double r : run.profiles[n].grad_sq) gs += r;
        run.grad_sq[n] = gs;
        run.diss_sq[n] = dissipation_norm_sq(u);
        if (ref) {
            VelocityField diff = u;
            diff.axpy(-1.0, (*ref)[n]);
            run.err_vs_ref[n] = std::sqrt(l2_norm_sq(diff));
        }
        if (snapshot_every > 0 && (n % snapshot_every <= 1 || n == M))
            run.snapshots.emplace_back(n, u);
    };
    record(0);
    for (int k = 0; k < M; ++k) {
        const VelocityField dW = increment_W(path, ms, k);
        run.ito[k + 1] = run.ito[k] + inner(u, dW); // left endpoint: Ito
        u = step_ns(u, nu, path.dt(k), dW);
        record(k + 1);
    }
    return run;
}

std::vector<double> energy_identity_residual_ns(const NSRun& run) {
    const int M = static_cast<int>(run.t.size()) - 1;
    std::vector<double> res(M + 1, 0.0);
    // trapezoidal accumulation of -<u, lap u> dt with the scheme's own
    // Laplacian; the one-sided grad_sq quadrature differs by O(h^2) at the
    // walls and would mask the O(dt) behaviour of the residual
    double visc = 0.0;
    for (int n = 1; n <= M; ++n) {
        visc += 0.5 * (run.diss_sq[n - 1] + run.diss_sq[n]) * (run.t[n] - run.t[n - 1]);
        res[n] = run.energy[n] + 2.0 * run.nu * visc - run.energy[0] -
                 run.t[n] * run.trace_q0 - 2.0 * run.ito[n];
    }
    return res;
}

double NSRun::sup_energy() const {
    double m = 0.0;
    for (double e : energy) m = std::max(m, e);
    return m;
}

double NSRun::sup_err() const {
    double m = 0.0;
    for (double e : err_vs_ref) m = std::max(m, e);
    return m;
}

VelocityField vortex_pair_ic(const ChannelGrid& g, double amplitude) {
    // counter-rotating bump dipole away from the walls
    const int nx = g.nx, ny = g.ny;
    const double dx = g.dx(), dy = g.dy();
    auto bump = [](double r) {
        const double r2 = r * r;
        return r2 >= 1.0 ? 0.0 : std::exp(-1.0 / (1.0 - r2));
    };
    auto psi = [&](double x, double y) {
        const double w = 0.18;
        return amplitude * (bump(std::hypot(x - 0.38, y - 0.5) / w) -
                            bump(std::hypot(x - 0.62, y - 0.5) / w)) /
               bump(0.0);
    };
    VelocityField f(g, BcTag::NoSlip);
    std::vector<double> ps((ny + 1) * nx);
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i < nx; ++i) ps[j * nx + i] = psi(i * dx, j * dy);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            f.U(i, j) = (ps[(j + 1) * nx + i] - ps[j * nx + i]) / dy;
    const int nvr = g.nvrows();
    for (int j = 0; j < nvr; ++j)
        for (int i = 0; i < nx; ++i)
            f.V(i, j) = -(ps[j * nx + g.wrapx(i + 1)] - ps[j * nx + i]) / dx;
    VelocityField out = leray_project(f, BcTag::NoSlip);
    const double sp = max_speed(out);
    if (sp > 0.0) out.scale(amplitude / sp); // amplitude == peak speed
    return out;
}

} // namespace sns
