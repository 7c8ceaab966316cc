#include "sns/solver_euler.hpp"

#include <cmath>

namespace sns {

VelocityField euler_rhs(const VelocityField& v, const VelocityField& W) {
    VelocityField u = v;
    u.axpy(1.0, W);
    u.bc = BcTag::NoPenetration; // free-slip ghosts in the advection stencil
    VelocityField adv = advect(u);
    adv.scale(-1.0);
    return leray_project(adv, BcTag::NoPenetration);
}

VelocityField step_euler_pathwise(const VelocityField& v, const VelocityField& W0,
                                  const VelocityField& Wmid, const VelocityField& W1,
                                  double dt) {
    {
        VelocityField u = v;
        u.axpy(1.0, W0);
        const double h = std::min(v.grid.dx(), v.grid.dy());
        const double speed = max_speed(u);
        if (speed * dt / h > 0.5) throw StepRejected(0.5 * h / std::max(speed, 1e-300));
    }
    const VelocityField k1 = euler_rhs(v, W0);
    VelocityField s = v;
    s.axpy(0.5 * dt, k1);
    const VelocityField k2 = euler_rhs(s, Wmid);
    s = v;
    s.axpy(0.5 * dt, k2);
    const VelocityField k3 = euler_rhs(s, Wmid);
    s = v;
    s.axpy(dt, k3);
    const VelocityField k4 = euler_rhs(s, W1);

    VelocityField out = v;
    out.axpy(dt / 6.0, k1);
    out.axpy(dt / 3.0, k2);
    out.axpy(dt / 3.0, k3);
    out.axpy(dt / 6.0, k4);
    out.bc = BcTag::NoPenetration;
    return out;
}

EulerRun run_euler(const ModeSet& ms, const NoisePath& path, const VelocityField& u0,
                   bool store_trajectory) {
    EulerRun run;
    run.grid = ms.grid;
    run.trace_q0 = ms.trace_q0();
    run.path_hash = path.content_hash();
    const int M = path.steps();
    run.t = path.t;
    run.energy.resize(M + 1);
    run.ito.assign(M + 1, 0.0);

    VelocityField v = u0;
    v.bc = BcTag::NoPenetration;
    VelocityField W0(ms.grid, BcTag::Free);
    VelocityField uE = v; // u^E = v + W, W(0) = 0

    run.energy[0] = l2_norm_sq(uE);
    if (store_trajectory) run.trajectory.push_back(uE);
    for (int k = 0; k < M; ++k) {
        const VelocityField dW = increment_W(path, ms, k);
        const double left = inner(uE, dW);
        VelocityField W1 = W0;
        W1.axpy(1.0, dW);
        VelocityField Wmid = W0;
        Wmid.axpy(0.5, dW);
        v = step_euler_pathwise(v, W0, Wmid, W1, path.dt(k));
        W0 = W1;
        uE = v;
        uE.axpy(1.0, W0);
        // midpoint-minus-half-compensator estimator of the Ito integral: the
        // |dW|^2 part of <u_{k+1}, dW> cancels the trQ0 compensator pathwise
        run.ito[k + 1] = run.ito[k] + 0.5 * (left + inner(uE, dW)) -
                         0.5 * path.dt(k) * run.trace_q0;
        run.energy[k + 1] = l2_norm_sq(uE);
        if (store_trajectory) run.trajectory.push_back(uE);
    }
    return run;
}

std::vector<double> energy_identity_residual_euler(const EulerRun& run) {
    const int M = static_cast<int>(run.t.size()) - 1;
    std::vector<double> res(M + 1, 0.0);
    for (int n = 1; n <= M; ++n)
        res[n] = run.energy[n] - run.energy[0] - run.t[n] * run.trace_q0 -
                 2.0 * run.ito[n];
    return res;
}

} // namespace sns
