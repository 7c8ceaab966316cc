#include "sns/solver_stokes.hpp"

#include <cmath>

namespace sns {

VelocityField step_stokes(const VelocityField& z, double nu, double dt,
                          const VelocityField& dW) {
    VelocityField rhs = z;
    rhs.axpy(1.0, dW);
    rhs.bc = BcTag::NoSlip;
    VelocityField zs = helmholtz_solve(rhs, nu * dt);
    return leray_project(zs, BcTag::NoSlip);
}

StokesRun run_stokes(const ModeSet& ms, const NoisePath& path, double nu,
                     int snapshot_every) {
    StokesRun run;
    run.grid = ms.grid;
    run.nu = nu;
    run.path_hash = path.content_hash();
    const int M = path.steps();
    run.t = path.t;
    run.energy.resize(M + 1);
    run.deviation.resize(M + 1);

    VelocityField z(ms.grid, BcTag::NoSlip);
    VelocityField W(ms.grid, BcTag::Free);
    run.energy[0] = 0.0;
    run.deviation[0] = 0.0;
    for (int k = 0; k < M; ++k) {
        const VelocityField dW = increment_W(path, ms, k);
        z = step_stokes(z, nu, path.dt(k), dW);
        W.axpy(1.0, dW);
        run.energy[k + 1] = l2_norm_sq(z);
        VelocityField diff = z;
        diff.axpy(-1.0, W);
        run.deviation[k + 1] = std::sqrt(l2_norm_sq(diff));
        const int n = k + 1;
        if (snapshot_every > 0 && (n % snapshot_every <= 1 || n == M))
            run.snapshots.emplace_back(n, z);
    }
    return run;
}

double stokes_deviation(const StokesRun& run) {
    double m = 0.0;
    for (double d : run.deviation) m = std::max(m, d);
    return m;
}

} // namespace sns
