#pragma once

#include <vector>

#include "sns/noise.hpp"
#include "sns/ops.hpp"
#include "sns/solver_ns.hpp" // StepRejected

namespace sns {

/// -P((v+W).grad (v+W)) with no-penetration walls.
VelocityField euler_rhs(const VelocityField& v, const VelocityField& W);

/// Classical RK4 on the pathwise form (v = u - W solves a PDE with random
/// parameter); W is sampled at the stage times, piecewise linear in t.
VelocityField step_euler_pathwise(const VelocityField& v, const VelocityField& W0,
                                  const VelocityField& Wmid, const VelocityField& W1,
                                  double dt);

struct EulerRun {
    ChannelGrid grid;
    double trace_q0 = 0.0;
    std::vector<double> t;
    std::vector<double> energy; // ||u^E||^2 at nodes
    // Ito-integral estimator sum_k <(u_k + u_{k+1})/2, dW_k> - t trQ0 / 2.
    // For additive noise this equals the left-endpoint sum in expectation but
    // cancels the sum-of-|dW|^2 chi-square fluctuation exactly, so the energy
    // identity residual decays at O(dt) instead of the Ito-sum O(sqrt(dt)).
    std::vector<double> ito;
    std::vector<VelocityField> trajectory; // u^E at nodes (when stored)
    uint64_t path_hash = 0;
};

EulerRun run_euler(const ModeSet& ms, const NoisePath& path, const VelocityField& u0,
                   bool store_trajectory = false);

std::vector<double> energy_identity_residual_euler(const EulerRun& run);

} // namespace sns
