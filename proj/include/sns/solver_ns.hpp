#pragma once

#include <utility>
#include <vector>

#include "sns/noise.hpp"
#include "sns/ops.hpp"

namespace sns {

/// Raised when the advective CFL bound max|u| dt / min(dx,dy) <= 0.5 fails;
/// carries the largest admissible step.
struct StepRejected : std::runtime_error {
    double admissible_dt;
    explicit StepRejected(double adm)
        : std::runtime_error("CFL violation: step rejected"), admissible_dt(adm) {}
};

/// One step of the no-slip Navier-Stokes scheme: explicit skew-symmetric
/// advection, add the noise increment, implicit diffusion, Leray projection.
VelocityField step_ns(const VelocityField& u, double nu, double dt,
                      const VelocityField& dW);

struct NSRun {
    ChannelGrid grid;
    double nu = 0.0;
    double trace_q0 = 0.0;
    std::vector<double> t;
    std::vector<double> energy;  // ||u||^2 at nodes
    std::vector<double> grad_sq; // full-domain ||grad u||^2 at nodes
    std::vector<double> diss_sq; // scheme-consistent -<u, lap u> at nodes
    std::vector<double> ito;     // left-endpoint sum of <u(t_k), dW_k>
    std::vector<DerivRowProfiles> profiles; // per node, for strip functionals
    std::vector<double> err_vs_ref;         // ||u - ref||_{L2} when a reference is given
    std::vector<std::pair<int, VelocityField>> snapshots;
    uint64_t path_hash = 0;

    double sup_energy() const;
    double sup_err() const;
};

/// Integrate on the path's time grid from u0. `ref` (same grid/time grid)
/// enables the pathwise error series without storing this trajectory.
NSRun run_ns(const ModeSet& ms, const NoisePath& path, double nu,
             const VelocityField& u0,
             const std::vector<VelocityField>* ref = nullptr,
             int snapshot_every = 0);

/// residual(t) of the Ito energy identity, one value per node.
std::vector<double> energy_identity_residual_ns(const NSRun& run);

/// Smooth interior vortex-pair initial data, projected into the discrete
/// divergence-free space.
VelocityField vortex_pair_ic(const ChannelGrid& g, double amplitude);

} // namespace sns
