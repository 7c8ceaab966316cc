#pragma once

#include <utility>
#include <vector>

#include "sns/noise.hpp"
#include "sns/ops.hpp"

namespace sns {

/// One trajectory of the linear stochastic Stokes system, driven by a shared
/// noise path, with the deviation from the bare Wiener process tracked.
struct StokesRun {
    ChannelGrid grid;
    double nu = 0.0;
    std::vector<double> t;
    std::vector<double> energy;    // ||z(t_k)||^2
    std::vector<double> deviation; // ||z(t_k) - W(t_k)||_{L2}
    std::vector<std::pair<int, VelocityField>> snapshots; // (node, z)
    uint64_t path_hash = 0;
};

/// Semi-implicit Euler-Maruyama step: (I - nu dt lap) z* = z + dW with
/// no-slip walls, then Leray projection.
VelocityField step_stokes(const VelocityField& z, double nu, double dt,
                          const VelocityField& dW);

/// Integrate from z(0) = 0 over the path's time grid. snapshot_every > 0
/// stores z at that node cadence plus the following node (consecutive pairs,
/// for the splitting-identity check).
StokesRun run_stokes(const ModeSet& ms, const NoisePath& path, double nu,
                     int snapshot_every = 0);

/// sup_t ||z - W||_{L2}.
double stokes_deviation(const StokesRun& run);

} // namespace sns
