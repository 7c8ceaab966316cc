#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sns/field.hpp"

namespace sns {

/// One noise mode: a compactly supported smooth streamfunction bump
///   psi(x,y) = amp * B((x-cx)/w) * B((y-cy)/w),  B(r) = exp(-1/(1-r^2)),
/// whose perpendicular gradient is the (exactly divergence-free) velocity
/// mode. lambda is the variance weight of its Brownian coefficient.
struct NoiseMode {
    double cx = 0.5, cy = 0.5;
    double w = 0.12;
    double amp = 1.0;
    double lambda = 1.0;
};

/// Interior-supported default mode family; amplitudes lambda_j = 2^{-j}.
std::vector<NoiseMode> default_modes(int count, double amp, double width = 0.12);

/// Streamfunction at a point (zero outside the bump support).
double mode_psi(const NoiseMode& m, double x, double y);

/// Discrete velocity mode: perpendicular differences of the node-sampled
/// streamfunction, so the staggered divergence vanishes to round-off.
VelocityField mode_field(const ChannelGrid& g, const NoiseMode& m);

/// Mode family discretized once and shared by every solver in a sweep.
struct ModeSet {
    ChannelGrid grid;
    std::vector<NoiseMode> modes;
    std::vector<VelocityField> sigma;

    static ModeSet build(const ChannelGrid& g, const std::vector<NoiseMode>& modes);
    int count() const { return static_cast<int>(modes.size()); }
    /// sum_j lambda_j ||sigma_j||^2_{L2}, by grid quadrature.
    double trace_q0() const;
};

/// Per-mode Brownian increments on a master time grid. Increments (not path
/// values) are stored so Brownian-bridge refinement is exact at coarse nodes.
struct NoisePath {
    std::vector<double> t;                  // t_0 = 0 < ... < t_M = T
    std::vector<std::vector<double>> dbeta; // [mode][step]
    uint64_t seed = 0;
    int level = 0; // number of refinements applied

    int steps() const { return static_cast<int>(t.size()) - 1; }
    double T() const { return t.back(); }
    double dt(int k) const { return t[k + 1] - t[k]; }
    int n_modes() const { return static_cast<int>(dbeta.size()); }

    /// Index of an on-grid time; off-grid times are not interpolated.
    int node_index(double time) const;

    uint64_t content_hash() const;
    void save(const std::string& path) const;
    static NoisePath load(const std::string& path);
};

NoisePath sample_path(int n_modes, int steps, double T, uint64_t seed);

/// Brownian-bridge refinement by an integer factor >= 2; values at the
/// coarse nodes are unchanged exactly.
NoisePath refine_path(const NoisePath& p, int factor);

/// W(t_k) = sum_j sqrt(lambda_j) sigma_j sum_{m<k} dbeta_j^m.
VelocityField evaluate_W(const NoisePath& p, const ModeSet& ms, int k);

/// The field increment over step k.
VelocityField increment_W(const NoisePath& p, const ModeSet& ms, int k);

} // namespace sns
