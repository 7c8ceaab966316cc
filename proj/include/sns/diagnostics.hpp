#pragma once

#include <stdexcept>
#include <vector>

#include "sns/corrector.hpp"
#include "sns/geometry.hpp"
#include "sns/solver_euler.hpp"
#include "sns/solver_ns.hpp"
#include "sns/solver_stokes.hpp"

namespace sns {

/// Runs being compared were driven by different noise realizations.
struct CouplingViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Per-(nu, seed) post-processing output: the dissipation functionals, the
/// pathwise error series against the zero-viscosity run, and the
/// boundary-strip bookkeeping.
struct DiagnosticsRecord {
    double nu = 0.0;
    double delta0 = 0.0; // strip width delta0(nu)
    std::vector<double> t;
    std::vector<double> d_global; // nu int_0^t |grad u|^2 (full domain)
    std::vector<double> d_a;      // nu int_0^t |d_n u_tau|^2 on the strip
    std::vector<double> d_b;      // nu int_0^t |d_tau u_tau|^2 on the strip
    std::vector<double> d_c;      // nu int_0^t |d_n u_n|^2 on the strip
    std::vector<double> err;      // ||u(t) - u_ref(t)||_{L2}
    double sup_err = 0.0;
    double alpha = 0.0; // cube root of the strip dissipation, the width driver
    double delta = 0.0; // selected random strip width
    // Gronwall-style remainders (unit constants, L2 deviation norm)
    double r1 = 0.0;
    double r2 = 0.0;
    double r3_int = 0.0;
    bool delta_off_rule = false;
    uint64_t path_hash = 0;
};

/// Dissipation time series and the delta selection; the NS run must carry the
/// error series against the Euler trajectory (run_ns with ref).
DiagnosticsRecord kato_functionals(const NSRun& ns, const EulerRun& euler,
                                   const StripSpec& strip);

struct GronwallRemainders {
    double r1 = 0.0;
    double r2 = 0.0;
    double r3_int = 0.0;
    bool delta_off_rule = false; // delta disagrees with the selection rule
};

GronwallRemainders gronwall_remainders(const NSRun& ns, const EulerRun& euler,
                                       const StokesRun& stokes,
                                       const ChannelCorrector& corrector, double delta,
                                       double delta0);

/// Largest one-step defect of v = u - z re-stepped with advection by u and no
/// noise, over the matched snapshot pairs of the two runs. The discrete
/// splitting is exact, so this lands at round-off.
double splitting_residual(const NSRun& ns, const StokesRun& stokes);

struct ProbabilityEstimate {
    double p = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 1.0;
    int n = 0;
    int exceed = 0;
};

/// Empirical P[sup-error > eps] with a 95% interval (rule of three at the
/// degenerate ends, Wilson otherwise).
ProbabilityEstimate convergence_in_probability(const std::vector<double>& sup_errors,
                                               double eps);

/// Strip functionals from the two routes of the divergence identity on the
/// channel: { int (d_tau u_tau)^2, int (d_n u_n)^2 } over both strips.
std::pair<double, double> bridge_functionals(const VelocityField& u, double delta);

} // namespace sns
