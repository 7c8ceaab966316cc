#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "sns/field.hpp"

namespace sns {

/// Mean-zero C^2 cutoff: xi == 1 on [0, 0.15], xi == 0 for r >= 1, with
/// integral 0 so the primitive Xi vanishes for r >= 1. Piecewise polynomial,
/// so xi, xi' and Xi are exact.
struct Cutoff {
    double plateau_radius = 0.15;
    double xi(double r) const;
    double xi_prime(double r) const;
    double Xi(double r) const; // int_0^r xi
};

Cutoff build_cutoff();

/// Smooth periodic function of the boundary parameter s in [0,1), stored as
/// samples with spectral differentiation.
class PeriodicTrace {
public:
    PeriodicTrace() = default;
    explicit PeriodicTrace(std::vector<double> samples);
    static PeriodicTrace from_function(int n, const std::function<double(double)>& f);

    double eval(double s) const;
    double deriv(double s) const;
    double deriv2(double s) const;
    int size() const { return static_cast<int>(samples_.size()); }
    const std::vector<double>& samples() const { return samples_; }
    /// spectral tail check: >= 4 points per shortest resolved wavelength
    bool well_resolved(double tail_tol = 1e-8) const;

private:
    std::vector<double> samples_;
    std::vector<double> re_, im_; // DFT coefficients / n
};

/// Tangential Euler traces on the two channel walls, in the per-wall
/// arc-parameter convention (bottom: s = x, tau = +x; top: s = 1-x, tau = -x).
/// Extraction is one-sided second order from the first interior rows.
std::pair<PeriodicTrace, PeriodicTrace> wall_traces(const VelocityField& uE);

/// Kato's artificial corrector on the channel: v_tau = g(s) xi(alpha/delta),
/// v_n = -g'(s) delta Xi(alpha/delta) (h == 1), per wall, supported in the
/// delta-strips. Derivatives come from the closed-form expressions.
class ChannelCorrector {
public:
    ChannelCorrector(PeriodicTrace bottom, PeriodicTrace top, double delta,
                     Cutoff cutoff = build_cutoff());

    double delta() const { return delta_; }
    bool under_resolved() const { return under_resolved_; }

    // collar evaluation; wall 0 = bottom, 1 = top
    double v_tau(int wall, double s, double alpha) const;
    double v_n(int wall, double s, double alpha) const;
    double d_tau_v_tau(int wall, double s, double alpha) const;
    double d_n_v_tau(int wall, double s, double alpha) const;
    double d_tau_v_n(int wall, double s, double alpha) const;
    double d_n_v_n(int wall, double s, double alpha) const;

    /// Cartesian assembly on the staggered grid.
    VelocityField assemble(const ChannelGrid& g) const;

    const PeriodicTrace& trace(int wall) const { return wall == 0 ? bottom_ : top_; }
    const Cutoff& cutoff() const { return xi_; }

private:
    PeriodicTrace bottom_, top_;
    double delta_;
    Cutoff xi_;
    bool under_resolved_ = false;
};

ChannelCorrector build_corrector(const PeriodicTrace& bottom, const PeriodicTrace& top,
                                 double delta, double collar = 0.4);

/// Pointwise residual of the collar divergence identity
/// d_tau(v_tau) + d_n(h v_n) = 0 for a curved wall with curvature kappa(s),
/// the two routes evaluated from independently coded formulas.
double collar_divergence_residual(const PeriodicTrace& g,
                                  const std::function<double(double)>& kappa,
                                  double delta, const Cutoff& xi, int ns = 128,
                                  int na = 128);

struct ScalingReport {
    struct Entry {
        std::string name;
        double expected_slope;
        double fitted_slope;
        double r2;
        std::vector<double> values; // per delta
    };
    std::vector<double> deltas;
    std::vector<Entry> entries;
    bool skipped = false; // degenerate (zero) trace
    std::string to_json() const;
};

/// delta-sweep of the seven corrector functionals; trace_dot is the
/// time-differenced trace used for the d_t v estimate.
ScalingReport verify_scalings(const PeriodicTrace& trace, const PeriodicTrace& trace_dot,
                              const std::vector<double>& deltas);

/// Random-width rule: alpha = dissipation_a^{1/3}, delta = min(nu/alpha, delta0);
/// alpha == 0 selects delta0.
double select_delta(double nu, double delta0, double dissipation_a);

} // namespace sns
