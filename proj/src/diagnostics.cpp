#include "sns/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace sns {

namespace {

void require_coupled(uint64_t a, uint64_t b, const char* what) {
    if (a != b) throw CouplingViolation(std::string("noise paths differ: ") + what);
}

// cumulative trapezoid of a node series f against the time grid
std::vector<double> cumtrapz(const std::vector<double>& t, const std::vector<double>& f) {
    std::vector<double> out(t.size(), 0.0);
    for (size_t n = 1; n < t.size(); ++n)
        out[n] = out[n - 1] + 0.5 * (f[n - 1] + f[n]) * (t[n] - t[n - 1]);
    return out;
}

} // namespace

DiagnosticsRecord kato_functionals(const NSRun& ns, const EulerRun& euler,
                                   const StripSpec& strip) {
    require_coupled(ns.path_hash, euler.path_hash, "ns vs euler");
    if (!(ns.grid == euler.grid))
        throw std::invalid_argument("kato_functionals: grid mismatch");
    if (ns.t != euler.t)
        throw std::invalid_argument("kato_functionals: time grid mismatch");
    if (ns.err_vs_ref.size() != ns.t.size())
        throw std::invalid_argument(
            "kato_functionals: NS run lacks the error series (run with ref)");

    DiagnosticsRecord rec;
    rec.nu = ns.nu;
    rec.delta0 = strip.delta0(ns.nu);
    rec.t = ns.t;
    rec.err = ns.err_vs_ref;
    rec.sup_err = ns.sup_err();
    rec.path_hash = ns.path_hash;

    const size_t M1 = ns.t.size();
    const auto frac = strip_row_fractions(ns.grid, rec.delta0);
    std::vector<double> g(M1), a(M1), b(M1), c(M1);
    for (size_t n = 0; n < M1; ++n) {
        g[n] = ns.grad_sq[n];
        a[n] = strip_sum(ns.profiles[n].n_tau_sq, frac);
        b[n] = strip_sum(ns.profiles[n].tau_tau_sq, frac);
        c[n] = strip_sum(ns.profiles[n].n_n_sq, frac);
    }
    rec.d_global = cumtrapz(ns.t, g);
    rec.d_a = cumtrapz(ns.t, a);
    rec.d_b = cumtrapz(ns.t, b);
    rec.d_c = cumtrapz(ns.t, c);
    for (double* series : {rec.d_global.data(), rec.d_a.data(), rec.d_b.data(),
                           rec.d_c.data()})
        for (size_t n = 0; n < M1; ++n) series[n] *= ns.nu;

    const double dissipation_a = 2.0 * rec.d_a.back();
    rec.alpha = std::cbrt(dissipation_a);
    rec.delta = select_delta(ns.nu, rec.delta0, dissipation_a);
    return rec;
}

GronwallRemainders gronwall_remainders(const NSRun& ns, const EulerRun& euler,
                                       const StokesRun& stokes,
                                       const ChannelCorrector& corrector, double delta,
                                       double delta0) {
    require_coupled(ns.path_hash, euler.path_hash, "ns vs euler");
    require_coupled(ns.path_hash, stokes.path_hash, "ns vs stokes");
    if (stokes.nu != ns.nu)
        throw std::invalid_argument("gronwall_remainders: viscosity mismatch");
    if (!(ns.nu > 0.0))
        throw std::invalid_argument("gronwall_remainders: needs nu > 0");
    if (std::abs(corrector.delta() - delta) > 1e-12 * std::max(1.0, delta))
        throw std::invalid_argument("gronwall_remainders: corrector width != delta");

    GronwallRemainders r;
    const double dev = stokes_deviation(stokes);
    r.r1 = delta + delta * delta * ns.nu + ns.nu + ns.nu / delta + dev * dev;
    r.r2 = ns.nu * ns.nu * ns.sup_energy();

    const auto frac = strip_row_fractions(ns.grid, delta);
    std::vector<double> diss(ns.t.size());
    for (size_t n = 0; n < ns.t.size(); ++n)
        diss[n] = strip_sum(ns.profiles[n].n_tau_sq, frac);
    r.r3_int = delta * delta / ns.nu * cumtrapz(ns.t, diss).back();

    const auto frac0 = strip_row_fractions(ns.grid, delta0);
    std::vector<double> diss0(ns.t.size());
    for (size_t n = 0; n < ns.t.size(); ++n)
        diss0[n] = strip_sum(ns.profiles[n].n_tau_sq, frac0);
    const double rule =
        select_delta(ns.nu, delta0, 2.0 * ns.nu * cumtrapz(ns.t, diss0).back());
    r.delta_off_rule = std::abs(rule - delta) > 1e-9 * std::max(1.0, delta);
    return r;
}

double splitting_residual(const NSRun& ns, const StokesRun& stokes) {
    require_coupled(ns.path_hash, stokes.path_hash, "ns vs stokes");
    if (!(ns.grid == stokes.grid))
        throw std::invalid_argument("splitting_residual: grid mismatch");
    if (ns.nu != stokes.nu)
        throw std::invalid_argument("splitting_residual: viscosity mismatch");

    std::map<int, const VelocityField*> zs;
    for (const auto& [n, z] : stokes.snapshots) zs[n] = &z;
    std::map<int, const VelocityField*> us;
    for (const auto& [n, u] : ns.snapshots) us[n] = &u;

    double worst = 0.0;
    bool any = false;
    for (const auto& [n, u0] : us) {
        auto u1 = us.find(n + 1);
        auto z0 = zs.find(n), z1 = zs.find(n + 1);
        if (u1 == us.end() || z0 == zs.end() || z1 == zs.end()) continue;
        any = true;
        const double dt = ns.t[n + 1] - ns.t[n];

        VelocityField v = *u0;
        v.axpy(-1.0, *z0->second);
        VelocityField star = v;
        star.axpy(-dt, advect(*u0));
        star.bc = BcTag::NoSlip;
        if (ns.nu > 0.0) star = helmholtz_solve(star, ns.nu * dt);
        VelocityField w = leray_project(star, BcTag::NoSlip);

        VelocityField v1 = *u1->second;
        v1.axpy(-1.0, *z1->second);
        v1.axpy(-1.0, w);
        worst = std::max(worst, std::sqrt(l2_norm_sq(v1)));
    }
    if (!any)
        throw std::invalid_argument("splitting_residual: no matched snapshot pairs");
    return worst;
}

ProbabilityEstimate convergence_in_probability(const std::vector<double>& sup_errors,
                                               double eps) {
    if (sup_errors.empty())
        throw std::invalid_argument("convergence_in_probability: empty ensemble");
    ProbabilityEstimate est;
    est.n = static_cast<int>(sup_errors.size());
    for (double e : sup_errors)
        if (e > eps) ++est.exceed;
    est.p = double(est.exceed) / est.n;
    const double n = est.n;
    if (est.exceed == 0) {
        est.ci_lo = 0.0;
        est.ci_hi = std::min(1.0, 3.0 / n); // rule of three
    } else if (est.exceed == est.n) {
        est.ci_lo = std::max(0.0, 1.0 - 3.0 / n);
        est.ci_hi = 1.0;
    } else {
        const double z = 1.959963984540054; // 95% two-sided
        const double z2 = z * z;
        const double denom = 1.0 + z2 / n;
        const double center = (est.p + z2 / (2.0 * n)) / denom;
        const double half =
            z * std::sqrt(est.p * (1.0 - est.p) / n + z2 / (4.0 * n * n)) / denom;
        est.ci_lo = std::max(0.0, center - half);
        est.ci_hi = std::min(1.0, center + half);
    }
    return est;
}

std::pair<double, double> bridge_functionals(const VelocityField& u, double delta) {
    return {strip_derivative_norm_sq(u, delta, StripDeriv::TauTau),
            strip_derivative_norm_sq(u, delta, StripDeriv::NN)};
}

} // namespace sns
