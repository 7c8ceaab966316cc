#include <cmath>

#include "doctest.h"
#include "sns/diagnostics.hpp"
#include "sns/stats.hpp"

using namespace sns;

namespace {

struct Bundle {
    ChannelGrid g{16, 16};
    ModeSet ms;
    NoisePath path;
    VelocityField u0;
    EulerRun euler;
    NSRun ns;
    StokesRun stokes;
    double nu;

    explicit Bundle(double nu_ = 2e-3, uint64_t seed = 21) : nu(nu_) {
        ms = ModeSet::build(g, default_modes(2, 0.05, 0.2));
        path = sample_path(2, 20, 0.05, seed);
        u0 = vortex_pair_ic(g, 0.4);
        euler = run_euler(ms, path, u0, true);
        ns = run_ns(ms, path, nu, u0, &euler.trajectory, 5);
        stokes = run_stokes(ms, path, nu, 5);
    }
};

} // namespace

TEST_CASE("kato functionals: arithmetic oracle and coupling guards") {
    Bundle b;
    const StripSpec strip(1.0, 0.5);
    const DiagnosticsRecord rec = kato_functionals(b.ns, b.euler, strip);

    CHECK(rec.nu == b.nu);
    CHECK(rec.delta0 == doctest::Approx(std::sqrt(b.nu)));
    CHECK(rec.t == b.path.t);
    CHECK(rec.err == b.ns.err_vs_ref);
    CHECK(rec.sup_err == doctest::Approx(b.ns.sup_err()));
    CHECK(rec.path_hash == b.path.content_hash());

    // independent trapezoid recomputation from the stored profiles
    const auto frac = strip_row_fractions(b.g, rec.delta0);
    double acc_g = 0.0, acc_a = 0.0;
    std::vector<double> gs(b.ns.t.size()), as(b.ns.t.size());
    for (size_t n = 0; n < b.ns.t.size(); ++n) {
        gs[n] = b.ns.grad_sq[n];
        as[n] = strip_sum(b.ns.profiles[n].n_tau_sq, frac);
    }
    for (size_t n = 1; n < b.ns.t.size(); ++n) {
        const double dt = b.ns.t[n] - b.ns.t[n - 1];
        acc_g += 0.5 * (gs[n - 1] + gs[n]) * dt;
        acc_a += 0.5 * (as[n - 1] + as[n]) * dt;
        CHECK(rec.d_global[n] == doctest::Approx(b.nu * acc_g).epsilon(1e-12));
        CHECK(rec.d_a[n] == doctest::Approx(b.nu * acc_a).epsilon(1e-12));
    }
    CHECK(rec.d_global[0] == 0.0);
    // monotone nondecreasing by construction
    for (size_t n = 1; n < rec.d_b.size(); ++n) {
        CHECK(rec.d_b[n] >= rec.d_b[n - 1]);
        CHECK(rec.d_c[n] >= rec.d_c[n - 1]);
    }

    // width rule: alpha = (2 d_a(T))^{1/3}, delta = min(nu/alpha, delta0)
    CHECK(rec.alpha == doctest::Approx(std::cbrt(2.0 * rec.d_a.back())));
    CHECK(rec.delta ==
          doctest::Approx(std::min(b.nu / rec.alpha, rec.delta0)).epsilon(1e-12));

    // decoupled runs are rejected
    Bundle other(2e-3, 22);
    CHECK_THROWS_AS(kato_functionals(b.ns, other.euler, strip), CouplingViolation);
    // NS run without the error series is rejected
    const NSRun noref = run_ns(b.ms, b.path, b.nu, b.u0, nullptr, 0);
    CHECK_THROWS_AS(kato_functionals(noref, b.euler, strip), std::invalid_argument);
}

TEST_CASE("frozen-field dissipation oracle") {
    // Euler with zero noise and zero initial data stays at zero; NS driven the
    // same way from a pure (1,1)-type mode has d_global = nu int |grad u|^2 dt,
    // recomputed here from an independent quadrature of the stored run.
    ChannelGrid g{16, 16};
    const ModeSet ms = ModeSet::build(g, std::vector<NoiseMode>{});
    const NoisePath p = sample_path(0, 10, 0.01, 1);
    const VelocityField u0 = vortex_pair_ic(g, 0.2);
    const EulerRun eu = run_euler(ms, p, u0, true);
    const double nu = 1e-2;
    const NSRun ns = run_ns(ms, p, nu, u0, &eu.trajectory, 0);
    const DiagnosticsRecord rec = kato_functionals(ns, eu, StripSpec(1.0, 0.5));

    double acc = 0.0;
    const ScalarField w = full_weights(g);
    std::vector<double> gsq(p.t.size());
    for (size_t n = 0; n < p.t.size(); ++n) gsq[n] = ns.grad_sq[n];
    for (size_t n = 1; n < p.t.size(); ++n)
        acc += 0.5 * (gsq[n - 1] + gsq[n]) * (p.t[n] - p.t[n - 1]);
    CHECK(rec.d_global.back() == doctest::Approx(nu * acc).epsilon(1e-12));
    CHECK(rec.d_global.back() > 0.0);
    CHECK(rec.d_a.back() <= rec.d_global.back() / nu * nu + 1e-15);
}

TEST_CASE("gronwall remainders: closed-form oracle") {
    Bundle b;
    const StripSpec strip(1.0, 0.5);
    const DiagnosticsRecord rec = kato_functionals(b.ns, b.euler, strip);
    const auto [gb, gt] = wall_traces(b.euler.trajectory.back());
    const ChannelCorrector cor = build_corrector(gb, gt, rec.delta);
    const GronwallRemainders r =
        gronwall_remainders(b.ns, b.euler, b.stokes, cor, rec.delta, rec.delta0);

    const double dev = stokes_deviation(b.stokes);
    const double d = rec.delta;
    CHECK(r.r1 == doctest::Approx(d + d * d * b.nu + b.nu + b.nu / d + dev * dev)
                      .epsilon(1e-12));
    CHECK(r.r2 == doctest::Approx(b.nu * b.nu * b.ns.sup_energy()).epsilon(1e-12));

    const auto frac = strip_row_fractions(b.g, d);
    double acc = 0.0;
    std::vector<double> ds(b.ns.t.size());
    for (size_t n = 0; n < b.ns.t.size(); ++n)
        ds[n] = strip_sum(b.ns.profiles[n].n_tau_sq, frac);
    for (size_t n = 1; n < b.ns.t.size(); ++n)
        acc += 0.5 * (ds[n - 1] + ds[n]) * (b.ns.t[n] - b.ns.t[n - 1]);
    CHECK(r.r3_int == doctest::Approx(d * d / b.nu * acc).epsilon(1e-12));
    CHECK_FALSE(r.delta_off_rule); // delta came from the rule itself

    // an off-rule width is flagged but not rejected
    const ChannelCorrector cor2 = build_corrector(gb, gt, 0.3);
    const GronwallRemainders r2 =
        gronwall_remainders(b.ns, b.euler, b.stokes, cor2, 0.3, rec.delta0);
    CHECK(r2.delta_off_rule);

    // width disagreement between corrector and argument is rejected
    CHECK_THROWS_AS(
        gronwall_remainders(b.ns, b.euler, b.stokes, cor2, rec.delta, rec.delta0),
        std::invalid_argument);
    // decoupled stokes run is rejected
    Bundle other(2e-3, 22);
    CHECK_THROWS_AS(
        gronwall_remainders(b.ns, b.euler, other.stokes, cor, rec.delta, rec.delta0),
        CouplingViolation);
}

TEST_CASE("splitting residual sits at round-off") {
    Bundle b;
    const double res = splitting_residual(b.ns, b.stokes);
    CHECK(res < 1e-13);

    Bundle other(2e-3, 22);
    CHECK_THROWS_AS(splitting_residual(b.ns, other.stokes), CouplingViolation);
    const StokesRun nosnap = run_stokes(b.ms, b.path, b.nu, 0);
    CHECK_THROWS_AS(splitting_residual(b.ns, nosnap), std::invalid_argument);
}

TEST_CASE("convergence-in-probability intervals") {
    const std::vector<double> errs{0.1, 0.2, 0.3, 0.4};
    SUBCASE("interior count: Wilson interval") {
        const auto est = convergence_in_probability(errs, 0.25);
        CHECK(est.n == 4);
        CHECK(est.exceed == 2);
        CHECK(est.p == doctest::Approx(0.5));
        // Wilson 95% for k=2, n=4, computed independently
        const double z = 1.959963984540054, z2 = z * z, n = 4.0, p = 0.5;
        const double denom = 1.0 + z2 / n;
        const double center = (p + z2 / (2 * n)) / denom;
        const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
        CHECK(est.ci_lo == doctest::Approx(center - half).epsilon(1e-12));
        CHECK(est.ci_hi == doctest::Approx(center + half).epsilon(1e-12));
        CHECK(est.ci_lo > 0.0);
        CHECK(est.ci_hi < 1.0);
    }
    SUBCASE("zero count: rule of three") {
        const auto est = convergence_in_probability(errs, 1.0);
        CHECK(est.p == 0.0);
        CHECK(est.ci_lo == 0.0);
        CHECK(est.ci_hi == doctest::Approx(0.75));
    }
    SUBCASE("full count") {
        const auto est = convergence_in_probability(errs, 0.05);
        CHECK(est.p == 1.0);
        CHECK(est.ci_lo == doctest::Approx(0.25));
        CHECK(est.ci_hi == 1.0);
    }
    CHECK_THROWS(convergence_in_probability({}, 0.1));
}

TEST_CASE("spearman rank correlation") {
    CHECK(spearman({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
    CHECK(spearman({1, 2, 3, 4}, {9, 7, 5, 3}) == doctest::Approx(-1.0));
    // monotone in rank even if wildly nonlinear
    CHECK(spearman({1, 2, 3, 4, 5}, {1, 8, 27, 1000, 1001}) == doctest::Approx(1.0));
    // hand-checked tie case: ranks {1, 2.5, 2.5, 4} vs {1, 2, 3, 4}
    const double r = spearman({1, 2, 2, 3}, {1, 2, 3, 4});
    CHECK(r == doctest::Approx(4.5 / std::sqrt(4.5 * 5.0)));
    CHECK(spearman({1, 1, 1}, {1, 2, 3}) == 0.0);
    CHECK_THROWS(spearman({1.0}, {2.0}));
}

TEST_CASE("bridge functionals match the strip derivative route") {
    Bundle b;
    const VelocityField& u = b.ns.snapshots.back().second;
    const double delta = 0.2;
    const auto [tt, nn] = bridge_functionals(u, delta);
    CHECK(tt == doctest::Approx(strip_derivative_norm_sq(u, delta, StripDeriv::TauTau)));
    CHECK(nn == doctest::Approx(strip_derivative_norm_sq(u, delta, StripDeriv::NN)));
    // on a solenoidal field the cell identity d_x u_x = -d_y u_y makes the two
    // routes agree up to the wall-row one-sided stencils
    CHECK(tt == doctest::Approx(nn).epsilon(0.05));
}
