#include "sns/corrector.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "sns/stats.hpp"
#include "json.hpp"

namespace sns {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// xi = eta - c*phi: eta falls from 1 to 0 over [0.15, 0.35] (quintic
// smoothstep), phi = 64 t^3 (1-t)^3 supported on [0.40, 0.95]. c balances the
// integrals: int eta = 0.25, int phi = 0.55 * 64 / 140, so c = 35 / 35.2.
constexpr double kEtaLo = 0.15, kEtaHi = 0.35, kEtaW = kEtaHi - kEtaLo;
constexpr double kPhiLo = 0.40, kPhiHi = 0.95, kPhiW = kPhiHi - kPhiLo;
constexpr double kBal = 35.0 / 35.2;

double smooth5(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }
double smooth5_d(double t) {
    const double u = t * (1.0 - t);
    return 30.0 * u * u;
}
// int_0^t smooth5
double smooth5_I(double t) {
    const double t4 = t * t * t * t;
    return t4 * (2.5 + t * (-3.0 + t));
}

double phi(double t) {
    const double u = t * (1.0 - t);
    return 64.0 * u * u * u;
}
double phi_d(double t) {
    const double u = t * (1.0 - t);
    return 64.0 * 3.0 * u * u * (1.0 - 2.0 * t);
}
// int_0^t phi / 64
double phi_I(double t) {
    return t * t * t * t * (0.25 + t * (-0.6 + t * (0.5 - t / 7.0)));
}

} // namespace

double Cutoff::xi(double r) const {
    if (r < 0.0) throw std::invalid_argument("Cutoff: negative argument");
    double v = 0.0;
    if (r <= kEtaLo)
        v = 1.0;
    else if (r < kEtaHi)
        v = 1.0 - smooth5((r - kEtaLo) / kEtaW);
    if (r > kPhiLo && r < kPhiHi) v -= kBal * phi((r - kPhiLo) / kPhiW);
    return v;
}

double Cutoff::xi_prime(double r) const {
    if (r < 0.0) throw std::invalid_argument("Cutoff: negative argument");
    double v = 0.0;
    if (r > kEtaLo && r < kEtaHi) v = -smooth5_d((r - kEtaLo) / kEtaW) / kEtaW;
    if (r > kPhiLo && r < kPhiHi) v -= kBal * phi_d((r - kPhiLo) / kPhiW) / kPhiW;
    return v;
}

double Cutoff::Xi(double r) const {
    if (r < 0.0) throw std::invalid_argument("Cutoff: negative argument");
    double v;
    if (r <= kEtaLo)
        v = r;
    else if (r < kEtaHi) {
        const double t = (r - kEtaLo) / kEtaW;
        v = kEtaLo + kEtaW * (t - smooth5_I(t));
    } else
        v = kEtaLo + 0.5 * kEtaW; // = 0.25
    if (r > kPhiLo) {
        const double t = std::min((r - kPhiLo) / kPhiW, 1.0);
        v -= kBal * kPhiW * 64.0 * phi_I(t);
    }
    return v;
}

Cutoff build_cutoff() { return Cutoff{}; }

PeriodicTrace::PeriodicTrace(std::vector<double> samples) : samples_(std::move(samples)) {
    const int n = static_cast<int>(samples_.size());
    if (n < 4) throw std::invalid_argument("PeriodicTrace: need >= 4 samples");
    re_.assign(n, 0.0);
    im_.assign(n, 0.0);
    for (int m = 0; m < n; ++m) {
        double sr = 0.0, si = 0.0;
        for (int i = 0; i < n; ++i) {
            const double w = -kTwoPi * m * i / n;
            sr += samples_[i] * std::cos(w);
            si += samples_[i] * std::sin(w);
        }
        re_[m] = sr / n;
        im_[m] = si / n;
    }
}

PeriodicTrace PeriodicTrace::from_function(int n, const std::function<double(double)>& f) {
    std::vector<double> s(n);
    for (int i = 0; i < n; ++i) s[i] = f(double(i) / n);
    return PeriodicTrace(std::move(s));
}

namespace {
int bin_freq(int m, int n) { return m <= n / 2 ? m : m - n; }
} // namespace

double PeriodicTrace::eval(double s) const {
    const int n = size();
    double v = 0.0;
    for (int m = 0; m < n; ++m) {
        const double w = kTwoPi * bin_freq(m, n) * s;
        v += re_[m] * std::cos(w) - im_[m] * std::sin(w);
    }
    return v;
}

double PeriodicTrace::deriv(double s) const {
    const int n = size();
    double v = 0.0;
    for (int m = 0; m < n; ++m) {
        if (n % 2 == 0 && m == n / 2) continue; // derivative of the Nyquist mode
        const double om = kTwoPi * bin_freq(m, n);
        const double w = om * s;
        v += -om * (re_[m] * std::sin(w) + im_[m] * std::cos(w));
    }
    return v;
}

double PeriodicTrace::deriv2(double s) const {
    const int n = size();
    double v = 0.0;
    for (int m = 0; m < n; ++m) {
        const double om = kTwoPi * bin_freq(m, n);
        const double w = om * s;
        v += -om * om * (re_[m] * std::cos(w) - im_[m] * std::sin(w));
    }
    return v;
}

bool PeriodicTrace::well_resolved(double tail_tol) const {
    const int n = size();
    double total = 0.0, tail = 0.0;
    for (int m = 1; m < n; ++m) {
        const double e = re_[m] * re_[m] + im_[m] * im_[m];
        total += e;
        if (std::abs(bin_freq(m, n)) > n / 4) tail += e;
    }
    return total == 0.0 || tail <= tail_tol * total;
}

std::pair<PeriodicTrace, PeriodicTrace> wall_traces(const VelocityField& uE) {
    const ChannelGrid& g = uE.grid;
    if (g.walls != WallMode::Walls)
        throw std::invalid_argument("wall_traces: grid has no walls");
    const int nx = g.nx, ny = g.ny;
    std::vector<double> gb(nx), gt(nx);
    for (int i = 0; i < nx; ++i) {
        // linear extrapolation from the first two interior u rows to the wall
        gb[i] = 1.5 * uE.U(i, 0) - 0.5 * uE.U(i, 1);
        const double top = 1.5 * uE.U(i, ny - 1) - 0.5 * uE.U(i, ny - 2);
        gt[(nx - i) % nx] = -top; // top wall runs in -x, s = 1 - x
    }
    return {PeriodicTrace(std::move(gb)), PeriodicTrace(std::move(gt))};
}

ChannelCorrector::ChannelCorrector(PeriodicTrace bottom, PeriodicTrace top, double delta,
                                   Cutoff cutoff)
    : bottom_(std::move(bottom)), top_(std::move(top)), delta_(delta), xi_(cutoff) {
    if (!(delta_ > 0.0)) throw std::invalid_argument("corrector: delta must be positive");
    under_resolved_ = !bottom_.well_resolved() || !top_.well_resolved();
}

double ChannelCorrector::v_tau(int wall, double s, double alpha) const {
    if (alpha >= delta_) return 0.0;
    return trace(wall).eval(s) * xi_.xi(alpha / delta_);
}

double ChannelCorrector::v_n(int wall, double s, double alpha) const {
    if (alpha >= delta_) return 0.0;
    return -trace(wall).deriv(s) * delta_ * xi_.Xi(alpha / delta_);
}

double ChannelCorrector::d_tau_v_tau(int wall, double s, double alpha) const {
    if (alpha >= delta_) return 0.0;
    return trace(wall).deriv(s) * xi_.xi(alpha / delta_);
}

double ChannelCorrector::d_n_v_tau(int wall, double s, double alpha) const {
    if (alpha >= delta_) return 0.0;
    return trace(wall).eval(s) * xi_.xi_prime(alpha / delta_) / delta_;
}

double ChannelCorrector::d_tau_v_n(int wall, double s, double alpha) const {
    if (alpha >= delta_) return 0.0;
    return -trace(wall).deriv2(s) * delta_ * xi_.Xi(alpha / delta_);
}

double ChannelCorrector::d_n_v_n(int wall, double s, double alpha) const {
    if (alpha >= delta_) return 0.0;
    return -trace(wall).deriv(s) * xi_.xi(alpha / delta_);
}

VelocityField ChannelCorrector::assemble(const ChannelGrid& g) const {
    if (g.walls != WallMode::Walls)
        throw std::invalid_argument("corrector: grid has no walls");
    VelocityField f(g, BcTag::NoPenetration);
    const double dx = g.dx(), dy = g.dy();
    for (int j = 0; j < g.ny; ++j) {
        const double y = (j + 0.5) * dy;
        for (int i = 0; i < g.nx; ++i) {
            const double x = i * dx;
            // tangential parts; top wall has tau = -x
            f.U(i, j) = v_tau(0, x, y) - v_tau(1, 1.0 - x, 1.0 - y);
        }
    }
    for (int j = 0; j <= g.ny; ++j) {
        const double y = j * dy;
        for (int i = 0; i < g.nx; ++i) {
            const double x = (i + 0.5) * dx;
            // normal parts; top wall has n = -y
            f.V(i, j) = v_n(0, x, y) - v_n(1, 1.0 - x, 1.0 - y);
        }
    }
    return f;
}

ChannelCorrector build_corrector(const PeriodicTrace& bottom, const PeriodicTrace& top,
                                 double delta, double collar) {
    if (delta > collar) throw std::invalid_argument("corrector: delta exceeds the collar");
    return ChannelCorrector(bottom, top, delta);
}

double collar_divergence_residual(const PeriodicTrace& g,
                                  const std::function<double(double)>& kappa,
                                  double delta, const Cutoff& xi, int ns, int na) {
    // d_tau(v_tau) + d_n(h v_n), the second route expanded by the product rule
    // with v_n = -g' delta Xi / h and h = 1 - alpha kappa.
    double worst = 0.0;
    for (int is = 0; is < ns; ++is) {
        const double s = double(is) / ns;
        const double gp = g.deriv(s);
        const double k = kappa(s);
        for (int ia = 0; ia < na; ++ia) {
            const double alpha = (ia + 0.5) * delta / na;
            const double r = alpha / delta;
            const double h = 1.0 - alpha * k;
            const double vn = -gp * delta * xi.Xi(r) / h;
            const double dvn = -gp * delta * (xi.xi(r) / (delta * h) + k * xi.Xi(r) / (h * h));
            const double route1 = gp * xi.xi(r);
            const double route2 = (-k) * vn + h * dvn;
            worst = std::max(worst, std::abs(route1 + route2));
        }
    }
    return worst;
}

ScalingReport verify_scalings(const PeriodicTrace& trace, const PeriodicTrace& trace_dot,
                              const std::vector<double>& deltas) {
    ScalingReport rep;
    rep.deltas = deltas;
    rep.entries = {{"v_L2", 0.5, 0.0, 0.0, {}},
                   {"dt_v_L2", 0.5, 0.0, 0.0, {}},
                   {"grad_v_L2", -0.5, 0.0, 0.0, {}},
                   {"v_sup", 0.0, 0.0, 0.0, {}},
                   {"grad_v_sup", -1.0, 0.0, 0.0, {}},
                   {"rho_grad_v_sup", 0.0, 0.0, 0.0, {}},
                   {"rho2_grad_v_sup", 1.0, 0.0, 0.0, {}}};

    double gmax = 0.0;
    for (double v : trace.samples()) gmax = std::max(gmax, std::abs(v));
    if (gmax < 1e-14) {
        rep.skipped = true;
        return rep;
    }

    const Cutoff xi = build_cutoff();
    const int ns = 192, na = 192;
    for (double delta : deltas) {
        if (!(delta > 0.0)) throw std::invalid_argument("verify_scalings: bad delta");
        double l2v = 0.0, l2dt = 0.0, l2g = 0.0;
        double supv = 0.0, supg = 0.0, suprg = 0.0, suprg2 = 0.0;
        const double da = delta / na, ds = 1.0 / ns;
        for (int is = 0; is < ns; ++is) {
            const double s = double(is) / ns;
            const double g0 = trace.eval(s), g1 = trace.deriv(s), g2 = trace.deriv2(s);
            const double d0 = trace_dot.eval(s), d1 = trace_dot.deriv(s);
            for (int ia = 0; ia < na; ++ia) {
                const double alpha = (ia + 0.5) * da;
                const double r = alpha / delta;
                const double x = xi.xi(r), xp = xi.xi_prime(r), X = xi.Xi(r);
                const double vt = g0 * x, vn = -g1 * delta * X;
                const double dtt = g1 * x, dnt = g0 * xp / delta;
                const double dtn = -g2 * delta * X, dnn = -g1 * x;
                const double dvt = d0 * x, dvn = -d1 * delta * X;
                const double w = ds * da;
                l2v += w * (vt * vt + vn * vn);
                l2dt += w * (dvt * dvt + dvn * dvn);
                const double g2sum = dtt * dtt + dnt * dnt + dtn * dtn + dnn * dnn;
                l2g += w * g2sum;
                supv = std::max(supv, std::hypot(vt, vn));
                const double gf = std::sqrt(g2sum);
                supg = std::max(supg, gf);
                suprg = std::max(suprg, alpha * gf);
                suprg2 = std::max(suprg2, alpha * alpha * gf);
            }
        }
        rep.entries[0].values.push_back(std::sqrt(l2v));
        rep.entries[1].values.push_back(std::sqrt(l2dt));
        rep.entries[2].values.push_back(std::sqrt(l2g));
        rep.entries[3].values.push_back(supv);
        rep.entries[4].values.push_back(supg);
        rep.entries[5].values.push_back(suprg);
        rep.entries[6].values.push_back(suprg2);
    }
    for (auto& e : rep.entries) {
        const LinFit f = fit_loglog(deltas, e.values);
        e.fitted_slope = f.slope;
        e.r2 = f.r2;
    }
    return rep;
}

std::string ScalingReport::to_json() const {
    nlohmann::json j;
    j["deltas"] = deltas;
    j["skipped"] = skipped;
    j["functionals"] = nlohmann::json::array();
    for (const auto& e : entries) {
        nlohmann::json je;
        je["name"] = e.name;
        je["expected_slope"] = e.expected_slope;
        je["fitted_slope"] = e.fitted_slope;
        je["r2"] = e.r2;
        je["values"] = e.values;
        j["functionals"].push_back(je);
    }
    return j.dump(2);
}

double select_delta(double nu, double delta0, double dissipation_a) {
    if (!(nu >= 0.0) || !(delta0 > 0.0))
        throw std::invalid_argument("select_delta: bad arguments");
    if (dissipation_a <= 0.0) return delta0;
    const double a = std::cbrt(dissipation_a);
    return std::min(nu / a, delta0);
}

} // namespace sns
