#include "sns/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "sns/ops.hpp"
#include "xspectral.hpp"

namespace sns {

namespace {

constexpr int kSamples = 1024; // resampling resolution for the reparameterization
constexpr double kTwoPi = 2.0 * M_PI;

double eval_fourier(const BoundaryCurve::FourierSpec& f, double t) {
    double s = f.a0;
    for (size_t m = 0; m < f.a.size(); ++m) {
        const double w = kTwoPi * (m + 1) * t;
        s += f.a[m] * std::cos(w);
        if (m < f.b.size()) s += f.b[m] * std::sin(w);
    }
    return s;
}

double eval_fourier_d(const BoundaryCurve::FourierSpec& f, double t) {
    double s = 0.0;
    for (size_t m = 0; m < f.a.size(); ++m) {
        const double om = kTwoPi * (m + 1);
        const double w = om * t;
        s += -f.a[m] * om * std::sin(w);
        if (m < f.b.size()) s += f.b[m] * om * std::cos(w);
    }
    return s;
}

} // namespace

BoundaryCurve::BoundaryCurve(const FourierSpec& xs, const FourierSpec& ys) {
    // cumulative arc length on a fine grid, then invert to constant speed
    const int fine = 16 * kSamples;
    std::vector<double> cum(fine + 1, 0.0);
    auto speed = [&](double t) {
        const double dx = eval_fourier_d(xs, t), dy = eval_fourier_d(ys, t);
        return std::hypot(dx, dy);
    };
    const double ht = 1.0 / fine;
    for (int m = 0; m < fine; ++m) {
        // Simpson on each subinterval
        const double t0 = m * ht, t1 = (m + 1) * ht, tm = 0.5 * (t0 + t1);
        cum[m + 1] = cum[m] + ht / 6.0 * (speed(t0) + 4.0 * speed(tm) + speed(t1));
    }
    length_ = cum[fine];

    std::vector<double> px(kSamples), py(kSamples);
    int lo = 0;
    for (int i = 0; i < kSamples; ++i) {
        const double target = length_ * i / kSamples;
        while (lo + 1 < fine && cum[lo + 1] < target) ++lo;
        double t = (lo + (target - cum[lo]) / std::max(cum[lo + 1] - cum[lo], 1e-300)) * ht;
        // Newton refinement on cum(t) = target
        for (int it = 0; it < 40; ++it) {
            // local arc length from node lo via Simpson
            const double t0 = lo * ht;
            const double seg = (t - t0);
            const double f = cum[lo] +
                             seg / 6.0 * (speed(t0) + 4.0 * speed(t0 + 0.5 * seg) + speed(t)) -
                             target;
            const double df = speed(t);
            const double step = f / df;
            t -= step;
            if (std::abs(step) < 1e-15) break;
        }
        px[i] = eval_fourier(xs, t);
        py[i] = eval_fourier(ys, t);
    }
    build_from_samples(px, py);
}

void BoundaryCurve::build_from_samples(const std::vector<double>& xs,
                                       const std::vector<double>& ys) {
    const int n = static_cast<int>(xs.size());
    // plain DFT (done once per curve; n is modest)
    cx_.assign(n, 0.0);
    cy_.assign(n, 0.0);
    for (int m = 0; m < n; ++m) {
        std::complex<double> sx = 0.0, sy = 0.0;
        for (int i = 0; i < n; ++i) {
            const double w = -kTwoPi * m * i / n;
            const std::complex<double> e(std::cos(w), std::sin(w));
            sx += xs[i] * e;
            sy += ys[i] * e;
        }
        cx_[m] = sx / double(n);
        cy_[m] = sy / double(n);
    }
    // diagnostics: constant-speed deviation and curvature bound
    speed_dev_ = 0.0;
    max_kappa_ = 0.0;
    for (int i = 0; i < 4 * n; ++i) {
        const double s = double(i) / (4 * n);
        const auto d = dgamma(s);
        const double sp = std::hypot(d[0], d[1]);
        speed_dev_ = std::max(speed_dev_, std::abs(sp - length_) / length_);
        max_kappa_ = std::max(max_kappa_, std::abs(curvature(s)));
    }
}

namespace {
// signed frequency of DFT bin m for series length n
int bin_freq(int m, int n) { return m <= n / 2 ? m : m - n; }
} // namespace

std::array<double, 2> BoundaryCurve::gamma(double s) const {
    const int n = static_cast<int>(cx_.size());
    std::complex<double> gx = 0.0, gy = 0.0;
    for (int m = 0; m < n; ++m) {
        const int f = bin_freq(m, n);
        const double w = kTwoPi * f * s;
        const std::complex<double> e(std::cos(w), std::sin(w));
        gx += cx_[m] * e;
        gy += cy_[m] * e;
    }
    return {gx.real(), gy.real()};
}

std::array<double, 2> BoundaryCurve::dgamma(double s) const {
    const int n = static_cast<int>(cx_.size());
    std::complex<double> gx = 0.0, gy = 0.0;
    for (int m = 0; m < n; ++m) {
        const int f = bin_freq(m, n);
        const double w = kTwoPi * f * s;
        const std::complex<double> e(std::cos(w), std::sin(w));
        const std::complex<double> im(0.0, kTwoPi * f);
        gx += cx_[m] * im * e;
        gy += cy_[m] * im * e;
    }
    return {gx.real(), gy.real()};
}

std::array<double, 2> BoundaryCurve::d2gamma(double s) const {
    const int n = static_cast<int>(cx_.size());
    std::complex<double> gx = 0.0, gy = 0.0;
    for (int m = 0; m < n; ++m) {
        const int f = bin_freq(m, n);
        const double w = kTwoPi * f * s;
        const std::complex<double> e(std::cos(w), std::sin(w));
        const double im2 = -(kTwoPi * f) * (kTwoPi * f);
        gx += cx_[m] * im2 * e;
        gy += cy_[m] * im2 * e;
    }
    return {gx.real(), gy.real()};
}

double BoundaryCurve::curvature(double s) const {
    const auto d = dgamma(s);
    const auto dd = d2gamma(s);
    const double sp = std::hypot(d[0], d[1]);
    return (d[0] * dd[1] - d[1] * dd[0]) / (sp * sp * sp);
}

double BoundaryCurve::max_abs_curvature() const { return max_kappa_; }

double BoundaryCurve::collar_width() const {
    return max_kappa_ > 0.0 ? std::min(0.4, 0.4 / max_kappa_) : 0.4;
}

double BoundaryCurve::speed_deviation() const { return speed_dev_; }

BoundaryCurve BoundaryCurve::circle(double radius, double cx, double cy) {
    FourierSpec fx, fy;
    fx.a0 = cx;
    fx.a = {radius};
    fx.b = {0.0};
    fy.a0 = cy;
    fy.a = {0.0};
    fy.b = {radius};
    return BoundaryCurve(fx, fy);
}

LocalFrame local_frame(const BoundaryCurve& curve, double x, double y) {
    const int scan = 512;
    // coarse scan for the nearest sample, tracking the runner-up basin
    std::vector<double> d2(scan);
    for (int i = 0; i < scan; ++i) {
        const auto p = curve.gamma(double(i) / scan);
        d2[i] = (p[0] - x) * (p[0] - x) + (p[1] - y) * (p[1] - y);
    }
    int best = int(std::min_element(d2.begin(), d2.end()) - d2.begin());
    // local minima other than the winner's basin
    double second = std::numeric_limits<double>::infinity();
    for (int i = 0; i < scan; ++i) {
        const int im = (i + scan - 1) % scan, ip = (i + 1) % scan;
        if (d2[i] <= d2[im] && d2[i] <= d2[ip]) {
            const int sep = std::min((i - best + scan) % scan, (best - i + scan) % scan);
            if (sep > scan / 16) second = std::min(second, d2[i]);
        }
    }

    double s = double(best) / scan;
    for (int it = 0; it < 60; ++it) {
        const auto p = curve.gamma(s);
        const auto d = curve.dgamma(s);
        const auto dd = curve.d2gamma(s);
        const double rx = x - p[0], ry = y - p[1];
        const double f = rx * d[0] + ry * d[1];
        const double df = rx * dd[0] + ry * dd[1] - (d[0] * d[0] + d[1] * d[1]);
        const double step = f / df;
        s -= step;
        if (std::abs(step) < 1e-16) break;
    }
    s -= std::floor(s);

    const auto p = curve.gamma(s);
    const auto d = curve.dgamma(s);
    const double L = curve.length();
    LocalFrame fr;
    fr.s = s;
    fr.tau = {d[0] / L, d[1] / L};
    fr.n = {-d[1] / L, d[0] / L};
    const double rx = x - p[0], ry = y - p[1];
    fr.alpha = std::hypot(rx, ry);
    const double cw = curve.collar_width();
    if (fr.alpha >= cw)
        throw FrameUnavailable("point outside collar");
    if (fr.alpha > 1e-14 && rx * fr.n[0] + ry * fr.n[1] < 0.0)
        throw FrameUnavailable("point on the outward side of the boundary");
    if (std::isfinite(second) && std::sqrt(second) - fr.alpha < 1e-9)
        throw DegenerateCollar("ambiguous nearest boundary point");
    fr.h = 1.0 - fr.alpha * curve.curvature(s);
    return fr;
}

LocalFrame channel_frame(double x, double y, double collar) {
    x -= std::floor(x);
    LocalFrame fr;
    fr.h = 1.0;
    const double db = y, dt = 1.0 - y;
    if (std::abs(db - dt) < 1e-14 && db < collar)
        throw DegenerateCollar("point equidistant from both walls");
    if (db <= dt) {
        if (db >= collar) throw FrameUnavailable("point outside collar");
        fr.s = x;
        fr.alpha = db;
        fr.tau = {1.0, 0.0};
        fr.n = {0.0, 1.0};
    } else {
        if (dt >= collar) throw FrameUnavailable("point outside collar");
        fr.s = 1.0 - x >= 1.0 ? 0.0 : 1.0 - x;
        fr.alpha = dt;
        fr.tau = {-1.0, 0.0};
        fr.n = {0.0, -1.0};
    }
    return fr;
}

ScalarField strip_weights(const ChannelGrid& grid, double delta) {
    auto frac = strip_row_fractions(grid, delta);
    ScalarField w(grid);
    const double a = grid.dx() * grid.dy();
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) w.at(i, j) = a * frac[j];
    return w;
}

DomainSpec parse_domain(const std::string& text) {
    DomainSpec d;
    if (text == "channel") return d;
    if (text.rfind("circle{", 0) == 0 && text.back() == '}') {
        d.is_channel = false;
        d.circle_radius = std::stod(text.substr(7, text.size() - 8));
        if (d.circle_radius <= 0.0)
            throw std::invalid_argument("circle radius must be positive");
        return d;
    }
    throw std::invalid_argument("unknown domain spec: " + text);
}

} // namespace sns
