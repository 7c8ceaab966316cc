#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "sns/field.hpp"

namespace sns {

struct FrameUnavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateCollar : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Collar coordinates at a point: boundary parameter s in [0,1), inward
/// distance alpha, unit tangent/inward normal, metric factor h = 1 - alpha*kappa.
struct LocalFrame {
    double s = 0.0;
    double alpha = 0.0;
    std::array<double, 2> tau{};
    std::array<double, 2> n{};
    double h = 1.0;
};

/// Closed boundary curve, internally re-parameterized to constant speed and
/// stored as a Fourier series, so derivatives are spectral and the collar
/// formulas are parameterization-independent.
class BoundaryCurve {
public:
    /// Raw parameterization given by Fourier coefficients per component:
    /// gamma_c(t) = a0 + sum_m (a_m cos(2 pi m t) + b_m sin(2 pi m t)).
    struct FourierSpec {
        double a0 = 0.0;
        std::vector<double> a, b;
    };

    BoundaryCurve(const FourierSpec& x_spec, const FourierSpec& y_spec);
    static BoundaryCurve circle(double radius, double cx = 0.0, double cy = 0.0);

    std::array<double, 2> gamma(double s) const;
    std::array<double, 2> dgamma(double s) const;  // d/ds, |dgamma| == length
    std::array<double, 2> d2gamma(double s) const;

    double length() const { return length_; }
    double curvature(double s) const; // signed, unit-speed normalization
    double max_abs_curvature() const;
    double collar_width() const; // min(0.4, 0.4 / max|kappa|)

    double speed_deviation() const; // max relative deviation of |dgamma| from L

private:
    explicit BoundaryCurve() = default;
    void build_from_samples(const std::vector<double>& xs, const std::vector<double>& ys);

    // complex Fourier coefficients of the constant-speed parameterization
    std::vector<std::complex<double>> cx_, cy_;
    double length_ = 0.0;
    double max_kappa_ = 0.0;
    double speed_dev_ = 0.0;
};

/// Nearest-point collar frame. Throws FrameUnavailable when x is farther than
/// the collar width (or outside the fluid), DegenerateCollar on ambiguous
/// nearest points.
LocalFrame local_frame(const BoundaryCurve& curve, double x, double y);

/// Collar frame for the straight channel walls at y = 0, 1 (h == 1).
LocalFrame channel_frame(double x, double y, double collar = 0.4);

/// delta0(nu) = c_delta * nu^theta with 0 < theta < 1.
struct StripSpec {
    double c_delta = 1.0;
    double theta = 0.5;

    StripSpec() = default;
    StripSpec(double c, double th) : c_delta(c), theta(th) {
        if (!(th > 0.0 && th < 1.0))
            throw std::invalid_argument("StripSpec: theta must lie in (0,1)");
        if (!(c > 0.0)) throw std::invalid_argument("StripSpec: c_delta must be > 0");
    }
    double delta0(double nu) const { return c_delta * std::pow(nu, theta); }
};

/// Quadrature weights (cell volume fractions) of the two wall strips of
/// width delta; cut cells get linear area fractions.
ScalarField strip_weights(const ChannelGrid& grid, double delta);

/// Parse "channel", "circle{R}", or a Fourier coefficient table reference.
/// Returns nullptr (monostate) semantics via bool: channel has no curve.
struct DomainSpec {
    bool is_channel = true;
    double circle_radius = 0.0;
};
DomainSpec parse_domain(const std::string& text);

} // namespace sns
