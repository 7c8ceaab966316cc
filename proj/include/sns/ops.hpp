#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "sns/field.hpp"

namespace sns {

struct NumericalFailure : std::runtime_error {
    double residual;
    NumericalFailure(const std::string& what, double res)
        : std::runtime_error(what), residual(res) {}
};

/// Selector for the strip-restricted derivative functionals of the
/// dissipation conditions: on the channel the collar frame is Cartesian, so
///   NTau  -> d u_x / dy   (normal derivative of tangential velocity)
///   NN    -> d u_y / dy
///   TauTau-> d u_x / dx
enum class StripDeriv { NTau, NN, TauTau };

ScalarField divergence(const VelocityField& U);

/// Leray projection via the cell-centered Neumann problem
///   -lap(pi) = div U,  dpi/dn = -U.n on walls,  periodic in x.
/// Returns U + grad(pi); wall-normal faces come out exactly zero.
/// The bc tag of the result is `tag` (NoPenetration unless told otherwise).
VelocityField leray_project(const VelocityField& U, BcTag tag = BcTag::NoPenetration);

/// Solve (I - c*lap) x = rhs componentwise with no-slip walls (Dirichlet for
/// v at walls, ghost reflection for u). Doubly periodic when the grid says so.
VelocityField helmholtz_solve(const VelocityField& rhs, double c);

double l2_norm_sq(const VelocityField& U);
double sup_norm(const VelocityField& U);
double inner(const VelocityField& A, const VelocityField& B);

/// sum_cells weights * |grad U|^2; pass all-ones volume weights for the full
/// L2(D) norm of the gradient. Wall rows use one-sided second-order stencils.
double grad_norm_sq(const VelocityField& U, const ScalarField& weights);

/// Volume weights (dx*dy per cell), the full-domain quadrature.
ScalarField full_weights(const ChannelGrid& g);

/// -<U, lap U> with the same discrete Laplacian the viscous solve applies
/// (ghost reflection for u at no-slip walls, Dirichlet for wall v). This is
/// the dissipation quadrature that makes the discrete energy identity close
/// to O(dt); the one-sided grad_norm_sq stencils differ at the walls by
/// O(h^2), which would leave a dt-independent floor in the identity.
double dissipation_norm_sq(const VelocityField& U);

double strip_derivative_norm_sq(const VelocityField& U, double delta, StripDeriv which);

/// Per-row sums of the squared derivative fields, cell-area weighted; row j
/// holds the contribution of cell row j. Any strip functional is then a
/// fraction-weighted sum over rows, which lets post-processing evaluate
/// arbitrary strip widths from one stored profile.
struct DerivRowProfiles {
    std::vector<double> grad_sq;    // |grad U|^2
    std::vector<double> n_tau_sq;   // (du_x/dy)^2
    std::vector<double> n_n_sq;     // (du_y/dy)^2
    std::vector<double> tau_tau_sq; // (du_x/dx)^2
};
DerivRowProfiles derivative_row_profiles(const VelocityField& U);

/// Overlap fraction of cell row j with the two wall strips of width delta.
std::vector<double> strip_row_fractions(const ChannelGrid& g, double delta);

double strip_sum(const std::vector<double>& rows, const std::vector<double>& frac);

/// Energy-conserving MAC advection N(U) ~ (U.grad)U in flux form with
/// consistent 2-point averages: <N(U), U> = 0 to round-off whenever U is
/// discretely divergence free (the discrete mirror of <(u.grad)u, u> = 0).
/// Ghost treatment at walls follows the bc tag (no-slip vs free-slip).
VelocityField advect(const VelocityField& U);

double max_speed(const VelocityField& U);

} // namespace sns
