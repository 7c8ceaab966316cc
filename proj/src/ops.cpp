#include "sns/ops.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "xspectral.hpp"

namespace sns {

using detail::XSpectral;

ScalarField divergence(const VelocityField& U) {
    const ChannelGrid& g = U.grid;
    ScalarField d(g);
    const double idx = 1.0 / g.dx(), idy = 1.0 / g.dy();
    const bool per = g.walls == WallMode::PeriodicY;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double vtop = per ? U.V(i, g.wrapy(j + 1)) : U.V(i, j + 1);
            d.at(i, j) = (U.Up(i + 1, j) - U.U(i, j)) * idx + (vtop - U.V(i, j)) * idy;
        }
    return d;
}

namespace {

// Neumann (walls) Poisson solve: lap(pi) = f with dpi/dy = gb at y=0, gt at
// y=1, periodic in x; pi returned with zero mean. gb/gt may be null (zero).
ScalarField poisson_neumann(const ChannelGrid& g, const ScalarField& f,
                            const std::vector<double>* gb,
                            const std::vector<double>* gt) {
    const int nx = g.nx, ny = g.ny;
    const double dy = g.dy(), idy2 = 1.0 / (dy * dy);
    std::vector<double> rhs = f.data;
    if (gb)
        for (int i = 0; i < nx; ++i) rhs[i] += (*gb)[i] / dy;
    if (gt)
        for (int i = 0; i < nx; ++i) rhs[(ny - 1) * nx + i] -= (*gt)[i] / dy;

    auto& sp = detail::spectral_for(nx, ny);
    const int nk = sp.nk();
    std::vector<std::complex<double>> fh(static_cast<size_t>(nk) * ny);
    sp.forward(rhs.data(), fh.data());

    std::vector<std::complex<double>> line(ny);
    std::vector<double> lo(ny, idy2), up(ny, idy2), diag(ny);
    for (int k = 0; k < nk; ++k) {
        const double lam = XSpectral::laplacian_eig(k, nx, g.dx());
        for (int j = 0; j < ny; ++j) line[j] = fh[j * nk + k];
        for (int j = 0; j < ny; ++j) diag[j] = lam - 2.0 * idy2;
        diag[0] = lam - idy2;
        diag[ny - 1] = lam - idy2;
        if (k == 0) {
            // singular Neumann mode: project out the mean, pin one value
            std::complex<double> mean = 0.0;
            for (auto& z : line) mean += z;
            mean /= static_cast<double>(ny);
            for (auto& z : line) z -= mean;
            diag[0] = 1.0;
            up[0] = 0.0;
            line[0] = 0.0;
            detail::thomas(ny, lo.data(), diag, up.data(), line.data());
            up[0] = idy2;
        } else {
            detail::thomas(ny, lo.data(), diag, up.data(), line.data());
        }
        for (int j = 0; j < ny; ++j) fh[j * nk + k] = line[j];
    }
    ScalarField pi(g);
    sp.inverse(fh.data(), pi.data.data());
    const double m = pi.mean();
    for (auto& x : pi.data) x -= m;
    return pi;
}

// Doubly periodic Poisson: lap(pi) = f, zero-mean gauge.
ScalarField poisson_periodic(const ChannelGrid& g, const ScalarField& f) {
    const int nx = g.nx, ny = g.ny;
    const double idy2 = 1.0 / (g.dy() * g.dy());
    auto& sp = detail::spectral_for(nx, ny);
    const int nk = sp.nk();
    std::vector<std::complex<double>> fh(static_cast<size_t>(nk) * ny);
    sp.forward(f.data.data(), fh.data());
    std::vector<std::complex<double>> line(ny);
    for (int k = 0; k < nk; ++k) {
        const double lam = XSpectral::laplacian_eig(k, nx, g.dx());
        for (int j = 0; j < ny; ++j) line[j] = fh[j * nk + k];
        if (k == 0) {
            std::complex<double> mean = 0.0;
            for (auto& z : line) mean += z;
            mean /= static_cast<double>(ny);
            for (auto& z : line) z -= mean;
            // pin x_0 = 0; rows 1..ny-1 become a plain tridiagonal system
            const int n = ny - 1;
            std::vector<double> lo(n, idy2), up(n, idy2), diag(n, lam - 2.0 * idy2);
            std::vector<std::complex<double>> sub(line.begin() + 1, line.end());
            detail::thomas(n, lo.data(), diag, up.data(), sub.data());
            line[0] = 0.0;
            std::copy(sub.begin(), sub.end(), line.begin() + 1);
        } else {
            detail::cyclic_thomas(ny, idy2, lam - 2.0 * idy2, line.data());
        }
        for (int j = 0; j < ny; ++j) fh[j * nk + k] = line[j];
    }
    ScalarField pi(g);
    sp.inverse(fh.data(), pi.data.data());
    const double m = pi.mean();
    for (auto& x : pi.data) x -= m;
    return pi;
}

} // namespace

VelocityField leray_project(const VelocityField& U, BcTag tag) {
    const ChannelGrid& g = U.grid;
    ScalarField d = divergence(U);
    ScalarField f(g);
    for (size_t m = 0; m < f.data.size(); ++m) f.data[m] = -d.data[m];

    ScalarField pi(g);
    if (g.walls == WallMode::Walls) {
        std::vector<double> gb(g.nx), gt(g.nx);
        for (int i = 0; i < g.nx; ++i) {
            gb[i] = -U.V(i, 0);
            gt[i] = -U.V(i, g.ny);
        }
        pi = poisson_neumann(g, f, &gb, &gt);
    } else {
        pi = poisson_periodic(g, f);
    }

    VelocityField R = U;
    R.bc = tag;
    const double idx = 1.0 / g.dx(), idy = 1.0 / g.dy();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            R.U(i, j) += (pi.at(i, j) - pi.at(g.wrapx(i - 1), j)) * idx;
    if (g.walls == WallMode::Walls) {
        for (int j = 1; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                R.V(i, j) += (pi.at(i, j) - pi.at(i, j - 1)) * idy;
        for (int i = 0; i < g.nx; ++i) {
            R.V(i, 0) = 0.0;
            R.V(i, g.ny) = 0.0;
        }
    } else {
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                R.V(i, j) += (pi.at(i, j) - pi.at(i, g.wrapy(j - 1))) * idy;
    }

    ScalarField check = divergence(R);
    double worst = 0.0;
    for (double x : check.data) worst = std::max(worst, std::abs(x));
    double scale = std::max(1.0, sup_norm(U));
    if (worst > 1e-8 * scale)
        throw NumericalFailure("leray_project: residual divergence too large", worst);
    return R;
}

VelocityField helmholtz_solve(const VelocityField& rhs, double c) {
    const ChannelGrid& g = rhs.grid;
    if (c <= 0.0) return rhs;
    const int nx = g.nx, ny = g.ny;
    const double idy2 = 1.0 / (g.dy() * g.dy());
    VelocityField R(g, rhs.bc);

    if (g.walls == WallMode::Walls) {
        // u component: cell-centered rows in y, no-slip ghost reflection
        {
            auto& sp = detail::spectral_for(nx, ny);
            const int nk = sp.nk();
            std::vector<std::complex<double>> fh(static_cast<size_t>(nk) * ny);
            sp.forward(rhs.u.data(), fh.data());
            std::vector<std::complex<double>> line(ny);
            std::vector<double> lo(ny, -c * idy2), up(ny, -c * idy2), diag(ny);
            for (int k = 0; k < nk; ++k) {
                const double lam = XSpectral::laplacian_eig(k, nx, g.dx());
                for (int j = 0; j < ny; ++j) diag[j] = 1.0 - c * lam + 2.0 * c * idy2;
                diag[0] = 1.0 - c * lam + 3.0 * c * idy2;
                diag[ny - 1] = diag[0];
                for (int j = 0; j < ny; ++j) line[j] = fh[j * nk + k];
                detail::thomas(ny, lo.data(), diag, up.data(), line.data());
                for (int j = 0; j < ny; ++j) fh[j * nk + k] = line[j];
            }
            sp.inverse(fh.data(), R.u.data());
        }
        // v component: Dirichlet 0 at wall faces, interior rows 1..ny-1
        {
            const int n = ny - 1;
            std::vector<double> interior(static_cast<size_t>(nx) * n);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < nx; ++i)
                    interior[j * nx + i] = rhs.V(i, j + 1);
            auto& sp = detail::spectral_for(nx, n);
            const int nk = sp.nk();
            std::vector<std::complex<double>> fh(static_cast<size_t>(nk) * n);
            sp.forward(interior.data(), fh.data());
            std::vector<std::complex<double>> line(n);
            std::vector<double> lo(n, -c * idy2), up(n, -c * idy2), diag(n);
            for (int k = 0; k < nk; ++k) {
                const double lam = XSpectral::laplacian_eig(k, nx, g.dx());
                for (int j = 0; j < n; ++j) diag[j] = 1.0 - c * lam + 2.0 * c * idy2;
                for (int j = 0; j < n; ++j) line[j] = fh[j * nk + k];
                detail::thomas(n, lo.data(), diag, up.data(), line.data());
                for (int j = 0; j < n; ++j) fh[j * nk + k] = line[j];
            }
            sp.inverse(fh.data(), interior.data());
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < nx; ++i)
                    R.V(i, j + 1) = interior[j * nx + i];
            for (int i = 0; i < nx; ++i) {
                R.V(i, 0) = 0.0;
                R.V(i, ny) = 0.0;
            }
        }
    } else {
        auto solve_periodic = [&](const std::vector<double>& in, std::vector<double>& out) {
            auto& sp = detail::spectral_for(nx, ny);
            const int nk = sp.nk();
            std::vector<std::complex<double>> fh(static_cast<size_t>(nk) * ny);
            sp.forward(in.data(), fh.data());
            std::vector<std::complex<double>> line(ny);
            for (int k = 0; k < nk; ++k) {
                const double lam = XSpectral::laplacian_eig(k, nx, g.dx());
                for (int j = 0; j < ny; ++j) line[j] = fh[j * nk + k];
                detail::cyclic_thomas(ny, -c * idy2, 1.0 - c * lam + 2.0 * c * idy2,
                                      line.data());
                for (int j = 0; j < ny; ++j) fh[j * nk + k] = line[j];
            }
            sp.inverse(fh.data(), out.data());
        };
        solve_periodic(rhs.u, R.u);
        solve_periodic(rhs.v, R.v);
    }
    return R;
}

double l2_norm_sq(const VelocityField& U) {
    const ChannelGrid& g = U.grid;
    const double a = g.dx() * g.dy();
    double s = 0.0;
    for (double x : U.u) s += x * x;
    if (g.walls == WallMode::Walls) {
        for (int j = 0; j <= g.ny; ++j) {
            const double w = (j == 0 || j == g.ny) ? 0.5 : 1.0;
            for (int i = 0; i < g.nx; ++i) s += w * U.V(i, j) * U.V(i, j);
        }
    } else {
        for (double x : U.v) s += x * x;
    }
    return s * a;
}

double sup_norm(const VelocityField& U) {
    double m = 0.0;
    for (double x : U.u) m = std::max(m, std::abs(x));
    for (double x : U.v) m = std::max(m, std::abs(x));
    return m;
}

double inner(const VelocityField& A, const VelocityField& B) {
    const ChannelGrid& g = A.grid;
    if (!(g == B.grid)) throw std::invalid_argument("inner: grid mismatch");
    const double a = g.dx() * g.dy();
    double s = 0.0;
    for (size_t m = 0; m < A.u.size(); ++m) s += A.u[m] * B.u[m];
    if (g.walls == WallMode::Walls) {
        for (int j = 0; j <= g.ny; ++j) {
            const double w = (j == 0 || j == g.ny) ? 0.5 : 1.0;
            for (int i = 0; i < g.nx; ++i) s += w * A.V(i, j) * B.V(i, j);
        }
    } else {
        for (size_t m = 0; m < A.v.size(); ++m) s += A.v[m] * B.v[m];
    }
    return s * a;
}

ScalarField full_weights(const ChannelGrid& g) {
    ScalarField w(g);
    std::fill(w.data.begin(), w.data.end(), g.dx() * g.dy());
    return w;
}

namespace {

// du_x/dy at the u-face column height j (same y as cell centers);
// second-order one-sided at wall rows.
double colderiv_u(const VelocityField& U, int i, int j) {
    const ChannelGrid& g = U.grid;
    const double idy = 1.0 / g.dy();
    if (g.walls == WallMode::PeriodicY)
        return (U.U(i, g.wrapy(j + 1)) - U.U(i, g.wrapy(j - 1))) * 0.5 * idy;
    if (j == 0)
        return (-1.5 * U.U(i, 0) + 2.0 * U.U(i, 1) - 0.5 * U.U(i, 2)) * idy;
    if (j == g.ny - 1)
        return (1.5 * U.U(i, j) - 2.0 * U.U(i, j - 1) + 0.5 * U.U(i, j - 2)) * idy;
    return (U.U(i, j + 1) - U.U(i, j - 1)) * 0.5 * idy;
}

struct CellDerivs {
    double tau_tau, n_n, n_tau, dvdx;
};

CellDerivs cell_derivs(const VelocityField& U, int i, int j) {
    const ChannelGrid& g = U.grid;
    const double idx = 1.0 / g.dx(), idy = 1.0 / g.dy();
    CellDerivs c{};
    c.tau_tau = (U.Up(i + 1, j) - U.U(i, j)) * idx;
    const double vtop = g.walls == WallMode::Walls ? U.V(i, j + 1) : U.V(i, g.wrapy(j + 1));
    c.n_n = (vtop - U.V(i, j)) * idy;
    c.n_tau = 0.5 * (colderiv_u(U, i, j) + colderiv_u(U, g.wrapx(i + 1), j));
    auto vc = [&](int ii) {
        ii = g.wrapx(ii);
        const double vt = g.walls == WallMode::Walls ? U.V(ii, j + 1) : U.V(ii, g.wrapy(j + 1));
        return 0.5 * (U.V(ii, j) + vt);
    };
    c.dvdx = (vc(i + 1) - vc(i - 1)) * 0.5 * idx;
    return c;
}

} // namespace

double grad_norm_sq(const VelocityField& U, const ScalarField& weights) {
    const ChannelGrid& g = U.grid;
    double s = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double w = weights.at(i, j);
            if (w == 0.0) continue;
            const CellDerivs c = cell_derivs(U, i, j);
            s += w * (c.tau_tau * c.tau_tau + c.n_n * c.n_n + c.n_tau * c.n_tau +
                      c.dvdx * c.dvdx);
        }
    return s;
}

double dissipation_norm_sq(const VelocityField& U) {
    const ChannelGrid& g = U.grid;
    const int nx = g.nx, ny = g.ny;
    const double ix2 = 1.0 / (g.dx() * g.dx()), iy2 = 1.0 / (g.dy() * g.dy());
    const double a = g.dx() * g.dy();
    const bool per = g.walls == WallMode::PeriodicY;
    double s = 0.0;
    // u faces: ghost reflection u_ghost = -u at the walls, as in the
    // Helmholtz solve
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double c = U.U(i, j);
            double up, dn;
            if (per) {
                up = U.U(i, g.wrapy(j + 1));
                dn = U.U(i, g.wrapy(j - 1));
            } else {
                up = j + 1 < ny ? U.U(i, j + 1) : -c;
                dn = j > 0 ? U.U(i, j - 1) : -c;
            }
            const double lap = (U.Up(i + 1, j) - 2.0 * c + U.Up(i - 1, j)) * ix2 +
                               (up - 2.0 * c + dn) * iy2;
            s -= a * c * lap;
        }
    // v faces: wall rows are Dirichlet (excluded); interior rows 5-point
    const int j0 = per ? 0 : 1, j1 = per ? ny : ny; // [j0, j1)
    for (int j = j0; j < j1; ++j)
        for (int i = 0; i < nx; ++i) {
            const double c = U.V(i, j);
            const double up = per ? U.V(i, g.wrapy(j + 1)) : U.V(i, j + 1);
            const double dn = per ? U.V(i, g.wrapy(j - 1)) : U.V(i, j - 1);
            const double lap = (U.V(g.wrapx(i + 1), j) - 2.0 * c +
                                U.V(g.wrapx(i - 1), j)) * ix2 +
                               (up - 2.0 * c + dn) * iy2;
            s -= a * c * lap;
        }
    return s;
}

DerivRowProfiles derivative_row_profiles(const VelocityField& U) {
    const ChannelGrid& g = U.grid;
    const double a = g.dx() * g.dy();
    DerivRowProfiles p;
    p.grad_sq.assign(g.ny, 0.0);
    p.n_tau_sq.assign(g.ny, 0.0);
    p.n_n_sq.assign(g.ny, 0.0);
    p.tau_tau_sq.assign(g.ny, 0.0);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const CellDerivs c = cell_derivs(U, i, j);
            p.n_tau_sq[j] += a * c.n_tau * c.n_tau;
            p.n_n_sq[j] += a * c.n_n * c.n_n;
            p.tau_tau_sq[j] += a * c.tau_tau * c.tau_tau;
            p.grad_sq[j] += a * (c.tau_tau * c.tau_tau + c.n_n * c.n_n +
                                 c.n_tau * c.n_tau + c.dvdx * c.dvdx);
        }
    return p;
}

std::vector<double> strip_row_fractions(const ChannelGrid& g, double delta) {
    if (delta <= 0.0 || delta > 0.5)
        throw std::invalid_argument("strip width must satisfy 0 < delta <= 1/2");
    std::vector<double> frac(g.ny, 0.0);
    const double dy = g.dy();
    for (int j = 0; j < g.ny; ++j) {
        const double lo = j * dy, hi = (j + 1) * dy;
        // bottom strip [0, delta)
        double f = std::clamp((delta - lo) / dy, 0.0, 1.0);
        // top strip (1 - delta, 1]
        f += std::clamp((hi - (1.0 - delta)) / dy, 0.0, 1.0);
        frac[j] = std::min(f, 1.0);
    }
    return frac;
}

double strip_sum(const std::vector<double>& rows, const std::vector<double>& frac) {
    double s = 0.0;
    for (size_t j = 0; j < rows.size(); ++j) s += rows[j] * frac[j];
    return s;
}

double strip_derivative_norm_sq(const VelocityField& U, double delta, StripDeriv which) {
    DerivRowProfiles p = derivative_row_profiles(U);
    auto frac = strip_row_fractions(U.grid, delta);
    switch (which) {
        case StripDeriv::NTau: return strip_sum(p.n_tau_sq, frac);
        case StripDeriv::NN: return strip_sum(p.n_n_sq, frac);
        case StripDeriv::TauTau: return strip_sum(p.tau_tau_sq, frac);
    }
    throw std::invalid_argument("strip_derivative_norm_sq: bad selector");
}

namespace {

// ghost value of u one row beyond a wall; sign -1 no-slip, +1 free-slip
double ughost(const VelocityField& U, int i, int j) {
    const ChannelGrid& g = U.grid;
    if (g.walls == WallMode::PeriodicY) return U.U(i, g.wrapy(j));
    const double s = U.bc == BcTag::NoSlip ? -1.0 : 1.0;
    if (j < 0) return s * U.U(i, 0);
    if (j >= g.ny) return s * U.U(i, g.ny - 1);
    return U.U(i, j);
}

double vat(const VelocityField& U, int i, int j) {
    const ChannelGrid& g = U.grid;
    if (g.walls == WallMode::PeriodicY) return U.V(g.wrapx(i), g.wrapy(j));
    return U.V(g.wrapx(i), j);
}

} // namespace

VelocityField advect(const VelocityField& U) {
    const ChannelGrid& g = U.grid;
    const int nx = g.nx, ny = g.ny;
    const double idx = 1.0 / g.dx(), idy = 1.0 / g.dy();
    const bool per = g.walls == WallMode::PeriodicY;
    VelocityField N(g, U.bc);

    // cell-centered uu and vv
    std::vector<double> uu(nx * ny), vv(nx * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double uc = 0.5 * (U.U(i, j) + U.Up(i + 1, j));
            const double vc = 0.5 * (U.V(i, j) + vat(U, i, j + 1));
            uu[j * nx + i] = uc * uc;
            vv[j * nx + i] = vc * vc;
        }
    // corner uv; corners j = 0..ny (walls) or 0..ny-1 (periodic)
    const int ncr = per ? ny : ny + 1;
    std::vector<double> uv(nx * ncr);
    for (int j = 0; j < ncr; ++j)
        for (int i = 0; i < nx; ++i) {
            const double ucr = 0.5 * (ughost(U, i, j) + ughost(U, i, j - 1));
            const double vcr = 0.5 * (U.V(i, j) + vat(U, i - 1, j));
            uv[j * nx + i] = ucr * vcr;
        }
    auto UVc = [&](int i, int j) {
        return uv[(per ? g.wrapy(j) : j) * nx + g.wrapx(i)];
    };
    auto UUc = [&](int i, int j) { return uu[(per ? g.wrapy(j) : j) * nx + g.wrapx(i)]; };
    auto VVc = [&](int i, int j) { return vv[(per ? g.wrapy(j) : j) * nx + g.wrapx(i)]; };

    // Flux form with consistent 2-point averages (Lilly / Harlow-Welch).
    // When U is discretely divergence free this is exactly energy
    // conserving, <N(U), U> = 0 to round-off, in both wall modes; mixing in
    // the advective form with wide centered stencils breaks that balance.
    // u faces
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            N.U(i, j) = (UUc(i, j) - UUc(i - 1, j)) * idx +
                        (UVc(i, j + 1) - UVc(i, j)) * idy;
    // v faces
    const int j0 = per ? 0 : 1, j1 = per ? ny : ny; // [j0, j1)
    for (int j = j0; j < j1; ++j)
        for (int i = 0; i < nx; ++i)
            N.V(i, j) = (UVc(i + 1, j) - UVc(i, j)) * idx +
                        (VVc(i, j) - VVc(i, j - 1)) * idy;
    if (!per)
        for (int i = 0; i < nx; ++i) {
            N.V(i, 0) = 0.0;
            N.V(i, ny) = 0.0;
        }
    return N;
}

double max_speed(const VelocityField& U) { return sup_norm(U); }

} // namespace sns
