#pragma once

// Internal helper: batched real FFTs along the periodic x direction plus
// tridiagonal line solves in y. This is the engine behind the Neumann
// pressure solve and the implicit diffusion solves.

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace sns::detail {

inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

/// Forward/backward r2c transforms along x for `nrows` contiguous rows of
/// length nx. One instance per thread (fftw plan execution on the cached
/// internal buffers is not shareable).
class XSpectral {
public:
    XSpectral(int nx, int nrows) : nx_(nx), nrows_(nrows), nk_(nx / 2 + 1) {
        real_ = fftw_alloc_real(static_cast<size_t>(nx_) * nrows_);
        cplx_ = fftw_alloc_complex(static_cast<size_t>(nk_) * nrows_);
        std::lock_guard lock(planner_mutex());
        int n[] = {nx_};
        fwd_ = fftw_plan_many_dft_r2c(1, n, nrows_, real_, nullptr, 1, nx_,
                                      cplx_, nullptr, 1, nk_, FFTW_ESTIMATE);
        bwd_ = fftw_plan_many_dft_c2r(1, n, nrows_, cplx_, nullptr, 1, nk_,
                                      real_, nullptr, 1, nx_, FFTW_ESTIMATE);
    }
    ~XSpectral() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(real_);
        fftw_free(cplx_);
    }
    XSpectral(const XSpectral&) = delete;
    XSpectral& operator=(const XSpectral&) = delete;

    int nk() const { return nk_; }

    /// rows[j*nx+i] -> out[j*nk+k]
    void forward(const double* rows, std::complex<double>* out) {
        std::copy(rows, rows + static_cast<size_t>(nx_) * nrows_, real_);
        fftw_execute(fwd_);
        auto* c = reinterpret_cast<std::complex<double>*>(cplx_);
        std::copy(c, c + static_cast<size_t>(nk_) * nrows_, out);
    }

    /// in[j*nk+k] -> rows[j*nx+i], normalized (inverse of forward)
    void inverse(const std::complex<double>* in, double* rows) {
        auto* c = reinterpret_cast<std::complex<double>*>(cplx_);
        std::copy(in, in + static_cast<size_t>(nk_) * nrows_, c);
        fftw_execute(bwd_);
        const double s = 1.0 / nx_;
        for (size_t m = 0; m < static_cast<size_t>(nx_) * nrows_; ++m)
            rows[m] = real_[m] * s;
    }

    /// Modified wavenumber of the 3-point periodic Laplacian, lambda_k <= 0.
    static double laplacian_eig(int k, int nx, double dx) {
        const double c = std::cos(2.0 * M_PI * k / nx);
        return (2.0 * c - 2.0) / (dx * dx);
    }

private:
    int nx_, nrows_, nk_;
    double* real_;
    fftw_complex* cplx_;
    fftw_plan fwd_, bwd_;
};

inline XSpectral& spectral_for(int nx, int nrows) {
    thread_local std::map<std::pair<int, int>, std::unique_ptr<XSpectral>> cache;
    auto& slot = cache[{nx, nrows}];
    if (!slot) slot = std::make_unique<XSpectral>(nx, nrows);
    return *slot;
}

/// Thomas solve for a tridiagonal system with real coefficients and complex
/// rhs/solution. Arrays sized n; lower[0] and upper[n-1] unused.
inline void thomas(int n, const double* lower, std::vector<double> diag,
                   const double* upper, std::complex<double>* x) {
    for (int j = 1; j < n; ++j) {
        const double m = lower[j] / diag[j - 1];
        diag[j] -= m * upper[j - 1];
        x[j] -= m * x[j - 1];
    }
    x[n - 1] /= diag[n - 1];
    for (int j = n - 2; j >= 0; --j)
        x[j] = (x[j] - upper[j] * x[j + 1]) / diag[j];
}

/// Cyclic (periodic) tridiagonal solve via Sherman-Morrison. `off` is the
/// constant off-diagonal coefficient, `diag` the constant diagonal.
inline void cyclic_thomas(int n, double off, double diag, std::complex<double>* x) {
    // rank-one correction: choose gamma = -diag
    const double gamma = -diag;
    std::vector<double> d(n, diag), lo(n, off), up(n, off);
    d[0] -= gamma;
    d[n - 1] -= off * off / gamma;
    std::vector<std::complex<double>> z(n, 0.0);
    z[0] = gamma;
    z[n - 1] = off;
    // solve A' x = rhs and A' z = u
    {
        std::vector<double> dd = d;
        std::vector<std::complex<double>> rhs(x, x + n);
        thomas(n, lo.data(), dd, up.data(), rhs.data());
        std::vector<double> dd2 = d;
        thomas(n, lo.data(), dd2, up.data(), z.data());
        const std::complex<double> vy = rhs[0] + (off / gamma) * rhs[n - 1];
        const std::complex<double> vz = z[0] + (off / gamma) * z[n - 1];
        const std::complex<double> fac = vy / (1.0 + vz);
        for (int j = 0; j < n; ++j) x[j] = rhs[j] - fac * z[j];
    }
}

} // namespace sns::detail
