#include "sns/noise.hpp"

#include "sns/ops.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace sns {

std::vector<NoiseMode> default_modes(int count, double amp, double width) {
    // centers on a small ring inside [0.3,0.7]^2, clear of the walls
    std::vector<NoiseMode> out;
    out.reserve(count);
    for (int j = 0; j < count; ++j) {
        const double ang = 2.0 * M_PI * j / std::max(count, 1);
        NoiseMode m;
        m.cx = 0.5 + 0.14 * std::cos(ang);
        m.cy = 0.5 + 0.14 * std::sin(ang);
        m.w = width;
        m.amp = amp;
        m.lambda = std::pow(2.0, -(j + 1));
        out.push_back(m);
    }
    return out;
}

namespace {
double bump(double r) {
    const double r2 = r * r;
    if (r2 >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - r2));
}
} // namespace

double mode_psi(const NoiseMode& m, double x, double y) {
    return m.amp * bump((x - m.cx) / m.w) * bump((y - m.cy) / m.w);
}

VelocityField mode_field(const ChannelGrid& g, const NoiseMode& m) {
    // psi at grid nodes (i*dx, j*dy); u = d(psi)/dy, v = -d(psi)/dx as exact
    // node differences, hence exactly divergence-free on the staggered grid
    const int nx = g.nx, ny = g.ny;
    const double dx = g.dx(), dy = g.dy();
    std::vector<double> psi((ny + 1) * nx);
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i < nx; ++i)
            psi[j * nx + i] = mode_psi(m, i * dx, j * dy);
    VelocityField f(g, BcTag::Free);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            f.U(i, j) = (psi[(j + 1) * nx + i] - psi[j * nx + i]) / dy;
    const int nvr = g.nvrows();
    for (int j = 0; j < nvr; ++j)
        for (int i = 0; i < nx; ++i) {
            const int ip = g.wrapx(i + 1);
            f.V(i, j) = -(psi[j * nx + ip] - psi[j * nx + i]) / dx;
        }
    return f;
}

ModeSet ModeSet::build(const ChannelGrid& g, const std::vector<NoiseMode>& modes) {
    ModeSet ms;
    ms.grid = g;
    ms.modes = modes;
    ms.sigma.reserve(modes.size());
    for (const auto& m : modes) ms.sigma.push_back(mode_field(g, m));
    return ms;
}

double ModeSet::trace_q0() const {
    double s = 0.0;
    for (size_t j = 0; j < modes.size(); ++j)
        s += modes[j].lambda * l2_norm_sq(sigma[j]);
    return s;
}

NoisePath sample_path(int n_modes, int steps, double T, uint64_t seed) {
    if (steps < 1 || T <= 0.0)
        throw std::invalid_argument("sample_path: need steps >= 1 and T > 0");
    NoisePath p;
    p.seed = seed;
    p.t.resize(steps + 1);
    for (int k = 0; k <= steps; ++k) p.t[k] = T * k / steps;
    p.dbeta.assign(n_modes, std::vector<double>(steps, 0.0));
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int k = 0; k < steps; ++k) {
        const double sd = std::sqrt(p.dt(k));
        for (int j = 0; j < n_modes; ++j) p.dbeta[j][k] = sd * gauss(rng);
    }
    return p;
}

NoisePath refine_path(const NoisePath& p, int factor) {
    if (factor < 2) throw std::invalid_argument("refine_path: factor must be >= 2");
    NoisePath q;
    q.seed = p.seed;
    q.level = p.level + 1;
    const int M = p.steps(), J = p.n_modes();
    q.t.resize(M * factor + 1);
    for (int k = 0; k < M; ++k)
        for (int l = 0; l < factor; ++l)
            q.t[k * factor + l] = p.t[k] + (p.t[k + 1] - p.t[k]) * l / factor;
    q.t[M * factor] = p.t[M];
    q.dbeta.assign(J, std::vector<double>(M * factor, 0.0));

    std::mt19937_64 rng((p.seed + 0x517cc1b727220a95ULL * (p.level + 1)) ^
                        0x2545f4914f6cdd1dULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int k = 0; k < M; ++k) {
        const double T1 = p.t[k + 1];
        for (int j = 0; j < J; ++j) {
            const double X = p.dbeta[j][k];
            double b = 0.0; // bridge value relative to the left node
            double prev_t = p.t[k];
            double prev_b = 0.0;
            for (int l = 1; l < factor; ++l) {
                const double s = q.t[k * factor + l];
                const double mean = prev_b + (X - prev_b) * (s - prev_t) / (T1 - prev_t);
                const double var = (s - prev_t) * (T1 - s) / (T1 - prev_t);
                b = mean + std::sqrt(var) * gauss(rng);
                q.dbeta[j][k * factor + l - 1] = b - prev_b;
                prev_b = b;
                prev_t = s;
            }
            q.dbeta[j][k * factor + factor - 1] = X - prev_b;
        }
    }
    return q;
}

int NoisePath::node_index(double time) const {
    for (size_t k = 0; k < t.size(); ++k)
        if (std::abs(t[k] - time) <= 1e-12 * std::max(1.0, T())) return static_cast<int>(k);
    throw std::invalid_argument("NoisePath: off-grid time, interpolation not supported");
}

VelocityField evaluate_W(const NoisePath& p, const ModeSet& ms, int k) {
    if (k < 0 || k > p.steps()) throw std::out_of_range("evaluate_W: node out of range");
    if (p.n_modes() != ms.count())
        throw std::invalid_argument("evaluate_W: mode count mismatch");
    VelocityField W(ms.grid, BcTag::Free);
    for (int j = 0; j < ms.count(); ++j) {
        double beta = 0.0;
        for (int m = 0; m < k; ++m) beta += p.dbeta[j][m];
        W.axpy(std::sqrt(ms.modes[j].lambda) * beta, ms.sigma[j]);
    }
    return W;
}

VelocityField increment_W(const NoisePath& p, const ModeSet& ms, int k) {
    if (k < 0 || k >= p.steps()) throw std::out_of_range("increment_W: step out of range");
    VelocityField dW(ms.grid, BcTag::Free);
    for (int j = 0; j < ms.count(); ++j)
        dW.axpy(std::sqrt(ms.modes[j].lambda) * p.dbeta[j][k], ms.sigma[j]);
    return dW;
}

uint64_t NoisePath::content_hash() const {
    uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](const void* p, size_t n) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 0x100000001b3ULL;
        }
    };
    for (double x : t) mix(&x, sizeof x);
    for (const auto& row : dbeta)
        for (double x : row) mix(&x, sizeof x);
    return h;
}

namespace {
constexpr uint64_t kPathMagic = 0x534e535041544831ULL; // "SNSPATH1"
}

void NoisePath::save(const std::string& path) const {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw std::runtime_error("cannot open " + path);
    const uint64_t magic = kPathMagic;
    const int64_t J = n_modes(), M = steps(), lvl = level;
    std::fwrite(&magic, 8, 1, fp);
    std::fwrite(&seed, 8, 1, fp);
    std::fwrite(&lvl, 8, 1, fp);
    std::fwrite(&J, 8, 1, fp);
    std::fwrite(&M, 8, 1, fp);
    std::fwrite(t.data(), sizeof(double), t.size(), fp);
    for (const auto& row : dbeta) std::fwrite(row.data(), sizeof(double), row.size(), fp);
    std::fclose(fp);
}

NoisePath NoisePath::load(const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) throw std::runtime_error("cannot open " + path);
    uint64_t magic = 0;
    int64_t J = 0, M = 0, lvl = 0;
    NoisePath p;
    if (std::fread(&magic, 8, 1, fp) != 1 || magic != kPathMagic) {
        std::fclose(fp);
        throw std::runtime_error("bad path file: " + path);
    }
    std::fread(&p.seed, 8, 1, fp);
    std::fread(&lvl, 8, 1, fp);
    std::fread(&J, 8, 1, fp);
    std::fread(&M, 8, 1, fp);
    p.level = static_cast<int>(lvl);
    p.t.resize(M + 1);
    if (std::fread(p.t.data(), sizeof(double), p.t.size(), fp) != p.t.size()) {
        std::fclose(fp);
        throw std::runtime_error("truncated path file: " + path);
    }
    p.dbeta.assign(J, std::vector<double>(M));
    for (auto& row : p.dbeta)
        if (std::fread(row.data(), sizeof(double), row.size(), fp) != row.size()) {
            std::fclose(fp);
            throw std::runtime_error("truncated path file: " + path);
        }
    std::fclose(fp);
    return p;
}

} // namespace sns
