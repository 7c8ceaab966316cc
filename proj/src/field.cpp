#include "sns/field.hpp"

#include <cstdio>
#include <cstring>
#include <numeric>
#include <stdexcept>

namespace sns {

double ScalarField::sum() const {
    return std::accumulate(data.begin(), data.end(), 0.0);
}

double ScalarField::mean() const { return sum() / data.size(); }

void VelocityField::axpy(double a, const VelocityField& x) {
    for (size_t k = 0; k < u.size(); ++k) u[k] += a * x.u[k];
    for (size_t k = 0; k < v.size(); ++k) v[k] += a * x.v[k];
}

void VelocityField::scale(double a) {
    for (auto& x : u) x *= a;
    for (auto& x : v) x *= a;
}

void VelocityField::set_zero() {
    std::fill(u.begin(), u.end(), 0.0);
    std::fill(v.begin(), v.end(), 0.0);
}

void VelocityField::enforce_no_penetration() {
    if (grid.walls != WallMode::Walls) return;
    for (int i = 0; i < grid.nx; ++i) {
        V(i, 0) = 0.0;
        V(i, grid.ny) = 0.0;
    }
}

namespace {

constexpr uint64_t kFieldMagic = 0x534e534c41423144ULL; // "SNSLAB1D"

struct Header {
    uint64_t magic;
    int32_t nx, ny, walls, tag; // tag: 0 scalar, 1 velocity; bc in high bits
};

void write_all(std::FILE* f, const void* p, size_t n) {
    if (std::fwrite(p, 1, n, f) != n)
        throw std::runtime_error("field io: short write");
}

void read_all(std::FILE* f, void* p, size_t n) {
    if (std::fread(p, 1, n, f) != n)
        throw std::runtime_error("field io: short read");
}

} // namespace

void save_field(const VelocityField& f, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw std::runtime_error("cannot open " + path);
    Header h{kFieldMagic, f.grid.nx, f.grid.ny,
             f.grid.walls == WallMode::Walls ? 0 : 1,
             1 | (static_cast<int>(f.bc) << 8)};
    write_all(fp, &h, sizeof h);
    write_all(fp, f.u.data(), f.u.size() * sizeof(double));
    write_all(fp, f.v.data(), f.v.size() * sizeof(double));
    std::fclose(fp);
}

VelocityField load_field(const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) throw std::runtime_error("cannot open " + path);
    Header h{};
    read_all(fp, &h, sizeof h);
    if (h.magic != kFieldMagic || (h.tag & 0xff) != 1) {
        std::fclose(fp);
        throw std::runtime_error("bad velocity snapshot header: " + path);
    }
    ChannelGrid g(h.nx, h.ny, h.walls == 0 ? WallMode::Walls : WallMode::PeriodicY);
    VelocityField f(g, static_cast<BcTag>(h.tag >> 8));
    read_all(fp, f.u.data(), f.u.size() * sizeof(double));
    read_all(fp, f.v.data(), f.v.size() * sizeof(double));
    std::fclose(fp);
    return f;
}

void save_scalar(const ScalarField& f, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw std::runtime_error("cannot open " + path);
    Header h{kFieldMagic, f.grid.nx, f.grid.ny,
             f.grid.walls == WallMode::Walls ? 0 : 1, 0};
    write_all(fp, &h, sizeof h);
    write_all(fp, f.data.data(), f.data.size() * sizeof(double));
    std::fclose(fp);
}

ScalarField load_scalar(const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) throw std::runtime_error("cannot open " + path);
    Header h{};
    read_all(fp, &h, sizeof h);
    if (h.magic != kFieldMagic || h.tag != 0) {
        std::fclose(fp);
        throw std::runtime_error("bad scalar snapshot header: " + path);
    }
    ChannelGrid g(h.nx, h.ny, h.walls == 0 ? WallMode::Walls : WallMode::PeriodicY);
    ScalarField f(g);
    read_all(fp, f.data.data(), f.data.size() * sizeof(double));
    std::fclose(fp);
    return f;
}

} // namespace sns
