#pragma once

#include <stdexcept>

namespace sns {

/// Wall treatment in y. The channel is always periodic in x; the default
/// geometry has solid walls at y = 0 and y = 1. The doubly periodic variant
/// exists for analytic-oracle tests (Taylor-Green decay and the like).
enum class WallMode { Walls, PeriodicY };

/// MAC staggered grid on [0,1) x [0,1]. u lives on vertical cell faces,
/// v on horizontal cell faces, scalars (pressure, masks) at cell centers.
struct ChannelGrid {
    int nx = 0;
    int ny = 0;
    WallMode walls = WallMode::Walls;

    ChannelGrid() = default;
    ChannelGrid(int nx_, int ny_, WallMode w = WallMode::Walls)
        : nx(nx_), ny(ny_), walls(w) {
        if (nx < 8 || ny < 8)
            throw std::invalid_argument("ChannelGrid: nx, ny must be >= 8");
    }

    double dx() const { return 1.0 / nx; }
    double dy() const { return 1.0 / ny; }

    // DOF counts
    int n_u() const { return nx * ny; }
    int nvrows() const { return walls == WallMode::Walls ? ny + 1 : ny; }
    int n_v() const { return nx * nvrows(); }
    int n_cells() const { return nx * ny; }

    // face / center coordinates
    double xu(int i) const { return i * dx(); }
    double yu(int j) const { return (j + 0.5) * dy(); }
    double xv(int i) const { return (i + 0.5) * dx(); }
    double yv(int j) const { return j * dy(); }
    double xc(int i) const { return (i + 0.5) * dx(); }
    double yc(int j) const { return (j + 0.5) * dy(); }

    int wrapx(int i) const { return (i % nx + nx) % nx; }
    int wrapy(int j) const { return (j % ny + ny) % ny; }

    bool operator==(const ChannelGrid& o) const {
        return nx == o.nx && ny == o.ny && walls == o.walls;
    }
};

} // namespace sns
