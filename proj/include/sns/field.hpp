#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sns/grid.hpp"

namespace sns {

enum class BcTag { NoSlip, NoPenetration, Free };

/// Cell-centered scalar data (pressure, streamfunction, quadrature masks).
struct ScalarField {
    ChannelGrid grid;
    std::vector<double> data;

    ScalarField() = default;
    explicit ScalarField(const ChannelGrid& g) : grid(g), data(g.n_cells(), 0.0) {}

    double& at(int i, int j) { return data[j * grid.nx + i]; }
    double at(int i, int j) const { return data[j * grid.nx + i]; }

    double sum() const;
    double mean() const;
};

/// Staggered velocity field: u on vertical faces (nx*ny), v on horizontal
/// faces (nx*(ny+1) with walls, nx*ny doubly periodic).
struct VelocityField {
    ChannelGrid grid;
    BcTag bc = BcTag::Free;
    std::vector<double> u;
    std::vector<double> v;

    VelocityField() = default;
    explicit VelocityField(const ChannelGrid& g, BcTag tag = BcTag::Free)
        : grid(g), bc(tag), u(g.n_u(), 0.0), v(g.n_v(), 0.0) {}

    double& U(int i, int j) { return u[j * grid.nx + i]; }
    double U(int i, int j) const { return u[j * grid.nx + i]; }
    double& V(int i, int j) { return v[j * grid.nx + i]; }
    double V(int i, int j) const { return v[j * grid.nx + i]; }

    // periodic-in-x accessors
    double Up(int i, int j) const { return u[j * grid.nx + grid.wrapx(i)]; }
    double Vp(int i, int j) const { return v[j * grid.nx + grid.wrapx(i)]; }

    void axpy(double a, const VelocityField& x); // *this += a*x
    void scale(double a);
    void set_zero();

    /// Zero the wall-normal faces (and nothing else).
    void enforce_no_penetration();
};

// binary snapshot format: magic, nx, ny, wall mode, staggering tag, payload
void save_field(const VelocityField& f, const std::string& path);
VelocityField load_field(const std::string& path);
void save_scalar(const ScalarField& f, const std::string& path);
ScalarField load_scalar(const std::string& path);

} // namespace sns
