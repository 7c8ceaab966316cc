#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sns/diagnostics.hpp"
#include "sns/stats.hpp"

namespace sns {

/// Sweep configuration, parsed from an INI-style text file. Physics
/// parameters have no defaults; only output options do.
struct RunConfig {
    int nx = 0, ny = 0;
    double T = 0.0, dt = 0.0;
    std::vector<double> nus;      // strictly decreasing
    std::vector<uint64_t> seeds;
    int noise_modes = 0;
    double noise_amp = 0.0;
    double noise_width = 0.0;
    std::string u0_type;          // "zero" | "vortex_pair"
    double u0_amp = 0.0;
    StripSpec strip;
    std::string out_dir = "out";
    int snapshot_every = 100;

    static RunConfig parse(const std::string& text);
    static RunConfig parse_file(const std::string& path);
    std::string canonical() const; // normalized dump, the hashing input
    uint64_t config_hash() const;
    int steps() const; // T/dt, validated integral
};

/// One (seed, nu) cell of the sweep CSV.
struct SweepRow {
    uint64_t seed = 0;
    double nu = 0.0;
    double delta0 = 0.0, alpha = 0.0, delta = 0.0;
    double sup_err = 0.0;
    double d_global = 0.0, d_a = 0.0, d_b = 0.0, d_c = 0.0; // at t = T
    double r1 = 0.0, r2 = 0.0, r3_int = 0.0;
    double split_res = 0.0, bridge_gap = 0.0;
    double energy_T = 0.0, stokes_dev = 0.0;
    uint64_t path_hash = 0;
    int delta_off_rule = 0, under_resolved = 0;
    std::string error; // nonempty: cell failed, numeric columns are zero
};

std::string sweep_csv_header();
std::string sweep_csv_line(const SweepRow& r);
std::string format17(double x); // 17-significant-digit decimal

struct SweepResult {
    std::vector<SweepRow> rows; // seed-major, nu order as configured
    std::string csv_path, summary_path, manifest_path;
};

/// Full orchestration: per seed one noise path and one Euler run, then NS and
/// Stokes per nu on the same path; emits manifest + CSV + JSON summary.
/// Worker count from SNSLAB_WORKERS (seeds in parallel). Completed cells in an
/// existing manifest with a matching config hash are not recomputed.
SweepResult run_sweep(const RunConfig& cfg);

/// log-log least squares; >= 3 strictly positive points.
LinFit regress_slope(const std::vector<double>& x, const std::vector<double>& y);

struct StokesSlopeReport {
    std::vector<double> nus, devs; // sup_t ||z - W|| per nu
    LinFit fit;
    std::string to_json() const;
};

/// sup-deviation slope study on one fixed path (first configured seed).
StokesSlopeReport stokes_slope(const RunConfig& cfg);

/// Re-check a manifest: inventory files exist and hash to the recorded values.
bool verify_manifest(const std::string& manifest_path, std::string* message = nullptr);

uint64_t fnv1a_bytes(const void* data, size_t n, uint64_t h = 1469598103934665603ULL);
uint64_t fnv1a_file(const std::string& path);

} // namespace sns
