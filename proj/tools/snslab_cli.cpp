#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "sns/experiments.hpp"

namespace {

int cmd_sweep(const std::string& config_path) {
    const sns::RunConfig cfg = sns::RunConfig::parse_file(config_path);
    const sns::SweepResult res = sns::run_sweep(cfg);
    int failed = 0;
    for (const auto& r : res.rows)
        if (!r.error.empty()) ++failed;
    std::cout << "wrote " << res.csv_path << "\n"
              << "wrote " << res.summary_path << "\n"
              << "wrote " << res.manifest_path << "\n"
              << res.rows.size() - failed << "/" << res.rows.size()
              << " cells completed\n";
    return failed == 0 ? 0 : 1;
}

int cmd_stokes_slope(const std::string& config_path) {
    const sns::RunConfig cfg = sns::RunConfig::parse_file(config_path);
    const sns::StokesSlopeReport rep = sns::stokes_slope(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    const auto out = std::filesystem::path(cfg.out_dir) / "stokes_slope.json";
    std::ofstream(out) << rep.to_json() << "\n";
    std::cout << rep.to_json() << "\nwrote " << out.string() << "\n";
    return 0;
}

int cmd_corrector_scalings(const std::string& config_path) {
    const sns::RunConfig cfg = sns::RunConfig::parse_file(config_path);
    // generic smooth trace and its time-difference stand-in
    const auto trace = sns::PeriodicTrace::from_function(256, [](double s) {
        return std::sin(2.0 * M_PI * s) + 0.3 * std::cos(4.0 * M_PI * s);
    });
    const auto trace_dot = sns::PeriodicTrace::from_function(256, [](double s) {
        return std::cos(2.0 * M_PI * s) - 0.2 * std::sin(4.0 * M_PI * s);
    });
    const std::vector<double> deltas = {0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625};
    const sns::ScalingReport rep = sns::verify_scalings(trace, trace_dot, deltas);
    std::filesystem::create_directories(cfg.out_dir);
    const auto out = std::filesystem::path(cfg.out_dir) / "corrector_scalings.json";
    std::ofstream(out) << rep.to_json() << "\n";
    std::cout << rep.to_json() << "\nwrote " << out.string() << "\n";
    return 0;
}

int cmd_verify(const std::string& manifest_path) {
    std::string msg;
    const bool ok = sns::verify_manifest(manifest_path, &msg);
    std::cout << (ok ? "ok: " : "FAILED: ") << msg << "\n";
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic channel-flow inviscid-limit laboratory"};
    app.require_subcommand(1);

    std::string sweep_cfg, slope_cfg, scal_cfg, manifest;
    auto* sweep = app.add_subcommand("sweep", "run the viscosity/ensemble sweep");
    sweep->add_option("config", sweep_cfg, "config file")->required();
    auto* slope =
        app.add_subcommand("stokes-slope", "Stokes deviation slope study in nu");
    slope->add_option("config", slope_cfg, "config file")->required();
    auto* scal =
        app.add_subcommand("corrector-scalings", "corrector width-scaling report");
    scal->add_option("config", scal_cfg, "config file")->required();
    auto* verify = app.add_subcommand("verify", "re-check a sweep manifest");
    verify->add_option("manifest", manifest, "manifest.json path")->required();

    CLI11_PARSE(app, argc, argv);
    try {
        if (sweep->parsed()) return cmd_sweep(sweep_cfg);
        if (slope->parsed()) return cmd_stokes_slope(slope_cfg);
        if (scal->parsed()) return cmd_corrector_scalings(scal_cfg);
        if (verify->parsed()) return cmd_verify(manifest);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
