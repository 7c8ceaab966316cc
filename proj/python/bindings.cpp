#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sns/corrector.hpp"
#include "sns/diagnostics.hpp"
#include "sns/experiments.hpp"
#include "sns/geometry.hpp"
#include "sns/noise.hpp"
#include "sns/ops.hpp"
#include "sns/solver_euler.hpp"
#include "sns/solver_ns.hpp"
#include "sns/solver_stokes.hpp"

namespace py = pybind11;
using namespace sns;

PYBIND11_MODULE(_snslab, m) {
    m.doc() = "stochastic channel-flow inviscid-limit laboratory";

    py::class_<ChannelGrid>(m, "ChannelGrid")
        .def(py::init([](int nx, int ny, bool walls) {
                 return ChannelGrid(nx, ny,
                                    walls ? WallMode::Walls : WallMode::PeriodicY);
             }),
             py::arg("nx"), py::arg("ny"), py::arg("walls") = true)
        .def_readonly("nx", &ChannelGrid::nx)
        .def_readonly("ny", &ChannelGrid::ny)
        .def_property_readonly(
            "walls", [](const ChannelGrid& g) { return g.walls == WallMode::Walls; })
        .def("dx", &ChannelGrid::dx)
        .def("dy", &ChannelGrid::dy);

    py::enum_<BcTag>(m, "BcTag")
        .value("NoSlip", BcTag::NoSlip)
        .value("NoPenetration", BcTag::NoPenetration)
        .value("Free", BcTag::Free);

    py::class_<VelocityField>(m, "VelocityField")
        .def(py::init<const ChannelGrid&, BcTag>(), py::arg("grid"),
             py::arg("bc") = BcTag::Free)
        .def_readonly("grid", &VelocityField::grid)
        .def_readwrite("bc", &VelocityField::bc)
        .def_readwrite("u", &VelocityField::u)
        .def_readwrite("v", &VelocityField::v)
        .def("axpy", &VelocityField::axpy)
        .def("scale", &VelocityField::scale);

    m.def("divergence_max", [](const VelocityField& f) {
        const ScalarField d = divergence(f);
        double mx = 0.0;
        for (double x : d.data) mx = std::max(mx, std::abs(x));
        return mx;
    });
    m.def("leray_project", &leray_project, py::arg("field"),
          py::arg("tag") = BcTag::NoPenetration);
    m.def("l2_norm_sq", &l2_norm_sq);
    m.def("vortex_pair_ic", &vortex_pair_ic);

    py::class_<ModeSet>(m, "ModeSet")
        .def_static(
            "build",
            [](const ChannelGrid& g, int count, double amp, double width) {
                return ModeSet::build(g, default_modes(count, amp, width));
            },
            py::arg("grid"), py::arg("count"), py::arg("amp"), py::arg("width") = 0.12)
        .def("count", &ModeSet::count)
        .def("trace_q0", &ModeSet::trace_q0);

    py::class_<NoisePath>(m, "NoisePath")
        .def_readonly("t", &NoisePath::t)
        .def_readonly("seed", &NoisePath::seed)
        .def("steps", &NoisePath::steps)
        .def("content_hash", &NoisePath::content_hash);
    m.def("sample_path", &sample_path, py::arg("n_modes"), py::arg("steps"),
          py::arg("T"), py::arg("seed"));
    m.def("refine_path", &refine_path, py::arg("path"), py::arg("factor"));

    py::class_<StokesRun>(m, "StokesRun")
        .def_readonly("nu", &StokesRun::nu)
        .def_readonly("t", &StokesRun::t)
        .def_readonly("energy", &StokesRun::energy)
        .def_readonly("deviation", &StokesRun::deviation)
        .def_readonly("path_hash", &StokesRun::path_hash);
    m.def("run_stokes", &run_stokes, py::arg("modes"), py::arg("path"), py::arg("nu"),
          py::arg("snapshot_every") = 0);
    m.def("stokes_deviation", &stokes_deviation);

    py::class_<NSRun>(m, "NSRun")
        .def_readonly("nu", &NSRun::nu)
        .def_readonly("t", &NSRun::t)
        .def_readonly("energy", &NSRun::energy)
        .def_readonly("err_vs_ref", &NSRun::err_vs_ref)
        .def_readonly("path_hash", &NSRun::path_hash)
        .def("sup_energy", &NSRun::sup_energy)
        .def("sup_err", &NSRun::sup_err);
    m.def(
        "run_ns",
        [](const ModeSet& ms, const NoisePath& p, double nu, const VelocityField& u0,
           const EulerRun* ref, int snap) {
            return run_ns(ms, p, nu, u0, ref ? &ref->trajectory : nullptr, snap);
        },
        py::arg("modes"), py::arg("path"), py::arg("nu"), py::arg("u0"),
        py::arg("euler_ref") = nullptr, py::arg("snapshot_every") = 0);
    m.def("energy_identity_residual_ns", &energy_identity_residual_ns);

    py::class_<EulerRun>(m, "EulerRun")
        .def_readonly("t", &EulerRun::t)
        .def_readonly("energy", &EulerRun::energy)
        .def_readonly("path_hash", &EulerRun::path_hash);
    m.def("run_euler", &run_euler, py::arg("modes"), py::arg("path"), py::arg("u0"),
          py::arg("store_trajectory") = false);
    m.def("energy_identity_residual_euler", &energy_identity_residual_euler);

    py::class_<Cutoff>(m, "Cutoff")
        .def("xi", &Cutoff::xi)
        .def("xi_prime", &Cutoff::xi_prime)
        .def("Xi", &Cutoff::Xi);
    m.def("build_cutoff", &build_cutoff);
    m.def("select_delta", &select_delta, py::arg("nu"), py::arg("delta0"),
          py::arg("dissipation_a"));
    m.def("corrector_scalings_json",
          [](const std::vector<double>& deltas) {
              const auto tr = PeriodicTrace::from_function(128, [](double s) {
                  return std::sin(2.0 * M_PI * s);
              });
              const auto td = PeriodicTrace::from_function(128, [](double s) {
                  return std::cos(2.0 * M_PI * s);
              });
              return verify_scalings(tr, td, deltas).to_json();
          });

    py::class_<StripSpec>(m, "StripSpec")
        .def(py::init<double, double>(), py::arg("c_delta"), py::arg("theta"))
        .def("delta0", &StripSpec::delta0);

    py::class_<DiagnosticsRecord>(m, "DiagnosticsRecord")
        .def_readonly("nu", &DiagnosticsRecord::nu)
        .def_readonly("delta0", &DiagnosticsRecord::delta0)
        .def_readonly("d_global", &DiagnosticsRecord::d_global)
        .def_readonly("d_a", &DiagnosticsRecord::d_a)
        .def_readonly("d_b", &DiagnosticsRecord::d_b)
        .def_readonly("d_c", &DiagnosticsRecord::d_c)
        .def_readonly("sup_err", &DiagnosticsRecord::sup_err)
        .def_readonly("alpha", &DiagnosticsRecord::alpha)
        .def_readonly("delta", &DiagnosticsRecord::delta);
    m.def("kato_functionals", &kato_functionals);
    m.def("splitting_residual", &splitting_residual);
    m.def("convergence_in_probability", [](const std::vector<double>& errs, double eps) {
        const auto est = convergence_in_probability(errs, eps);
        return py::make_tuple(est.p, est.ci_lo, est.ci_hi, est.n);
    });
    m.def("spearman", &spearman);

    py::class_<RunConfig>(m, "RunConfig")
        .def_static("parse", &RunConfig::parse)
        .def_static("parse_file", &RunConfig::parse_file)
        .def_readonly("nus", &RunConfig::nus)
        .def_readonly("seeds", &RunConfig::seeds)
        .def_readwrite("out_dir", &RunConfig::out_dir)
        .def("config_hash", &RunConfig::config_hash);
    m.def("run_sweep", [](const RunConfig& cfg) {
        const SweepResult res = run_sweep(cfg);
        int failed = 0;
        for (const auto& r : res.rows)
            if (!r.error.empty()) ++failed;
        return py::make_tuple(res.csv_path, res.summary_path, res.manifest_path, failed);
    });
    m.def("regress_slope", [](const std::vector<double>& x, const std::vector<double>& y) {
        const LinFit f = regress_slope(x, y);
        return py::make_tuple(f.slope, f.intercept, f.r2);
    });
    m.def("verify_manifest", [](const std::string& path) {
        std::string msg;
        const bool ok = verify_manifest(path, &msg);
        return py::make_tuple(ok, msg);
    });
}
