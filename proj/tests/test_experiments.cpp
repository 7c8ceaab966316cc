#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sns/experiments.hpp"

using namespace sns;
namespace fs = std::filesystem;

namespace {

std::string sweep_config(const std::string& out_dir) {
    std::ostringstream s;
    s << "[grid]\nnx = 16\nny = 16\n"
      << "[time]\nT = 0.01\ndt = 0.001\n"
      << "# comment line\n"
      << "[sweep]\nnu = 4e-3, 1e-3\nseeds = 1\n"
      << "[noise]\nmodes = 2\namplitude = 0.05\nwidth = 0.2\n"
      << "[u0]\ntype = vortex_pair\namplitude = 0.3\n"
      << "[strip]\nc_delta = 1.0\ntheta = 0.5\n"
      << "[output]\ndir = " << out_dir << "\nsnapshot_every = 5\n";
    return s.str();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int count_fields(const std::string& line) {
    int n = 1;
    for (char c : line)
        if (c == ',') ++n;
    return n;
}

} // namespace

TEST_CASE("config parsing, canonical form, hashing") {
    const RunConfig c = RunConfig::parse(sweep_config("outdir"));
    CHECK(c.nx == 16);
    CHECK(c.T == 0.01);
    CHECK(c.nus == std::vector<double>{4e-3, 1e-3});
    CHECK(c.seeds == std::vector<uint64_t>{1});
    CHECK(c.noise_amp == 0.05);
    CHECK(c.u0_type == "vortex_pair");
    CHECK(c.u0_amp == 0.3);
    CHECK(c.strip.c_delta == 1.0);
    CHECK(c.out_dir == "outdir");
    CHECK(c.snapshot_every == 5);
    CHECK(c.steps() == 10);

    // the hash covers physics but not the output directory
    RunConfig c2 = RunConfig::parse(sweep_config("elsewhere"));
    CHECK(c2.config_hash() == c.config_hash());
    RunConfig c3 = c;
    c3.noise_amp = 0.06;
    CHECK(c3.config_hash() != c.config_hash());
    CHECK(c.canonical() == c2.canonical());

    SUBCASE("missing keys and bad values are rejected") {
        auto drop = [&](const std::string& what) {
            std::string t = sweep_config("o");
            const size_t at = t.find(what);
            REQUIRE(at != std::string::npos);
            t.erase(at, t.find('\n', at) - at);
            return t;
        };
        CHECK_THROWS_AS(RunConfig::parse(drop("dt = ")), std::invalid_argument);
        CHECK_THROWS_AS(RunConfig::parse(drop("modes = ")), std::invalid_argument);
        CHECK_THROWS_AS(RunConfig::parse(drop("c_delta = ")), std::invalid_argument);
        auto swap = [&](const std::string& from, const std::string& to) {
            std::string t = sweep_config("o");
            t.replace(t.find(from), from.size(), to);
            return t;
        };
        // nu must be strictly decreasing and positive
        CHECK_THROWS(RunConfig::parse(swap("nu = 4e-3, 1e-3", "nu = 1e-3, 4e-3")));
        CHECK_THROWS(RunConfig::parse(swap("nu = 4e-3, 1e-3", "nu = 4e-3, -1e-3")));
        // T must be an integer multiple of dt
        CHECK_THROWS(RunConfig::parse(swap("dt = 0.001", "dt = 0.0003")));
        CHECK_THROWS(RunConfig::parse(swap("type = vortex_pair", "type = jet")));
        CHECK_THROWS(RunConfig::parse(swap("theta = 0.5", "theta = 1.5")));
        CHECK_THROWS(RunConfig::parse(swap("nx = 16", "nx = sixteen")));
    }

    SUBCASE("output options default") {
        std::string t = sweep_config("o");
        t.erase(t.find("[output]"));
        const RunConfig d = RunConfig::parse(t);
        CHECK(d.out_dir == "out");
        CHECK(d.snapshot_every == 100);
    }
}

TEST_CASE("format17 round-trips doubles exactly") {
    for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-308, 0.0, 123456789.123456}) {
        const std::string s = format17(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x);
    }
}

TEST_CASE("csv header and line have matching field counts") {
    const std::string h = sweep_csv_header();
    SweepRow r;
    r.seed = 3;
    r.nu = 1e-3;
    r.path_hash = 0xdeadbeefULL;
    CHECK(count_fields(h) == 21);
    CHECK(count_fields(sweep_csv_line(r)) == 21);
    // the nu column survives a parse round trip at full precision
    std::stringstream ss(sweep_csv_line(r));
    std::string f;
    std::getline(ss, f, ',');
    CHECK(f == "3");
    std::getline(ss, f, ',');
    CHECK(std::strtod(f.c_str(), nullptr) == 1e-3);
}

TEST_CASE("log-log regression") {
    // y = 3 x^2 exactly
    const std::vector<double> x{1.0, 2.0, 4.0, 8.0};
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * v * v);
    const LinFit f = regress_slope(x, y);
    CHECK(f.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(f.r2 == doctest::Approx(1.0));
    CHECK_THROWS(regress_slope({1.0, 2.0}, {1.0, 2.0}));
    CHECK_THROWS(regress_slope({1.0, -2.0, 3.0}, {1.0, 2.0, 3.0}));
}

TEST_CASE("fnv1a hashing is stable and content sensitive") {
    const char a[] = "abc";
    CHECK(fnv1a_bytes(a, 3) == fnv1a_bytes(a, 3));
    CHECK(fnv1a_bytes(a, 3) != fnv1a_bytes("abd", 3));
    const std::string p = "fnv_probe.bin";
    {
        std::ofstream out(p, std::ios::binary);
        out << "abc";
    }
    CHECK(fnv1a_file(p) == fnv1a_bytes(a, 3));
    fs::remove(p);
    CHECK_THROWS(fnv1a_file("missing_file.bin"));
}

TEST_CASE("sweep orchestration: run, determinism, resume, verification") {
    for (const char* d : {"swp_a", "swp_b"}) fs::remove_all(d);

    const RunConfig cfg = RunConfig::parse(sweep_config("swp_a"));
    const SweepResult res = run_sweep(cfg);
    REQUIRE(res.rows.size() == 2);
    for (const auto& r : res.rows) {
        INFO("cell error: " << r.error);
        CHECK(r.error.empty());
        CHECK(r.sup_err > 0.0);
        CHECK(r.delta > 0.0);
        CHECK(r.delta <= r.delta0);
        CHECK(r.split_res < 1e-12);
        CHECK(r.d_a <= r.d_global);
        CHECK(r.path_hash != 0);
    }
    // rows come out seed-major in the configured nu order
    CHECK(res.rows[0].nu == 4e-3);
    CHECK(res.rows[1].nu == 1e-3);
    // stronger viscosity dissipates more
    CHECK(res.rows[0].d_global > res.rows[1].d_global);

    CHECK(fs::exists(res.csv_path));
    CHECK(fs::exists(res.summary_path));
    CHECK(fs::exists(res.manifest_path));
    std::string msg;
    CHECK(verify_manifest(res.manifest_path, &msg));

    // byte-identical rerun in a fresh directory
    RunConfig cfg_b = cfg;
    cfg_b.out_dir = "swp_b";
    const SweepResult res_b = run_sweep(cfg_b);
    CHECK(slurp(res_b.csv_path) == slurp(res.csv_path));

    // resume: a second run over the same directory recomputes nothing and
    // leaves the outputs byte-for-byte identical
    const std::string before = slurp(res.csv_path);
    const SweepResult res_r = run_sweep(cfg);
    CHECK(res_r.rows.size() == 2);
    CHECK(slurp(res_r.csv_path) == before);

    // corrupting an inventoried file breaks verification
    {
        std::ofstream out(res.csv_path, std::ios::app);
        out << "tampered\n";
    }
    CHECK_FALSE(verify_manifest(res.manifest_path, &msg));
    CHECK_FALSE(msg.empty());

    for (const char* d : {"swp_a", "swp_b"}) fs::remove_all(d);
}

TEST_CASE("stokes deviation slope study runs on a small config") {
    fs::remove_all("swp_s");
    std::string t = sweep_config("swp_s");
    const std::string from = "nu = 4e-3, 1e-3";
    t.replace(t.find(from), from.size(), "nu = 1e-2,1e-3,1e-4");
    const RunConfig cfg = RunConfig::parse(t);
    const StokesSlopeReport rep = stokes_slope(cfg);
    REQUIRE(rep.nus.size() == 3);
    REQUIRE(rep.devs.size() == 3);
    for (double d : rep.devs) CHECK(d > 0.0);
    // smaller nu means smaller deviation from the Wiener process
    CHECK(rep.devs[2] < rep.devs[0]);
    CHECK(rep.fit.slope > 0.0);
    const std::string js = rep.to_json();
    CHECK(js.find("slope") != std::string::npos);
    fs::remove_all("swp_s");
}
