#include "sns/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "sns/noise.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace sns {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

using IniMap = std::map<std::string, std::map<std::string, std::string>>;

IniMap parse_ini(const std::string& text) {
    IniMap out;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        out[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

const std::string& require(const IniMap& ini, const std::string& sec,
                           const std::string& key) {
    auto s = ini.find(sec);
    if (s == ini.end() || !s->second.count(key))
        throw std::invalid_argument("config: missing required key [" + sec + "] " + key);
    return s->second.at(key);
}

const std::string* optional(const IniMap& ini, const std::string& sec,
                            const std::string& key) {
    auto s = ini.find(sec);
    if (s == ini.end()) return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
}

double to_double(const std::string& v, const std::string& what) {
    size_t pos = 0;
    double x;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad number for " + what + ": '" + v + "'");
    }
    if (pos != v.size())
        throw std::invalid_argument("config: bad number for " + what + ": '" + v + "'");
    return x;
}

long long to_int(const std::string& v, const std::string& what) {
    size_t pos = 0;
    long long x;
    try {
        x = std::stoll(v, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad integer for " + what + ": '" + v + "'");
    }
    if (pos != v.size())
        throw std::invalid_argument("config: bad integer for " + what + ": '" + v + "'");
    return x;
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::istringstream in(v);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string hex64(uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << content;
    }
    fs::rename(tmp, path);
}

json row_to_json(const SweepRow& r) {
    json j;
    j["seed"] = r.seed;
    j["nu"] = r.nu;
    j["delta0"] = r.delta0;
    j["alpha"] = r.alpha;
    j["delta"] = r.delta;
    j["sup_err"] = r.sup_err;
    j["d_global"] = r.d_global;
    j["d_a"] = r.d_a;
    j["d_b"] = r.d_b;
    j["d_c"] = r.d_c;
    j["r1"] = r.r1;
    j["r2"] = r.r2;
    j["r3_int"] = r.r3_int;
    j["split_res"] = r.split_res;
    j["bridge_gap"] = r.bridge_gap;
    j["energy_T"] = r.energy_T;
    j["stokes_dev"] = r.stokes_dev;
    j["path_hash"] = r.path_hash;
    j["delta_off_rule"] = r.delta_off_rule;
    j["under_resolved"] = r.under_resolved;
    j["error"] = r.error;
    return j;
}

SweepRow row_from_json(const json& j) {
    SweepRow r;
    r.seed = j.at("seed").get<uint64_t>();
    r.nu = j.at("nu").get<double>();
    r.delta0 = j.at("delta0").get<double>();
    r.alpha = j.at("alpha").get<double>();
    r.delta = j.at("delta").get<double>();
    r.sup_err = j.at("sup_err").get<double>();
    r.d_global = j.at("d_global").get<double>();
    r.d_a = j.at("d_a").get<double>();
    r.d_b = j.at("d_b").get<double>();
    r.d_c = j.at("d_c").get<double>();
    r.r1 = j.at("r1").get<double>();
    r.r2 = j.at("r2").get<double>();
    r.r3_int = j.at("r3_int").get<double>();
    r.split_res = j.at("split_res").get<double>();
    r.bridge_gap = j.at("bridge_gap").get<double>();
    r.energy_T = j.at("energy_T").get<double>();
    r.stokes_dev = j.at("stokes_dev").get<double>();
    r.path_hash = j.at("path_hash").get<uint64_t>();
    r.delta_off_rule = j.at("delta_off_rule").get<int>();
    r.under_resolved = j.at("under_resolved").get<int>();
    r.error = j.at("error").get<std::string>();
    return r;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int worker_count() {
    const char* env = std::getenv("SNSLAB_WORKERS");
    if (!env) return 1;
    const int n = std::atoi(env);
    return std::clamp(n, 1, 64);
}

} // namespace

uint64_t fnv1a_bytes(const void* data, size_t n, uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

uint64_t fnv1a_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    uint64_t h = 1469598103934665603ULL;
    char buf[65536];
    while (in.read(buf, sizeof buf) || in.gcount() > 0)
        h = fnv1a_bytes(buf, static_cast<size_t>(in.gcount()), h);
    return h;
}

std::string format17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

RunConfig RunConfig::parse(const std::string& text) {
    const IniMap ini = parse_ini(text);
    RunConfig c;
    c.nx = static_cast<int>(to_int(require(ini, "grid", "nx"), "grid.nx"));
    c.ny = static_cast<int>(to_int(require(ini, "grid", "ny"), "grid.ny"));
    c.T = to_double(require(ini, "time", "T"), "time.T");
    c.dt = to_double(require(ini, "time", "dt"), "time.dt");
    for (const auto& s : split_list(require(ini, "sweep", "nu")))
        c.nus.push_back(to_double(s, "sweep.nu"));
    for (const auto& s : split_list(require(ini, "sweep", "seeds")))
        c.seeds.push_back(static_cast<uint64_t>(to_int(s, "sweep.seeds")));
    c.noise_modes =
        static_cast<int>(to_int(require(ini, "noise", "modes"), "noise.modes"));
    c.noise_amp = to_double(require(ini, "noise", "amplitude"), "noise.amplitude");
    c.noise_width = to_double(require(ini, "noise", "width"), "noise.width");
    c.u0_type = require(ini, "u0", "type");
    if (c.u0_type == "vortex_pair")
        c.u0_amp = to_double(require(ini, "u0", "amplitude"), "u0.amplitude");
    else if (c.u0_type != "zero")
        throw std::invalid_argument("config: unknown u0.type '" + c.u0_type + "'");
    c.strip = StripSpec(to_double(require(ini, "strip", "c_delta"), "strip.c_delta"),
                        to_double(require(ini, "strip", "theta"), "strip.theta"));
    if (const auto* v = optional(ini, "output", "dir")) c.out_dir = *v;
    if (const auto* v = optional(ini, "output", "snapshot_every"))
        c.snapshot_every = static_cast<int>(to_int(*v, "output.snapshot_every"));

    if (!(c.T > 0.0) || !(c.dt > 0.0))
        throw std::invalid_argument("config: T and dt must be positive");
    if (c.nus.empty()) throw std::invalid_argument("config: empty nu list");
    for (size_t i = 0; i < c.nus.size(); ++i) {
        if (!(c.nus[i] > 0.0))
            throw std::invalid_argument("config: nu values must be positive");
        if (i > 0 && !(c.nus[i] < c.nus[i - 1]))
            throw std::invalid_argument("config: nu list must be strictly decreasing");
    }
    if (c.seeds.empty()) throw std::invalid_argument("config: empty seed list");
    if (c.noise_modes < 0) throw std::invalid_argument("config: noise.modes < 0");
    if (c.noise_modes > 0 && !(c.noise_width > 0.0))
        throw std::invalid_argument("config: noise.width must be positive");
    if (c.snapshot_every < 1)
        throw std::invalid_argument("config: output.snapshot_every must be >= 1");
    c.steps(); // validates divisibility
    return c;
}

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

int RunConfig::steps() const {
    const double m = T / dt;
    const long long M = std::llround(m);
    if (M < 1 || std::abs(m - double(M)) > 1e-9 * std::max(1.0, m))
        throw std::invalid_argument("config: T must be an integer multiple of dt");
    return static_cast<int>(M);
}

std::string RunConfig::canonical() const {
    std::ostringstream s;
    s << "grid.nx=" << nx << "\ngrid.ny=" << ny << "\ntime.T=" << format17(T)
      << "\ntime.dt=" << format17(dt) << "\nsweep.nu=";
    for (size_t i = 0; i < nus.size(); ++i) s << (i ? "," : "") << format17(nus[i]);
    s << "\nsweep.seeds=";
    for (size_t i = 0; i < seeds.size(); ++i) s << (i ? "," : "") << seeds[i];
    s << "\nnoise.modes=" << noise_modes << "\nnoise.amplitude=" << format17(noise_amp)
      << "\nnoise.width=" << format17(noise_width) << "\nu0.type=" << u0_type
      << "\nu0.amplitude=" << format17(u0_amp)
      << "\nstrip.c_delta=" << format17(strip.c_delta)
      << "\nstrip.theta=" << format17(strip.theta)
      << "\noutput.snapshot_every=" << snapshot_every << "\n";
    return s.str();
}

uint64_t RunConfig::config_hash() const {
    const std::string c = canonical();
    return fnv1a_bytes(c.data(), c.size());
}

LinFit regress_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() < 3 || x.size() != y.size())
        throw std::invalid_argument("regress_slope: need >= 3 points");
    return fit_loglog(x, y);
}

std::string sweep_csv_header() {
    return "seed,nu,delta0,alpha,delta,sup_err,d_global,d_a,d_b,d_c,r1,r2,r3_int,"
           "split_res,bridge_gap,energy_T,stokes_dev,path_hash,delta_off_rule,"
           "under_resolved,error";
}

std::string sweep_csv_line(const SweepRow& r) {
    std::ostringstream s;
    s << r.seed << ',' << format17(r.nu) << ',' << format17(r.delta0) << ','
      << format17(r.alpha) << ',' << format17(r.delta) << ',' << format17(r.sup_err)
      << ',' << format17(r.d_global) << ',' << format17(r.d_a) << ','
      << format17(r.d_b) << ',' << format17(r.d_c) << ',' << format17(r.r1) << ','
      << format17(r.r2) << ',' << format17(r.r3_int) << ',' << format17(r.split_res)
      << ',' << format17(r.bridge_gap) << ',' << format17(r.energy_T) << ','
      << format17(r.stokes_dev) << ',' << hex64(r.path_hash) << ','
      << r.delta_off_rule << ',' << r.under_resolved << ',' << r.error;
    return s.str();
}

namespace {

VelocityField initial_field(const RunConfig& cfg, const ChannelGrid& g) {
    if (cfg.u0_type == "vortex_pair") return vortex_pair_ic(g, cfg.u0_amp);
    return VelocityField(g, BcTag::NoSlip);
}

SweepRow compute_cell(const RunConfig& cfg, const ModeSet& modes, const NoisePath& path,
                      const EulerRun& euler,
                      const std::pair<PeriodicTrace, PeriodicTrace>& traces,
                      uint64_t seed, double nu, const VelocityField& u0) {
    SweepRow row;
    row.seed = seed;
    row.nu = nu;
    try {
        const NSRun nr =
            run_ns(modes, path, nu, u0, &euler.trajectory, cfg.snapshot_every);
        const StokesRun sr = run_stokes(modes, path, nu, cfg.snapshot_every);
        const DiagnosticsRecord rec = kato_functionals(nr, euler, cfg.strip);

        row.delta0 = rec.delta0;
        row.alpha = rec.alpha;
        row.delta = rec.delta;
        row.sup_err = rec.sup_err;
        row.d_global = rec.d_global.back();
        row.d_a = rec.d_a.back();
        row.d_b = rec.d_b.back();
        row.d_c = rec.d_c.back();
        row.energy_T = nr.energy.back();
        row.stokes_dev = stokes_deviation(sr);
        row.path_hash = nr.path_hash;

        const ChannelCorrector corr =
            build_corrector(traces.first, traces.second, rec.delta);
        row.under_resolved = corr.under_resolved() ? 1 : 0;
        const GronwallRemainders grem =
            gronwall_remainders(nr, euler, sr, corr, rec.delta, rec.delta0);
        row.r1 = grem.r1;
        row.r2 = grem.r2;
        row.r3_int = grem.r3_int;
        row.delta_off_rule = grem.delta_off_rule ? 1 : 0;

        row.split_res = splitting_residual(nr, sr);
        double gap = 0.0;
        for (const auto& [n, u] : nr.snapshots) {
            (void)n;
            const auto [a, b] = bridge_functionals(u, rec.delta0);
            const double scale = std::max(std::max(a, b), 1e-30);
            gap = std::max(gap, std::abs(a - b) / scale);
        }
        row.bridge_gap = gap;
    } catch (const std::exception& e) {
        row = SweepRow{};
        row.seed = seed;
        row.nu = nu;
        row.error = e.what();
    }
    return row;
}

} // namespace

SweepResult run_sweep(const RunConfig& cfg) {
    const int M = cfg.steps();
    fs::create_directories(cfg.out_dir);
    const std::string manifest_path = (fs::path(cfg.out_dir) / "manifest.json").string();
    const std::string csv_path = (fs::path(cfg.out_dir) / "sweep.csv").string();
    const std::string summary_path = (fs::path(cfg.out_dir) / "summary.json").string();
    const std::string cfg_hash = hex64(cfg.config_hash());

    json manifest;
    std::map<std::string, SweepRow> done;
    if (fs::exists(manifest_path)) {
        std::ifstream in(manifest_path);
        json old = json::parse(in, nullptr, false);
        if (!old.is_discarded() && old.value("config_hash", "") == cfg_hash) {
            manifest = old;
            for (auto& [key, cell] : manifest["cells"].items())
                if (cell.value("status", "") == "done")
                    done[key] = row_from_json(cell.at("row"));
        }
    }
    if (manifest.is_null()) {
        manifest["config_hash"] = cfg_hash;
        manifest["code_version"] = "snslab 0.1.0";
        manifest["config"] = cfg.canonical();
        manifest["seeds"] = cfg.seeds;
        manifest["notes"]["r1_deviation_norm"] =
            "sup-in-time L2 deviation with unit constants in place of the "
            "pathwise constant and the smooth-norm deviation";
        manifest["cells"] = json::object();
        manifest["files"] = json::object();
    }
    write_atomic(manifest_path, manifest.dump(2));

    const ChannelGrid grid(cfg.nx, cfg.ny, WallMode::Walls);
    const ModeSet modes = ModeSet::build(
        grid, default_modes(cfg.noise_modes, cfg.noise_amp, cfg.noise_width));
    const VelocityField u0 = initial_field(cfg, grid);
    {
        const double h = std::min(grid.dx(), grid.dy());
        const double sp = max_speed(u0);
        if (sp * cfg.dt / h > 0.5)
            throw std::invalid_argument("config: dt violates the CFL bound for u0");
    }

    auto cell_key = [&](uint64_t seed, double nu) {
        return "s" + std::to_string(seed) + "/nu" + format17(nu);
    };

    const size_t ns = cfg.seeds.size(), nn = cfg.nus.size();
    std::vector<SweepRow> rows(ns * nn);
    std::mutex manifest_mtx;
    std::atomic<size_t> next_seed{0};

    auto record_cell = [&](const std::string& key, const SweepRow& row, double secs) {
        std::lock_guard<std::mutex> lock(manifest_mtx);
        json cell;
        cell["status"] = "done";
        cell["row"] = row_to_json(row);
        cell["wall_clock_s"] = secs;
        if (!row.error.empty()) cell["reason"] = row.error;
        manifest["cells"][key] = cell;
        write_atomic(manifest_path, manifest.dump(2));
    };

    auto work = [&]() {
        for (size_t si = next_seed.fetch_add(1); si < ns; si = next_seed.fetch_add(1)) {
            const uint64_t seed = cfg.seeds[si];
            bool all_done = true;
            for (size_t ni = 0; ni < nn; ++ni) {
                auto it = done.find(cell_key(seed, cfg.nus[ni]));
                if (it != done.end())
                    rows[si * nn + ni] = it->second;
                else
                    all_done = false;
            }
            if (all_done) continue;

            const NoisePath path = sample_path(modes.count(), M, cfg.T, seed);
            const EulerRun euler = run_euler(modes, path, u0, true);
            const auto traces = wall_traces(euler.trajectory.back());
            for (size_t ni = 0; ni < nn; ++ni) {
                const std::string key = cell_key(seed, cfg.nus[ni]);
                if (done.count(key)) continue;
                const auto t0 = std::chrono::steady_clock::now();
                rows[si * nn + ni] =
                    compute_cell(cfg, modes, path, euler, traces, seed, cfg.nus[ni], u0);
                const double secs =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                        .count();
                record_cell(key, rows[si * nn + ni], secs);
            }
        }
    };

    const int workers = std::min<int>(worker_count(), static_cast<int>(ns));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    // CSV, deterministic order: seeds then nus as configured
    {
        std::ostringstream csv;
        csv << sweep_csv_header() << "\n";
        for (const auto& row : rows) csv << sweep_csv_line(row) << "\n";
        write_atomic(csv_path, csv.str());
    }

    // summary: rank correlations, exceedance probabilities, delta-rule check
    json summary;
    summary["config_hash"] = cfg_hash;
    summary["notes"] = manifest["notes"];
    {
        auto ok = [&](size_t si, size_t ni) { return rows[si * nn + ni].error.empty(); };
        const char* names[4] = {"d_global", "d_a", "d_b", "d_c"};
        for (int q = 0; q < 4; ++q) {
            std::vector<double> per_seed;
            for (size_t si = 0; si < ns; ++si) {
                std::vector<double> e, d;
                for (size_t ni = 0; ni < nn; ++ni) {
                    if (!ok(si, ni)) continue;
                    const SweepRow& r = rows[si * nn + ni];
                    e.push_back(r.sup_err);
                    d.push_back(q == 0   ? r.d_global
                                : q == 1 ? r.d_a
                                : q == 2 ? r.d_b
                                         : r.d_c);
                }
                if (e.size() >= 2) per_seed.push_back(spearman(e, d));
            }
            summary["spearman"][names[q]]["per_seed"] = per_seed;
            summary["spearman"][names[q]]["median"] = median(per_seed);
        }

        summary["probability"] = json::array();
        for (double eps : {0.02, 0.05, 0.1, 0.2}) {
            json jp;
            jp["eps"] = eps;
            jp["per_nu"] = json::array();
            for (size_t ni = 0; ni < nn; ++ni) {
                std::vector<double> errs;
                for (size_t si = 0; si < ns; ++si)
                    if (ok(si, ni)) errs.push_back(rows[si * nn + ni].sup_err);
                json je;
                je["nu"] = cfg.nus[ni];
                if (!errs.empty()) {
                    const auto est = convergence_in_probability(errs, eps);
                    je["p"] = est.p;
                    je["ci"] = {est.ci_lo, est.ci_hi};
                    je["n"] = est.n;
                }
                jp["per_nu"].push_back(je);
            }
            summary["probability"].push_back(jp);
        }

        std::vector<double> per_seed_mono;
        for (size_t si = 0; si < ns; ++si) {
            int pairs = 0, mono = 0;
            for (size_t ni = 0; ni + 1 < nn; ++ni) {
                if (!ok(si, ni) || !ok(si, ni + 1)) continue;
                const SweepRow& a = rows[si * nn + ni];
                const SweepRow& b = rows[si * nn + ni + 1];
                const double ma = std::max(a.alpha, a.nu / a.delta0);
                const double mb = std::max(b.alpha, b.nu / b.delta0);
                ++pairs;
                if (mb <= ma * (1.0 + 1e-12)) ++mono;
            }
            if (pairs > 0) per_seed_mono.push_back(double(mono) / pairs);
        }
        summary["delta_rule_monotone"]["per_seed"] = per_seed_mono;
        summary["delta_rule_monotone"]["median"] = median(per_seed_mono);

        int failed = 0;
        for (const auto& r : rows)
            if (!r.error.empty()) ++failed;
        summary["cells_failed"] = failed;
        summary["cells_total"] = static_cast<int>(rows.size());
    }
    write_atomic(summary_path, summary.dump(2));

    manifest["files"]["sweep.csv"] = hex64(fnv1a_file(csv_path));
    manifest["files"]["summary.json"] = hex64(fnv1a_file(summary_path));
    write_atomic(manifest_path, manifest.dump(2));

    SweepResult res;
    res.rows = std::move(rows);
    res.csv_path = csv_path;
    res.summary_path = summary_path;
    res.manifest_path = manifest_path;
    return res;
}

StokesSlopeReport stokes_slope(const RunConfig& cfg) {
    const int M = cfg.steps();
    const ChannelGrid grid(cfg.nx, cfg.ny, WallMode::Walls);
    const ModeSet modes = ModeSet::build(
        grid, default_modes(cfg.noise_modes, cfg.noise_amp, cfg.noise_width));
    const NoisePath path = sample_path(modes.count(), M, cfg.T, cfg.seeds.front());
    StokesSlopeReport rep;
    rep.nus = cfg.nus;
    for (double nu : cfg.nus)
        rep.devs.push_back(stokes_deviation(run_stokes(modes, path, nu)));
    rep.fit = regress_slope(rep.nus, rep.devs);
    return rep;
}

std::string StokesSlopeReport::to_json() const {
    json j;
    j["nu"] = nus;
    j["sup_deviation"] = devs;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["r2"] = fit.r2;
    return j.dump(2);
}

bool verify_manifest(const std::string& manifest_path, std::string* message) {
    std::ifstream in(manifest_path);
    if (!in) {
        if (message) *message = "cannot read " + manifest_path;
        return false;
    }
    json m = json::parse(in, nullptr, false);
    if (m.is_discarded()) {
        if (message) *message = "manifest is not valid JSON";
        return false;
    }
    const fs::path dir = fs::path(manifest_path).parent_path();
    int checked = 0;
    const json files = m.value("files", json::object());
    const json cells_j = m.value("cells", json::object());
    for (const auto& [name, hash] : files.items()) {
        const std::string p = (dir / name).string();
        if (!fs::exists(p)) {
            if (message) *message = "missing file: " + name;
            return false;
        }
        if (hex64(fnv1a_file(p)) != hash.get<std::string>()) {
            if (message) *message = "hash mismatch: " + name;
            return false;
        }
        ++checked;
    }
    int cells = 0, failed = 0;
    for (const auto& [key, cell] : cells_j.items()) {
        (void)key;
        ++cells;
        if (cell.contains("reason")) ++failed;
    }
    if (message)
        *message = std::to_string(checked) + " files verified, " +
                   std::to_string(cells) + " cells (" + std::to_string(failed) +
                   " failed)";
    return true;
}

} // namespace sns
