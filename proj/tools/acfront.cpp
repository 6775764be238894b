// acfront: command-line front end for the lattice front toolkit.
//
// Exit codes: 0 pass, 1 verdict failure, 2 usage error, 3 numerical failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "acfront/config.hpp"
#include "acfront/flow.hpp"
#include "acfront/harness.hpp"
#include "acfront/io.hpp"
#include "acfront/phase.hpp"
#include "acfront/sim.hpp"
#include "acfront/wave.hpp"

namespace fs = std::filesystem;
using namespace acfront;
using nlohmann::json;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;
constexpr int kNumerical = 3;

int verdict(bool pass) { return pass ? kPass : kFail; }

BoundaryJ parse_boundary(const std::string& s) {
    if (s == "periodic") return BoundaryJ::periodic;
    if (s == "reflect") return BoundaryJ::reflect;
    throw UsageError("boundary must be periodic or reflect");
}

// Writes to `path`, or stdout when it is empty or "-".
template <class F>
void with_output(const std::string& path, F&& f) {
    if (path.empty() || path == "-") {
        f(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    f(out);
}

int cmd_wave(double a, double L, double h, double theta, const std::string& out) {
    WaveOptions opt;
    opt.theta = theta;
    const WaveProfile w = solve_wave_full(BistableNonlinearity::cubic(a), L, h, opt);
    double res = 0.0;
    for (double r : mfde_residual(w)) res = std::max(res, std::abs(r));
    with_output(out, [&](std::ostream& o) { write_wave(o, w); });
    if (!out.empty() && out != "-")
        std::cout << json{{"a", a}, {"c", w.c}, {"d", w.d}, {"residual", res}, {"out", out}}.dump() << '\n';
    return kPass;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
    const Config cfg = Config::load(config_path);
    const ExperimentSpec spec = ExperimentSpec::from_config(cfg);
    const WaveProfile w = solve_wave_full(BistableNonlinearity::cubic(spec.a), spec.wave_L, spec.wave_h);
    const LatticeField u0 = make_initial(spec, w);

    SimConfig sc = SimConfig::defaults(w.f, spec.t_end);
    sc.dt = spec.effective_dt();
    sc.record_every = static_cast<int>(std::lround(spec.record_interval / sc.dt));
    sc.threads = spec.threads;
    sc.validate();

    fs::create_directories(out_dir);
    write_wave((fs::path(out_dir) / "wave.ndjson").string(), w);
    std::ofstream index(fs::path(out_dir) / "index.ndjson");
    std::ofstream phases(fs::path(out_dir) / "phases.csv", std::ios::binary);
    if (!index || !phases) throw UsageError("cannot write into " + out_dir);
    write_phase_csv_header(phases);
    run(u0, sc, [&](long s, double, const LatticeField& u) {
        const double t = s * sc.dt;
        char name[32];
        std::snprintf(name, sizeof name, "snap_%08ld.bin", s);
        write_snapshot((fs::path(out_dir) / name).string(), u, t);
        append_snapshot_index(index, s, t, name);
        write_phase_csv(phases, t, extract(u, w));
    });
    std::cout << json{{"config_hash", spec.hash()}, {"c", w.c}, {"dt", sc.dt}, {"steps", step_count(sc)},
                      {"out_dir", out_dir}}
                     .dump()
              << '\n';
    return kPass;
}

int cmd_phase(const std::string& snapshot, const std::string& wave_path, const std::string& out) {
    const Snapshot snap = read_snapshot(snapshot);
    const WaveProfile w = read_wave(wave_path);
    const PhaseExtract g = extract(snap.field, w);
    with_output(out, [&](std::ostream& o) {
        write_phase_csv_header(o);
        write_phase_csv(o, snap.t, g);
    });
    json summary = {{"t", snap.t}, {"defined_rows", g.defined_count()}, {"rows", g.gamma.size()}};
    if (g.defined_count() >= 2) {
        summary["flatness"] = flatness(g);
        summary["spread"] = phase_spread(g);
    }
    if (g.all_defined()) summary["front_error"] = front_error(snap.field, w, g);
    std::cerr << summary.dump() << '\n';
    return g.defined_count() > 0 ? kPass : kNumerical;
}

int cmd_heat(const std::string& kind, int n, int block, std::uint64_t seed, const std::string& out) {
    if (kind == "decay") {
        const PhaseSequence h0 = random_block_sequence(n, block, 1.0, seed);
        const DecayReport r = decay_report(h0, log_time_grid(1.0, 1000.0, 31));
        const bool slopes = std::abs(r.slope_grad + 0.5) <= 0.1 && std::abs(r.slope_lap + 1.0) <= 0.1;
        const bool pass = slopes && r.monotone_grad && r.monotone_lap;
        with_output(out, [&](std::ostream& o) {
            o << json{{"record", "decay"}, {"n", n}, {"block", block}, {"seed", seed}, {"t", r.t},
                      {"grad", r.grad}, {"lap", r.lap}, {"K_grad", r.K_grad}, {"K_lap", r.K_lap},
                      {"slope_grad", r.slope_grad}, {"slope_lap", r.slope_lap},
                      {"monotone_grad", r.monotone_grad}, {"monotone_lap", r.monotone_lap}, {"pass", pass}}
                     .dump()
              << '\n';
        });
        return verdict(pass);
    }
    if (kind == "bessel") {
        const std::vector<double> ts = {1.0, 5.0, 20.0, 100.0};
        const BesselBoundsReport r = bessel_bounds_report(ts);
        double worst_mass = 0.0;
        for (double t : ts) worst_mass = std::max(worst_mass, std::abs(heat_kernel(t).mass() - 1.0));
        const bool pass = r.single_sign_change && r.decreasing_in_k && worst_mass < 1e-12;
        with_output(out, [&](std::ostream& o) {
            o << json{{"record", "bessel"}, {"t", r.t}, {"grad_sum", r.grad_sum}, {"lap_sum", r.lap_sum},
                      {"telescoping", r.telescoping}, {"sign_changes", r.sign_changes},
                      {"decreasing_in_k", r.decreasing_in_k}, {"single_sign_change", r.single_sign_change},
                      {"kernel_mass_error", worst_mass}, {"pass", pass}}
                     .dump()
              << '\n';
        });
        return verdict(pass);
    }
    throw UsageError("heat --report expects decay or bessel");
}

int cmd_mcf(const std::string& init, double a, double t_end, double interval, double delta,
            const std::string& boundary, const std::string& out) {
    const PhaseSequence G0 = read_phase_sequence_csv(init, parse_boundary(boundary));
    const WaveProfile w = solve_wave_full(BistableNonlinearity::cubic(a), 40.0, 1.0 / 16.0);
    FlowParams p = FlowParams::from_wave(w.c, w.d);
    p.delta = delta;
    std::vector<double> times;
    for (double t = 0.0; t < t_end - 1e-12; t += interval) times.push_back(t);
    times.push_back(t_end);
    const PhaseTrajectory G = mcf_solve(G0, p, times);
    with_output(out, [&](std::ostream& o) {
        write_csv_row(o, {"t", "j", "Gamma"});
        for (std::size_t k = 0; k < G.times.size(); ++k)
            for (int j = 0; j < G.values[k].size(); ++j)
                write_csv_row(o, {format_double(G.times[k]), std::to_string(j), format_double(G.values[k][j])});
    });
    return kPass;
}

json report_json(const SuperSubReport& r) {
    return {{"pass", r.pass},         {"tolerance", r.tolerance}, {"min_upper", r.min_upper},
            {"max_lower", r.max_lower}, {"worst_i", r.worst_i},   {"worst_j", r.worst_j},
            {"worst_t", r.worst_t},   {"worst_residual", r.worst_residual}, {"mu", r.mu}, {"C", r.C}};
}

int cmd_verify(const std::string& kind, double a) {
    const WaveProfile w = solve_wave_full(BistableNonlinearity::cubic(a), 40.0, 1.0 / 16.0);
    std::vector<double> tg;
    for (int k = 0; k <= 50; ++k) tg.push_back(k);
    if (kind == "planar") {
        Window win;
        const SuperSubReport r = search_planar(w, 0.1, 0.1, win, tg);
        std::cout << json{{"kind", "planar"}, {"window", {win.width, win.height}}, {"report", report_json(r)}}.dump()
                  << '\n';
        return verdict(r.pass);
    }
    if (kind == "curved") {
        Window win;
        win.width = 128;
        win.i_offset = -64;
        std::vector<double> v(static_cast<std::size_t>(win.height));
        for (int j = 0; j < win.height; ++j)
            v[static_cast<std::size_t>(j)] = 0.5 * std::sin(2.0 * std::numbers::pi * j / win.height);
        const PhaseSequence V0(v);
        CurvedSpec spec = make_curved_spec(w, V0);
        const SuperSubReport r = verify_curved(w, spec, V0, win, tg);
        spec.zero_offsets = true;
        const SuperSubReport neg = verify_curved(w, spec, V0, win, tg);
        std::cout << json{{"kind", "curved"},
                          {"M", spec.M},
                          {"m", spec.m},
                          {"C", spec.C},
                          {"delta", spec.delta},
                          {"initial_margin", spec.initial_margin(w)},
                          {"report", report_json(r)},
                          {"negative_control", report_json(neg)}}
                         .dump()
                  << '\n';
        return verdict(r.pass && !neg.pass);
    }
    throw UsageError("verify-subsuper --kind expects planar or curved");
}

int cmd_experiment(const std::string& name, const std::string& config_path, const std::string& out) {
    const std::string key = name == "step" ? "step_kappa" : name;
    const ExperimentSpec spec = config_path.empty() ? ExperimentSpec::defaults(key)
                                                    : ExperimentSpec::from_config(Config::load(config_path), key);
    const ExperimentReport r = run_experiment(spec);
    with_output(out, [&](std::ostream& o) { r.write_ndjson(o); });
    std::cerr << r.summary();
    return verdict(r.passed());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Travelling fronts of the discrete Allen-Cahn equation"};
    app.set_version_flag("--version", std::string(kVersion));
    // --h is the grid spacing, so help is long-form only
    app.set_help_flag("--help", "print this help message and exit");
    app.require_subcommand(1);

    double a = 0.3, L = 40.0, h = 1.0 / 16.0, theta = 0.0;
    std::string out;
    auto* wave = app.add_subcommand("wave", "solve for the travelling wave and write it as NDJSON");
    wave->add_option("--a", a, "detuning in (0, 1)")->capture_default_str();
    wave->add_option("--L", L, "half-length of the grid")->capture_default_str();
    wave->add_option("--h", h, "grid spacing")->capture_default_str();
    wave->add_option("--theta", theta, "propagation angle")->capture_default_str();
    wave->add_option("--out", out, "output file (- for stdout)")->required();

    std::string config, out_dir = "acfront_out";
    auto* sim = app.add_subcommand("simulate", "run the lattice equation from a config file");
    sim->add_option("--config", config, "key = value config")->required()->check(CLI::ExistingFile);
    sim->add_option("--out-dir", out_dir, "directory for snapshots, index and phases")->capture_default_str();

    std::string snapshot, wave_path;
    auto* phase = app.add_subcommand("phase", "extract interface phases from a snapshot");
    phase->add_option("--snapshot", snapshot)->required()->check(CLI::ExistingFile);
    phase->add_option("--wave", wave_path)->required()->check(CLI::ExistingFile);
    phase->add_option("--out", out, "phase CSV (default stdout)");

    std::string report;
    int n = 2048, block = 256;
    std::uint64_t seed = 1;
    auto* heat = app.add_subcommand("heat", "discrete heat kernel checks");
    heat->add_option("--report", report)->required()->check(CLI::IsMember({"decay", "bessel"}));
    heat->add_option("--n", n, "sequence length for decay")->capture_default_str();
    heat->add_option("--block", block, "block length for decay")->capture_default_str();
    heat->add_option("--seed", seed)->capture_default_str();
    heat->add_option("--out", out);

    std::string init, boundary = "periodic";
    double t_end = 10.0, interval = 1.0, delta = 0.1;
    auto* mcf = app.add_subcommand("mcf", "evolve a phase sequence by discrete mean-curvature flow");
    mcf->add_option("--init", init, "CSV with one value per row")->required()->check(CLI::ExistingFile);
    mcf->add_option("--a", a)->capture_default_str();
    mcf->add_option("--t-end", t_end)->capture_default_str();
    mcf->add_option("--interval", interval)->capture_default_str();
    mcf->add_option("--delta", delta, "flatness bound")->capture_default_str();
    mcf->add_option("--boundary", boundary)->check(CLI::IsMember({"periodic", "reflect"}))->capture_default_str();
    mcf->add_option("--out", out);

    std::string kind;
    auto* verify = app.add_subcommand("verify-subsuper", "certify the sign of the residual of u+ and u-");
    verify->add_option("--kind", kind)->required()->check(CLI::IsMember({"planar", "curved"}));
    verify->add_option("--a", a)->capture_default_str();

    std::string name;
    auto* exp = app.add_subcommand("experiment", "run a named experiment and check its verdicts");
    exp->add_option("name", name)
        ->required()
        ->check(CLI::IsMember({"thm22", "thm23", "thm24", "step", "step_kappa", "trap"}));
    exp->add_option("--config", config, "key = value overrides of the defaults")->check(CLI::ExistingFile);
    exp->add_option("--out", out, "NDJSON report (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (*wave) return cmd_wave(a, L, h, theta, out);
        if (*sim) return cmd_simulate(config, out_dir);
        if (*phase) return cmd_phase(snapshot, wave_path, out);
        if (*heat) return cmd_heat(report, n, block, seed, out);
        if (*mcf) return cmd_mcf(init, a, t_end, interval, delta, boundary, out);
        if (*verify) return cmd_verify(kind, a);
        if (*exp) return cmd_experiment(name, config, out);
    } catch (const VerificationFailed& e) {
        std::cerr << "verification failed: " << e.what() << '\n';
        return kFail;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumerical;
    }
    return kUsage;
}
