#include "vch/cli.hpp"

#include "vch/config.hpp"
#include "vch/error.hpp"
#include "vch/report_io.hpp"
#include "vch/snapshot.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>

namespace vch {

namespace {

namespace fs = std::filesystem;

struct Options {
    std::string config;
    std::vector<std::string> overrides;
    std::string out;
    std::string report_dir;
    std::string snapshot;
};

RunConfig load(const Options& o) {
    RunConfig cfg = parse_config(o.config, o.overrides);
    if (!o.out.empty()) cfg.output_dir = o.out;
    return cfg;
}

void prepare_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_run(const Options& o) {
    const RunConfig cfg = load(o);
    const auto start = std::chrono::steady_clock::now();
    GalerkinSystem sys(cfg.solver);
    const InitialData u0 = make_initial_data(cfg.initial);
    const SpectralField c0 = project_initial(u0(sys.basis()), sys.basis());
    const long steps = step_count(cfg.solver);
    const int every = static_cast<int>(std::max(1L, steps / cfg.samples));
    const Trajectory traj = integrate(sys, c0, every);

    prepare_dir(cfg.output_dir);
    std::vector<DiagnosticsRecord> records;
    for (const auto& s : traj.samples) records.push_back(s.record);
    write_trajectory_csv(records, cfg.output_dir / "trajectory.csv");
    write_snapshot(c0, 0.0, cfg.output_dir / "initial.vchf");
    const Sample& last = traj.samples.back();
    write_snapshot(last.state.c, last.state.t, cfg.output_dir / "final.vchf");
    if (cfg.snapshot_every_sample) {
        for (std::size_t i = 0; i < traj.samples.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "sample_%05zu.vchf", i);
            write_snapshot(traj.samples[i].state.c, traj.samples[i].state.t, cfg.output_dir / name);
        }
    }
    char line[128];
    std::snprintf(line, sizeof line, "run: %zu samples to t = %.6g in %.2f s, %d halved steps -> ", traj.samples.size(),
                  last.state.t, seconds_since(start), traj.halved_steps);
    std::cout << line << cfg.output_dir.string() << '\n';
    if (!traj.complete) {
        std::cerr << "run incomplete: " << traj.failure << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

Verdict theta_verdict(const SweepReport& report) {
    Verdict v;
    if (report.min_u0 > 0.0) {
        for (auto& c : nonnegativity_report(report).clauses) v.add(std::move(c));
    } else {
        char buf[96];
        std::snprintf(buf, sizeof buf, "not applicable, min u0 = %.6g is not positive", report.min_u0);
        v.add({"nonnegativity", true, buf});
    }
    for (auto& c : inequality_report(report).clauses) v.add(std::move(c));
    return v;
}

Verdict refinement_verdict(const SweepReport& report) {
    Verdict v;
    for (auto& c : refinement_report(report).clauses) v.add(std::move(c));
    for (auto& c : inequality_report(report).clauses) v.add(std::move(c));
    return v;
}

std::string report_text(const SweepReport& report, const Verdict& verdict) {
    std::string s = sweep_kind_name(report.kind) + " sweep, u0 = " + report.u0_description + "\n";
    char buf[160];
    for (std::size_t i = 0; i < report.gaps.size(); ++i) {
        std::snprintf(buf, sizeof buf, "gap %s -> %s: %.6e\n", report.runs[i].label.c_str(),
                      report.runs[i + 1].label.c_str(), report.gaps[i]);
        s += buf;
    }
    if (report.degenerate_gap) {
        std::snprintf(buf, sizeof buf, "gap to degenerate reference: %.6e (reported, not asserted)\n",
                      *report.degenerate_gap);
        s += buf;
    }
    return s + verdict.text();
}

int finish_sweep(const SweepReport& report, const Verdict& verdict, const fs::path& dir, double elapsed) {
    write_report(report, dir);
    const std::string text = report_text(report, verdict);
    write_text(text, dir / "verdict.txt");
    char line[64];
    std::snprintf(line, sizeof line, "%zu runs in %.2f s -> ", report.runs.size(), elapsed);
    std::cout << text << line << dir.string() << '\n';
    if (!report.complete()) {
        for (const auto& r : report.runs) {
            if (!r.complete) std::cerr << "run " << r.label << " incomplete: " << r.failure << '\n';
        }
        return kExitFailure;
    }
    return verdict.holds ? kExitOk : kExitFailure;
}

int cmd_sweep(const Options& o) {
    const RunConfig cfg = load(o);
    const auto start = std::chrono::steady_clock::now();
    const SweepReport report = theta_sweep(make_plan(cfg));
    return finish_sweep(report, theta_verdict(report), cfg.output_dir, seconds_since(start));
}

int cmd_refine(const Options& o) {
    const RunConfig cfg = load(o);
    const auto start = std::chrono::steady_clock::now();
    const SweepReport report = n_refinement(make_plan(cfg));
    return finish_sweep(report, refinement_verdict(report), cfg.output_dir, seconds_since(start));
}

int cmd_verify(const Options& o) {
    const SweepReport report = read_report(o.report_dir);
    const Verdict verdict = report.kind == SweepKind::theta ? theta_verdict(report) : refinement_verdict(report);
    std::cout << report_text(report, verdict);
    if (!report.complete()) {
        std::cout << "report is partial: at least one run did not complete\n";
        return kExitFailure;
    }
    return verdict.holds ? kExitOk : kExitFailure;
}

int cmd_diagnose(const Options& o) {
    SolverConfig solver;
    if (!o.config.empty()) {
        solver = parse_config(o.config, o.overrides).solver;
    } else if (!o.overrides.empty()) {
        // physics overrides on top of the defaults; the initial data is unused here
        solver = parse_config_text("[initial]\nu0 = 0\n", o.overrides, "--set").solver;
    }
    const Snapshot snap = read_snapshot(o.snapshot, solver.dealias ? solver.padding : 1.0);
    solver.dim = snap.field.basis()->dim();
    solver.modes = snap.field.basis()->modes();
    SolverState state;
    state.t = snap.t;
    state.c = snap.field;
    std::cout << csv_header() << '\n' << csv_row(make_record(state, solver)) << '\n';
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Spectral Galerkin solver for the viscous Cahn-Hilliard equation", "vch"};
    app.require_subcommand(1);
    Options o;

    auto add_config = [&](CLI::App* sub) {
        sub->add_option("config", o.config, "INI configuration file")->required();
        sub->add_option("--set", o.overrides, "override a key: section.key=value (repeatable)");
        sub->add_option("--out", o.out, "output directory (overrides output.dir)");
    };
    auto* run = app.add_subcommand("run", "integrate one trajectory, write CSV and snapshots");
    add_config(run);
    auto* sweep = app.add_subcommand("sweep", "theta sweep, write a report directory");
    add_config(sweep);
    auto* refine = app.add_subcommand("refine", "mode-count refinement, write a report directory");
    add_config(refine);
    auto* verify = app.add_subcommand("verify", "re-check a report directory, exit 0 when the verdict holds");
    verify->add_option("report", o.report_dir, "report directory")->required();
    auto* diagnose = app.add_subcommand("diagnose", "print the diagnostics of one snapshot as CSV");
    diagnose->add_option("snapshot", o.snapshot, "snapshot file")->required();
    diagnose->add_option("--config", o.config, "configuration supplying the physics parameters");
    diagnose->add_option("--set", o.overrides, "override a config key: section.key=value");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*run) return cmd_run(o);
        if (*sweep) return cmd_sweep(o);
        if (*refine) return cmd_refine(o);
        if (*verify) return cmd_verify(o);
        if (*diagnose) return cmd_diagnose(o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const FormatError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const PreconditionError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace vch
