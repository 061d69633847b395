#include "vch/experiments.hpp"

#include "vch/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <thread>

namespace vch {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Job {
    SolverConfig cfg;
    std::string label;
};

struct JobOutput {
    RunResult run;
    double min_u0 = 0.0;
};

JobOutput execute(const Job& job, const SweepPlan& plan) {
    GalerkinSystem sys(job.cfg);
    const GridField u0 = plan.u0(sys.basis());
    const SpectralField c0 = project_initial(u0, sys.basis());
    const long steps = step_count(job.cfg);
    const int sample_every = static_cast<int>(std::max(1L, steps / std::max(1, plan.samples)));
    Trajectory traj = integrate(sys, c0, sample_every);

    JobOutput out;
    out.min_u0 = *std::min_element(u0.values().begin(), u0.values().end());
    RunResult& r = out.run;
    r.label = job.label;
    r.mobility = job.cfg.physics.mobility;
    r.modes = job.cfg.modes;
    r.complete = traj.complete;
    r.failure = traj.failure;
    r.initial = c0;
    for (auto& s : traj.samples) {
        r.records.push_back(s.record);
        r.states.push_back(std::move(s.state.c));
    }
    r.final_state = r.states.back();
    return out;
}

std::vector<JobOutput> execute_all(const std::vector<Job>& jobs, const SweepPlan& plan) {
    std::vector<JobOutput> outputs(jobs.size());
    std::vector<std::string> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            try {
                outputs[i] = execute(jobs[i], plan);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const int threads = std::min<int>(resolve_thread_count(plan.threads), static_cast<int>(jobs.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (!errors[i].empty()) throw Error("run " + jobs[i].label + " failed: " + errors[i]);
    }
    return outputs;
}

SweepReport assemble(SweepKind kind, const SweepPlan& plan, std::vector<JobOutput> outputs, std::size_t primary) {
    SweepReport report;
    report.kind = kind;
    report.u0_description = plan.u0_description;
    report.eps_neg = plan.eps_neg;
    report.nonzero_fraction = plan.nonzero_fraction;
    report.min_u0 = std::numeric_limits<double>::infinity();
    for (auto& o : outputs) {
        report.min_u0 = std::min(report.min_u0, o.min_u0);
        report.runs.push_back(std::move(o.run));
    }
    report.entropy_u0 = report.min_u0 > 0.0 ? entropy_total(report.runs.front().initial, 0.0)
                                            : std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i + 1 < primary; ++i) {
        report.gaps.push_back(trajectory_gap(report.runs[i], report.runs[i + 1]));
    }
    if (report.runs.size() > primary && primary > 0) {
        report.degenerate_gap = trajectory_gap(report.runs[primary - 1], report.runs[primary]);
    }
    fit_constants(report);
    return report;
}

}  // namespace

void validate(const SweepPlan& plan) {
    validate(plan.base);
    if (!plan.u0) throw PreconditionError("sweep plan has no initial condition");
    if (plan.samples < 1) throw PreconditionError("samples must be >= 1");
    for (std::size_t i = 0; i < plan.theta_list.size(); ++i) {
        const double t = plan.theta_list[i];
        if (!(t > 0.0 && t < 1.0)) throw PreconditionError("theta_list entries must satisfy 0 < theta < 1");
        if (i > 0 && !(t < plan.theta_list[i - 1])) throw PreconditionError("theta_list must be strictly decreasing");
    }
    for (std::size_t i = 0; i < plan.n_list.size(); ++i) {
        if (i > 0 && plan.n_list[i] < plan.n_list[i - 1]) throw PreconditionError("n_list must be non-decreasing");
    }
}

bool SweepReport::complete() const {
    return std::all_of(runs.begin(), runs.end(), [](const RunResult& r) { return r.complete; });
}

std::size_t SweepReport::primary_count() const {
    if (kind == SweepKind::refinement) return runs.size();
    std::size_t n = 0;
    while (n < runs.size() && runs[n].mobility.kind != MobilityKind::degenerate) ++n;
    return n;
}

SweepReport theta_sweep(const SweepPlan& plan) {
    validate(plan);
    if (plan.theta_list.empty()) throw PreconditionError("theta sweep needs at least one theta");
    std::vector<Job> jobs;
    for (double theta : plan.theta_list) {
        Job job{plan.base, "theta_" + format_double(theta)};
        job.cfg.physics.mobility = {MobilityKind::cutoff, theta};
        jobs.push_back(job);
    }
    const std::size_t primary = jobs.size();
    if (plan.include_degenerate) {
        Job job{plan.base, "degenerate"};
        job.cfg.physics.mobility = {MobilityKind::degenerate, 0.0};
        jobs.push_back(job);
    }
    return assemble(SweepKind::theta, plan, execute_all(jobs, plan), primary);
}

SweepReport n_refinement(const SweepPlan& plan) {
    validate(plan);
    if (plan.n_list.empty()) throw PreconditionError("refinement needs at least one mode count");
    std::vector<Job> jobs;
    for (int n : plan.n_list) {
        Job job{plan.base, "modes_" + std::to_string(n)};
        job.cfg.modes = n;
        jobs.push_back(job);
    }
    const std::size_t primary = jobs.size();
    return assemble(SweepKind::refinement, plan, execute_all(jobs, plan), primary);
}

double trajectory_gap(const RunResult& a, const RunResult& b) {
    if (a.states.empty() || b.states.empty()) throw PreconditionError("trajectory gap needs stored states");
    const bool a_finer = a.modes >= b.modes;
    double gap = 0.0;
    const std::size_t shared = std::min(a.states.size(), b.states.size());
    for (std::size_t i = 0; i < shared; ++i) {
        if (std::abs(a.records[i].t - b.records[i].t) > 1e-12 * std::max(1.0, a.records[i].t)) {
            throw PreconditionError("runs do not share sample times");
        }
        const SpectralField& fine = a_finer ? a.states[i] : b.states[i];
        const SpectralField coarse = resample(a_finer ? b.states[i] : a.states[i], fine.basis());
        gap = std::max(gap, norm_l2(fine - coarse));
    }
    return gap;
}

double negativity_bound_shape(double theta) { return theta * theta + theta + std::sqrt(theta); }

void fit_constants(SweepReport& report) {
    report.negativity_max.clear();
    report.negativity_bound_shape.clear();
    const std::size_t primary = report.primary_count();
    for (std::size_t i = 0; i < primary; ++i) {
        double m = 0.0;
        for (const auto& r : report.runs[i].records) m = std::max(m, r.negativity);
        report.negativity_max.push_back(m);
        report.negativity_bound_shape.push_back(negativity_bound_shape(report.runs[i].mobility.theta));
    }
    report.c_fit = primary > 0 ? report.negativity_max[0] / report.negativity_bound_shape[0] : 0.0;

    report.entropy_k = 0.0;
    if (primary > 0 && std::isfinite(report.entropy_u0) && report.runs[0].mobility.kind == MobilityKind::cutoff) {
        double excess = 0.0;
        for (const auto& r : report.runs[0].records) excess = std::max(excess, r.entropy - report.entropy_u0);
        report.entropy_k = excess * std::sqrt(report.runs[0].mobility.theta);
    }
}

void Verdict::add(VerdictClause clause) {
    holds = holds && clause.holds;
    clauses.push_back(std::move(clause));
}

std::string Verdict::text() const {
    std::ostringstream os;
    os << "verdict: " << (holds ? "HOLDS" : "FAILS") << '\n';
    for (const auto& c : clauses) os << (c.holds ? "  [ok]   " : "  [FAIL] ") << c.name << ": " << c.detail << '\n';
    return os.str();
}

Verdict nonnegativity_report(const SweepReport& report) {
    if (!(report.min_u0 > 0.0)) {
        throw PreconditionError("nonnegativity verdict requires u_0(x) > 0 for all x (min u0 = " +
                                format_double(report.min_u0) + ")");
    }
    const std::size_t primary = report.primary_count();
    if (primary == 0) throw PreconditionError("report has no cutoff runs");

    Verdict v;
    {
        VerdictClause c{"negativity scaling", true, "c_fit = " + format_double(report.c_fit)};
        for (std::size_t i = 0; i < primary; ++i) {
            const double limit = report.c_fit * report.negativity_bound_shape[i] * (1.0 + 1e-12);
            if (!report.runs[i].complete || report.negativity_max[i] > limit) {
                c.holds = false;
                c.detail += "; " + report.runs[i].label + " max negativity " + format_double(report.negativity_max[i]) +
                            " exceeds " + format_double(limit);
            }
        }
        v.add(c);
    }
    const RunResult& finest = report.runs[primary - 1];
    {
        double lo = std::numeric_limits<double>::infinity();
        double at = 0.0;
        for (const auto& r : finest.records) {
            if (r.min_u < lo) {
                lo = r.min_u;
                at = r.t;
            }
        }
        const bool ok = finest.complete && lo >= -report.eps_neg;
        v.add({"finest-theta minimum", ok,
               finest.label + " min u = " + format_double(lo) + " at t = " + format_double(at) + " (floor " +
                   format_double(-report.eps_neg) + ")"});
    }
    {
        const double n0 = norm_l2(finest.initial);
        const double n1 = norm_l2(finest.final_state);
        const bool ok = finest.complete && n1 >= report.nonzero_fraction * n0;
        v.add({"not identically zero", ok,
               finest.label + " ||u(T)|| = " + format_double(n1) + ", ||u0|| = " + format_double(n0)});
    }
    return v;
}

Verdict inequality_report(const SweepReport& report, const InequalityTolerances& tol) {
    Verdict v;
    const std::size_t primary = report.primary_count();
    for (std::size_t i = 0; i < report.runs.size(); ++i) {
        const RunResult& run = report.runs[i];
        if (!run.complete || run.records.empty()) {
            v.add({run.label + " complete", false, run.failure.empty() ? "no records" : run.failure});
            continue;
        }
        const DiagnosticsRecord& first = run.records.front();

        double mass_drift = 0.0;
        double budget = -std::numeric_limits<double>::infinity();
        double rise = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < run.records.size(); ++k) {
            const auto& r = run.records[k];
            mass_drift = std::max(mass_drift, std::abs(r.mass - first.mass));
            budget = std::max(budget, energy_budget_residual(first, r));
            if (k > 0) rise = std::max(rise, r.energy - run.records[k - 1].energy);
        }
        const double mass_limit = tol.mass_rel * std::abs(first.mass) + tol.mass_abs;
        v.add({run.label + " mass", mass_drift <= mass_limit,
               "max drift " + format_double(mass_drift) + " (limit " + format_double(mass_limit) + ")"});
        v.add({run.label + " energy inequality", budget <= tol.energy_budget,
               "max E + visc + mob - E(0) = " + format_double(budget)});
        if (run.records.size() > 1) {
            v.add({run.label + " energy monotone", rise <= tol.energy_monotone,
                   "largest increase " + format_double(rise)});
        }

        if (i < primary && run.mobility.kind == MobilityKind::cutoff && std::isfinite(report.entropy_u0)) {
            const double limit = report.entropy_u0 + report.entropy_k / std::sqrt(run.mobility.theta);
            const double slack = 1e-12 * (1.0 + std::abs(report.entropy_u0));
            double worst = -std::numeric_limits<double>::infinity();
            for (const auto& r : run.records) worst = std::max(worst, r.entropy);
            v.add({run.label + " entropy bound", worst <= limit + slack,
                   "max entropy " + format_double(worst) + " vs " + format_double(limit)});
        }
    }
    return v;
}

Verdict refinement_report(const SweepReport& report, double floor_rel) {
    Verdict v;
    if (report.runs.empty()) throw PreconditionError("report has no runs");
    const double floor = floor_rel * std::max(1.0, norm_l2(report.runs.front().initial));
    for (std::size_t i = 1; i < report.gaps.size(); ++i) {
        const bool ok = report.gaps[i] < report.gaps[i - 1] || report.gaps[i] <= floor;
        v.add({"gap " + report.runs[i].label + " -> " + report.runs[i + 1].label, ok,
               format_double(report.gaps[i]) + " after " + format_double(report.gaps[i - 1])});
    }
    if (report.gaps.size() < 2) v.add({"gap sequence", true, "fewer than two gaps, nothing to compare"});
    return v;
}

int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("VCH_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace vch
