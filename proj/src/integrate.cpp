#include "vch/integrate.hpp"

#include "vch/error.hpp"

#include <cmath>

namespace vch {

namespace {

SolverState advance(const GalerkinSystem& sys, const SolverState& s, double dt, int depth, Trajectory& traj) {
    try {
        StepStats stats;
        SolverState next = sys.step(s, dt, &stats);
        traj.picard_sweeps += stats.picard_iterations;
        return next;
    } catch (const StepRejected&) {
        if (depth >= kMaxHalvings) throw;
    }
    const SolverState half = advance(sys, s, 0.5 * dt, depth + 1, traj);
    return advance(sys, half, 0.5 * dt, depth + 1, traj);
}

}  // namespace

long step_count(const SolverConfig& cfg) {
    const double ratio = cfg.t_end / cfg.dt;
    const long n = std::lround(ratio);
    if (std::abs(ratio - double(n)) > 1e-9 * std::max(1.0, ratio)) {
        throw PreconditionError("t_end must be an integer multiple of dt");
    }
    return n;
}

Trajectory integrate(const GalerkinSystem& sys, const SpectralField& c0, int sample_every) {
    if (sample_every < 1) throw PreconditionError("sample_every must be >= 1");
    const auto& cfg = sys.config();
    const long steps = step_count(cfg);

    Trajectory traj;
    SolverState state;
    state.c = c0;
    traj.samples.push_back({state, make_record(state, cfg)});

    for (long n = 1; n <= steps; ++n) {
        try {
            StepStats stats;
            try {
                state = sys.step(state, cfg.dt, &stats);
                traj.picard_sweeps += stats.picard_iterations;
            } catch (const StepRejected&) {
                ++traj.halved_steps;
                const SolverState half = advance(sys, state, 0.5 * cfg.dt, 1, traj);
                state = advance(sys, half, 0.5 * cfg.dt, 1, traj);
            }
        } catch (const Error& e) {
            traj.complete = false;
            traj.failure = "step " + std::to_string(n) + ": " + e.what();
            break;
        }
        state.t = double(n) * cfg.dt;
        if (n % sample_every == 0 || n == steps) traj.samples.push_back({state, make_record(state, cfg)});
    }
    return traj;
}

Trajectory integrate(const GridField& u0, const SolverConfig& cfg, int sample_every) {
    GalerkinSystem sys(cfg);
    return integrate(sys, project_initial(u0, sys.basis()), sample_every);
}

}  // namespace vch
