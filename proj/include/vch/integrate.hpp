#ifndef VCH_INTEGRATE_HPP
#define VCH_INTEGRATE_HPP

#include "vch/diagnostics.hpp"
#include "vch/galerkin.hpp"

#include <string>
#include <vector>

namespace vch {

struct Sample {
    SolverState state;
    DiagnosticsRecord record;
};

struct Trajectory {
    std::vector<Sample> samples;
    bool complete = true;
    std::string failure;     ///< reason when incomplete
    int halved_steps = 0;    ///< nominal steps that needed dt subdivision
    long picard_sweeps = 0;
};

inline constexpr int kMaxHalvings = 20;

/// Projects u0 onto the Galerkin basis and advances to cfg.t_end with
/// nominal step cfg.dt. Samples are taken at t = 0, every sample_every steps
/// and at t_end. A rejected step is split in two halves, recursively, at most
/// kMaxHalvings levels deep; an unrecoverable failure returns the partial
/// trajectory with complete = false.
Trajectory integrate(const GridField& u0, const SolverConfig& cfg, int sample_every);
Trajectory integrate(const GalerkinSystem& system, const SpectralField& c0, int sample_every);

/// Number of nominal steps; throws PreconditionError unless t_end is a multiple of dt.
long step_count(const SolverConfig& cfg);

}  // namespace vch

#endif  // VCH_INTEGRATE_HPP
