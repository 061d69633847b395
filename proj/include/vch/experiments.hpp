#ifndef VCH_EXPERIMENTS_HPP
#define VCH_EXPERIMENTS_HPP

// Limit experiments: the theta -> 0 regularization sweep, Galerkin refinement
// in N, and the nonnegativity / inequality verdicts computed from them.

#include "vch/integrate.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace vch {

/// Samples the initial condition on the collocation grid of a basis.
using InitialData = std::function<GridField(const BasisPtr&)>;

struct SweepPlan {
    SolverConfig base;
    std::vector<double> theta_list;  ///< strictly decreasing, inside (0, 1)
    std::vector<int> n_list;         ///< non-decreasing mode counts
    InitialData u0;
    std::string u0_description;
    int samples = 100;               ///< samples per run (excluding t = 0)
    bool include_degenerate = true;  ///< append a degenerate-mobility reference run to theta sweeps
    double eps_neg = 1e-3;           ///< allowed undershoot of min u for the finest theta
    double nonzero_fraction = 0.5;   ///< ||u(T)|| must exceed this fraction of ||u0||
    int threads = 0;                 ///< 0: VCH_THREADS or hardware concurrency
};

void validate(const SweepPlan& plan);

enum class SweepKind { theta, refinement };

struct RunResult {
    std::string label;
    MobilitySpec mobility;
    int modes = 0;
    bool complete = true;
    std::string failure;
    std::vector<DiagnosticsRecord> records;
    /// Coefficients at every record time; empty when loaded from disk.
    std::vector<SpectralField> states;
    SpectralField initial;
    SpectralField final_state;
};

struct SweepReport {
    SweepKind kind = SweepKind::theta;
    std::string u0_description;
    std::vector<RunResult> runs;  ///< primary runs in plan order, then the degenerate reference
    /// C([0,T]; L^2) distance between consecutive primary runs.
    std::vector<double> gaps;
    /// Distance between the finest-theta run and the degenerate reference.
    std::optional<double> degenerate_gap;
    std::vector<double> negativity_max;  ///< per primary run, max over samples
    std::vector<double> negativity_bound_shape;  ///< theta^2 + theta + theta^(1/2)
    double c_fit = 0.0;                  ///< negativity ratio calibrated on the first (largest) theta
    double min_u0 = 0.0;                 ///< min of the sampled initial data
    double entropy_u0 = 0.0;             ///< integral of Phi(u^N(0)); NaN unless u0 > 0
    double entropy_k = 0.0;              ///< K in entropy <= entropy_u0 + K theta^(-1/2)
    double eps_neg = 1e-3;
    double nonzero_fraction = 0.5;

    bool complete() const;
    /// Number of leading runs that are part of the sweep proper (excludes the degenerate reference).
    std::size_t primary_count() const;
};

/// Runs integrate for every theta at the base mode count.
SweepReport theta_sweep(const SweepPlan& plan);
/// Runs integrate for every mode count at the base mobility.
SweepReport n_refinement(const SweepPlan& plan);

/// max over shared sample times of the L^2 distance, the coarser run zero-padded.
double trajectory_gap(const RunResult& a, const RunResult& b);

/// theta^2 + theta + sqrt(theta)
double negativity_bound_shape(double theta);

/// Recomputes the negativity fit and entropy constant from run records.
void fit_constants(SweepReport& report);

struct VerdictClause {
    std::string name;
    bool holds = true;
    std::string detail;
};

struct Verdict {
    bool holds = true;
    std::vector<VerdictClause> clauses;

    void add(VerdictClause clause);
    std::string text() const;
};

/// Nonnegativity verdict for a theta sweep with positive initial data:
///  (a) max_t negativity(theta) <= c_fit (theta^2 + theta + theta^(1/2)) for every theta,
///  (b) min u of the finest-theta run >= -eps_neg,
///  (c) ||u(T)|| >= nonzero_fraction * ||u0|| for the finest-theta run.
/// Throws PreconditionError unless min u0 > 0.
Verdict nonnegativity_report(const SweepReport& report);

struct InequalityTolerances {
    double mass_rel = 1e-10;
    double mass_abs = 1e-12;
    double energy_budget = 1e-6;
    double energy_monotone = 1e-8;
};

/// Per-run mass conservation, energy inequality, energy monotonicity and
/// (for cutoff runs with positive data) the entropy bound.
Verdict inequality_report(const SweepReport& report, const InequalityTolerances& tol = {});

/// Refinement verdict: every gap is smaller than the previous one, unless it
/// is already at roundoff level (floor_rel times ||u0||).
Verdict refinement_report(const SweepReport& report, double floor_rel = 1e-9);

/// Worker count: explicit request, else VCH_THREADS, else hardware concurrency.
int resolve_thread_count(int requested);

}  // namespace vch

#endif  // VCH_EXPERIMENTS_HPP
