#ifndef VCH_CONFIG_HPP
#define VCH_CONFIG_HPP

// On-disk run configuration: INI sections of key = value pairs.
//
//   [physics] potential, gamma, u_minus, u_plus, mobility, theta, kappa, alpha
//   [basis]   dim, modes, dealias, padding
//   [time]    dt, t_end, samples
//   [solver]  cg_tol, cg_max_iter, picard_tol, picard_max, blowup_threshold
//   [initial] u0 | snapshot, noise, noise_modes, seed
//   [sweep]   thetas, modes, include_degenerate, eps_neg, nonzero_fraction
//   [output]  dir, snapshot_every_sample
//
// Unknown sections or keys, duplicates and malformed values are errors.
// Comments start with ';' or '#' at the beginning of a line or after a value.

#include "vch/experiments.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace vch {

struct InitialSpec {
    std::string expression;          ///< u0(x, y); empty when a snapshot is given
    std::filesystem::path snapshot;  ///< alternative to the expression
    double noise = 0.0;              ///< amplitude of seeded band-limited noise added to u0
    int noise_modes = 4;             ///< noise occupies |k_i| <= noise_modes
    std::uint64_t seed = 0;
};

struct RunConfig {
    SolverConfig solver;
    InitialSpec initial;
    int samples = 100;
    std::vector<double> theta_list{0.1, 0.05, 0.025, 0.0125};
    std::vector<int> n_list{16, 32, 64};
    bool include_degenerate = true;
    double eps_neg = 1e-3;
    double nonzero_fraction = 0.5;
    std::filesystem::path output_dir = "vch_out";
    bool snapshot_every_sample = false;
};

/// Parses and validates a config file. Each override has the form
/// "section.key=value" and replaces (or adds) that key before validation.
/// Throws ConfigError naming the file, line or key.
RunConfig parse_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});
RunConfig parse_config_text(std::string_view text, const std::vector<std::string>& overrides = {},
                            const std::string& origin = "<config>");

/// Initial data sampler: expression (or snapshot resampled to the target
/// basis) plus the seeded noise term.
InitialData make_initial_data(const InitialSpec& spec);
std::string describe(const InitialSpec& spec);

SweepPlan make_plan(const RunConfig& cfg);

}  // namespace vch

#endif  // VCH_CONFIG_HPP
