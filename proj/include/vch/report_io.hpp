#ifndef VCH_REPORT_IO_HPP
#define VCH_REPORT_IO_HPP

// Sweep report directory:
//
//   summary.csv               "# key = value" metadata lines, then one row per run
//   run_<label>.csv           diagnostics time series (csv_header columns)
//   run_<label>_initial.vchf  projected initial condition
//   run_<label>_final.vchf    last sampled state
//   verdict.txt               human-readable verdict
//
// Summary columns: label,mobility,theta,modes,complete,negativity_max,bound_shape,failure

#include "vch/experiments.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace vch {

std::string mobility_name(MobilityKind kind);
std::string sweep_kind_name(SweepKind kind);

void write_trajectory_csv(const std::vector<DiagnosticsRecord>& records, const std::filesystem::path& path);
std::vector<DiagnosticsRecord> read_trajectory_csv(const std::filesystem::path& path);

void write_report(const SweepReport& report, const std::filesystem::path& dir);
/// Reloads a report; run states are not stored, so gaps come from summary.csv.
SweepReport read_report(const std::filesystem::path& dir);

void write_text(const std::string& text, const std::filesystem::path& path);

}  // namespace vch

#endif  // VCH_REPORT_IO_HPP
