#ifndef VCH_DIAGNOSTICS_HPP
#define VCH_DIAGNOSTICS_HPP

#include "vch/galerkin.hpp"

#include <array>
#include <string>
#include <string_view>

namespace vch {

/// One time sample of the scalar functionals tracked along a trajectory.
/// CSV column order is the field order below and never changes.
struct DiagnosticsRecord {
    double t = 0.0;
    double mass = 0.0;
    double energy = 0.0;
    double entropy = 0.0;
    double negativity = 0.0;
    double visc_dissipation = 0.0;
    double mob_dissipation = 0.0;
    double min_u = 0.0;
    double max_u = 0.0;
};

inline constexpr std::array<std::string_view, 9> kRecordColumns{
    "t", "mass", "energy", "entropy", "negativity", "visc_dissipation", "mob_dissipation", "min_u", "max_u"};

/// Integral of u over the box: (2 pi)^(n/2) times the constant-mode coefficient.
double mass(const SpectralField& c);

/// kappa/2 sum lambda_k |c_k|^2 plus the product-grid quadrature of W(u).
double energy(const SpectralField& c, const SolverConfig& cfg);
double energy(const SpectralField& c, const GridField& u, const SolverConfig& cfg);

/// Grid quadrature of Phi_theta(u). theta = 0 selects the unregularized Phi,
/// which is +infinity if u < 0 anywhere (Phi(0) = 1 by continuity).
double entropy_total(const SpectralField& c, double theta);
double entropy_total(const GridField& u, double theta);

/// Grid quadrature of |min(u, 0) + theta|^2.
double negativity(const SpectralField& c, double theta);
double negativity(const GridField& u, double theta);

/// Cutoff level entering entropy and negativity for a mobility: theta for
/// the cutoff and constant kinds, 0 for the degenerate kind.
double diagnostic_theta(const MobilitySpec& m);

DiagnosticsRecord make_record(const SolverState& state, const SolverConfig& cfg);

/// [E + visc + mob](rec2) - [E + visc + mob](rec1). Should be <= 0 up to
/// time-discretization error. Requires rec1.t <= rec2.t.
double energy_budget_residual(const DiagnosticsRecord& rec1, const DiagnosticsRecord& rec2);

std::string csv_header();
std::string csv_row(const DiagnosticsRecord& rec);
/// Inverse of csv_row; throws FormatError.
DiagnosticsRecord parse_csv_row(std::string_view line);

}  // namespace vch

#endif  // VCH_DIAGNOSTICS_HPP
