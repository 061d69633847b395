#include "vch/diagnostics.hpp"

#include "vch/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

namespace vch {

double mass(const SpectralField& c) {
    return std::pow(kTwoPi, 0.5 * c.basis()->dim()) * c[0].real();
}

double energy(const SpectralField& c, const GridField& u, const SolverConfig& cfg) {
    const auto& b = *c.basis();
    double gradient_part = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) gradient_part += b.multiplicity(i) * b.eigenvalue(i) * std::norm(c[i]);
    double well = 0.0;
    if (cfg.physics.potential.kind != PotentialKind::zero) {
        for (double v : u.values()) well += w_eval(cfg.physics.potential, v);
        well *= u.basis()->cell_volume();
    }
    return 0.5 * cfg.kappa * gradient_part + well;
}

double energy(const SpectralField& c, const SolverConfig& cfg) { return energy(c, to_grid(c), cfg); }

double entropy_total(const GridField& u, double theta) {
    if (theta > 0.0) return entropy_total(EntropySpec{theta}, u);
    double s = 0.0;
    for (double v : u.values()) {
        if (v < 0.0) return std::numeric_limits<double>::infinity();
        s += v > 0.0 ? entropy_phi(v) : 1.0;
    }
    return s * u.basis()->cell_volume();
}

double entropy_total(const SpectralField& c, double theta) { return entropy_total(to_grid(c), theta); }

double negativity(const GridField& u, double theta) {
    double s = 0.0;
    for (double v : u.values()) {
        const double q = std::min(v, 0.0) + theta;
        s += q * q;
    }
    return s * u.basis()->cell_volume();
}

double negativity(const SpectralField& c, double theta) { return negativity(to_grid(c), theta); }

double diagnostic_theta(const MobilitySpec& m) {
    return m.kind == MobilityKind::degenerate ? 0.0 : m.theta;
}

DiagnosticsRecord make_record(const SolverState& state, const SolverConfig& cfg) {
    const GridField u = to_grid(state.c);
    const double theta = diagnostic_theta(cfg.physics.mobility);
    DiagnosticsRecord rec;
    rec.t = state.t;
    rec.mass = mass(state.c);
    rec.energy = energy(state.c, u, cfg);
    rec.entropy = entropy_total(u, theta);
    rec.negativity = negativity(u, theta);
    rec.visc_dissipation = state.visc_dissipation;
    rec.mob_dissipation = state.mob_dissipation;
    const auto [lo, hi] = std::minmax_element(u.values().begin(), u.values().end());
    rec.min_u = *lo;
    rec.max_u = *hi;
    return rec;
}

double energy_budget_residual(const DiagnosticsRecord& rec1, const DiagnosticsRecord& rec2) {
    if (rec2.t < rec1.t) throw PreconditionError("energy budget needs rec1.t <= rec2.t");
    if (rec2.visc_dissipation < rec1.visc_dissipation || rec2.mob_dissipation < rec1.mob_dissipation) {
        throw PreconditionError("records do not come from one trajectory (dissipation decreased)");
    }
    const double before = rec1.energy + rec1.visc_dissipation + rec1.mob_dissipation;
    const double after = rec2.energy + rec2.visc_dissipation + rec2.mob_dissipation;
    return after - before;
}

std::string csv_header() {
    std::string s;
    for (std::size_t i = 0; i < kRecordColumns.size(); ++i) {
        if (i) s += ',';
        s += kRecordColumns[i];
    }
    return s;
}

std::string csv_row(const DiagnosticsRecord& r) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", r.t, r.mass, r.energy,
                  r.entropy, r.negativity, r.visc_dissipation, r.mob_dissipation, r.min_u, r.max_u);
    return buf;
}

DiagnosticsRecord parse_csv_row(std::string_view line) {
    std::vector<double> v;
    std::size_t start = 0;
    while (start <= line.size()) {
        const auto end = std::min(line.find(',', start), line.size());
        const std::string cell(line.substr(start, end - start));
        char* tail = nullptr;
        const double x = std::strtod(cell.c_str(), &tail);
        if (cell.empty() || tail != cell.c_str() + cell.size()) {
            throw FormatError("bad numeric cell '" + cell + "' in diagnostics row");
        }
        v.push_back(x);
        start = end + 1;
    }
    if (v.size() != kRecordColumns.size()) {
        throw FormatError("diagnostics row has " + std::to_string(v.size()) + " columns, expected " +
                          std::to_string(kRecordColumns.size()));
    }
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]};
}

}  // namespace vch
