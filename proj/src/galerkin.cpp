#include "vch/galerkin.hpp"

#include "vch/error.hpp"

#include <cmath>
#include <string>

namespace vch {

namespace {

void require_finite(std::span<const double> values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) throw NumericalBlowUp(std::string("non-finite values in ") + what);
    }
}

bool all_finite(const SpectralField& f) {
    for (const auto& c : f.coeffs()) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    }
    return true;
}

// Pointwise-divided copy: out_k = f_k / p_k.
SpectralField divide(const SpectralField& f, const std::vector<double>& p) {
    SpectralField out(f);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] /= p[i];
    return out;
}

}  // namespace

void validate(const SolverConfig& cfg) {
    if (!(cfg.kappa > 0.0)) throw PreconditionError("kappa must be positive");
    if (!(cfg.alpha >= 0.0)) throw PreconditionError("alpha must be non-negative");
    if (!(cfg.dt > 0.0)) throw PreconditionError("dt must be positive");
    if (!(cfg.t_end >= 0.0)) throw PreconditionError("t_end must be non-negative");
    if (!(cfg.cg_tol > 0.0)) throw PreconditionError("cg_tol must be positive");
    if (!(cfg.picard_tol > 0.0)) throw PreconditionError("picard_tol must be positive");
    if (cfg.cg_max_iter < 1 || cfg.picard_max < 1) throw PreconditionError("iteration caps must be >= 1");
    if (cfg.dealias && cfg.padding < 1.5) throw PreconditionError("dealiasing needs padding >= 1.5");
    if (cfg.physics.potential.kind == PotentialKind::quartic) validate(cfg.physics.potential.well);
    validate(cfg.physics.mobility);
}

BasisSpec basis_spec(const SolverConfig& cfg) {
    return make_basis_spec(cfg.dim, cfg.modes, cfg.dealias ? cfg.padding : 1.0);
}

GalerkinSystem::GalerkinSystem(const SolverConfig& cfg) : GalerkinSystem(cfg, Basis::create(basis_spec(cfg))) {}

GalerkinSystem::GalerkinSystem(const SolverConfig& cfg, BasisPtr basis) : cfg_(cfg), basis_(std::move(basis)) {
    validate(cfg_);
    if (basis_->dim() != cfg_.dim || basis_->modes() != cfg_.modes) {
        throw PreconditionError("basis does not match solver configuration");
    }
}

GridField GalerkinSystem::field_on_grid(const SpectralField& c) const {
    GridField u = to_grid(c);
    require_finite(u.values(), "u");
    return u;
}

GridField GalerkinSystem::mobility_on_grid(const SpectralField& c) const {
    GridField m = field_on_grid(c);
    for (auto& v : m.values()) v = mobility_eval(cfg_.physics.mobility, v);
    return m;
}

SpectralField GalerkinSystem::apply_stiffness(const SpectralField& d, const GridField& mobility) const {
    auto flux = gradient(d);
    for (auto& component : flux) {
        GridField g = to_grid(component);
        for (std::size_t m = 0; m < g.size(); ++m) g[m] *= mobility[m];
        require_finite(g.values(), "mobility flux");
        component = to_spectral(g);
        if (cfg_.dealias) component = dealias(component);
    }
    SpectralField out = divergence(flux);
    out *= -1.0;
    out[0] = 0.0;
    return out;
}

SpectralField GalerkinSystem::apply_mobility_stiffness(const SpectralField& d, const SpectralField& c) const {
    return apply_stiffness(d, mobility_on_grid(c));
}

SpectralField GalerkinSystem::potential_coefficients(const SpectralField& c) const {
    if (cfg_.physics.potential.kind == PotentialKind::zero) return SpectralField(basis_);
    GridField g = field_on_grid(c);
    for (auto& v : g.values()) v = w_prime(cfg_.physics.potential, v);
    require_finite(g.values(), "W'(u)");
    SpectralField w = to_spectral(g);
    return cfg_.dealias ? dealias(w) : w;
}

MuCoefficients GalerkinSystem::mu_coefficients(const SpectralField& c, const SpectralField& c_dot) const {
    SpectralField d = potential_coefficients(c);
    for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] += cfg_.kappa * basis_->eigenvalue(i) * c[i] + cfg_.alpha * c_dot[i];
    }
    return {std::move(d)};
}

SpectralField GalerkinSystem::rhs_solve(const SpectralField& c, const SpectralField* guess, CgStats* stats) const {
    const GridField mobility = mobility_on_grid(c);

    SpectralField g = potential_coefficients(c);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += cfg_.kappa * basis_->eigenvalue(i) * c[i];
    SpectralField b = apply_stiffness(g, mobility);
    b *= -1.0;

    const double alpha = cfg_.alpha;
    auto apply = [&](const SpectralField& x) {
        SpectralField y = apply_stiffness(x, mobility);
        y *= alpha;
        y += x;
        return y;
    };

    double mean_mobility = 0.0;
    for (double v : mobility.values()) mean_mobility += v;
    mean_mobility /= double(mobility.size());
    std::vector<double> precond(basis_->spectral_size());
    for (std::size_t i = 0; i < precond.size(); ++i) precond[i] = 1.0 + alpha * mean_mobility * basis_->eigenvalue(i);

    const double b_norm = norm_l2(b);
    if (stats) *stats = {};
    if (b_norm == 0.0) return SpectralField(basis_);

    SpectralField x = guess ? *guess : divide(b, precond);
    SpectralField r = b - apply(x);
    SpectralField z = divide(r, precond);
    SpectralField p = z;
    double rz = inner(r, z);
    double r_norm = norm_l2(r);
    int it = 0;
    for (; it < cfg_.cg_max_iter && r_norm > cfg_.cg_tol * b_norm; ++it) {
        const SpectralField q = apply(p);
        const double pq = inner(p, q);
        if (!(pq > 0.0)) break;
        const double step = rz / pq;
        x.add_scaled(step, p);
        r.add_scaled(-step, q);
        z = divide(r, precond);
        const double rz_next = inner(r, z);
        p *= rz_next / rz;
        p += z;
        rz = rz_next;
        r_norm = norm_l2(r);
    }
    if (!std::isfinite(r_norm)) throw NumericalBlowUp("non-finite residual in conjugate gradients");
    if (stats) *stats = {it, r_norm / b_norm};
    if (r_norm > cfg_.cg_tol * b_norm) {
        throw LinearSolveError("conjugate gradients did not converge (relative residual " +
                                   std::to_string(r_norm / b_norm) + " after " + std::to_string(it) +
                                   " iterations)",
                               r_norm, it);
    }
    x[0] = 0.0;
    return x;
}

double GalerkinSystem::mobility_dissipation_rate(const SpectralField& c, const SpectralField& d) const {
    const GridField mobility = mobility_on_grid(c);
    std::vector<double> grad_sq(mobility.size(), 0.0);
    for (const auto& component : gradient(d)) {
        const GridField g = to_grid(component);
        for (std::size_t m = 0; m < g.size(); ++m) grad_sq[m] += g[m] * g[m];
    }
    double s = 0.0;
    for (std::size_t m = 0; m < grad_sq.size(); ++m) s += mobility[m] * grad_sq[m];
    return s * basis_->cell_volume();
}

SolverState GalerkinSystem::step(const SolverState& state, double dt, StepStats* stats) const {
    const SpectralField& c = state.c;
    const double scale = 1.0 + norm_l2(c);

    SpectralField next = c;
    SpectralField mid = c;
    SpectralField c_dot;
    bool converged = false;
    double first_delta = -1.0;
    int sweeps = 0;
    int cg_total = 0;
    try {
        for (sweeps = 1; sweeps <= cfg_.picard_max; ++sweeps) {
            mid = c;
            mid += next;
            mid *= 0.5;
            CgStats cg;
            c_dot = rhs_solve(mid, c_dot.basis() ? &c_dot : nullptr, &cg);
            cg_total += cg.iterations;
            SpectralField candidate = c;
            candidate.add_scaled(dt, c_dot);
            const double delta = norm_l2(candidate - next);
            next = std::move(candidate);
            if (!std::isfinite(delta)) break;
            if (delta <= cfg_.picard_tol * scale) {
                converged = true;
                break;
            }
            if (first_delta < 0.0) first_delta = delta;
            if (sweeps > 3 && delta > 1e3 * first_delta) break;
        }
    } catch (const NumericalBlowUp& e) {
        throw StepRejected(std::string("Picard iterate blew up: ") + e.what());
    }
    if (!converged) {
        throw StepRejected("Picard iteration did not converge at t = " + std::to_string(state.t) +
                           ", dt = " + std::to_string(dt));
    }
    if (!all_finite(next)) throw NumericalBlowUp("non-finite coefficients after step");
    {
        const GridField u = field_on_grid(next);
        for (double v : u.values()) {
            if (std::abs(v) > cfg_.blowup_threshold) {
                throw NumericalBlowUp("field magnitude exceeded " + std::to_string(cfg_.blowup_threshold));
            }
        }
    }

    // Mobility dissipation is int M |grad mu|^2 with the full chemical potential,
    // including the viscous part alpha * c_dot of mu.
    const MuCoefficients mu = mu_coefficients(mid, c_dot);
    SolverState out;
    out.t = state.t + dt;
    out.c = std::move(next);
    out.visc_dissipation = state.visc_dissipation + dt * cfg_.alpha * inner(c_dot, c_dot);
    out.mob_dissipation = state.mob_dissipation + dt * mobility_dissipation_rate(mid, mu.d);
    if (stats) *stats = {sweeps, cg_total};
    return out;
}

}  // namespace vch
