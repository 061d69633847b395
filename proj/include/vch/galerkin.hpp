#ifndef VCH_GALERKIN_HPP
#define VCH_GALERKIN_HPP

// Galerkin dynamics of the viscous Cahn-Hilliard system
//
//   c'  = -A(c) d,           A(c)_jk = integral of M(u) grad phi_k . grad phi_j
//   d   = kappa Lambda c + w(c) + alpha c',   w(c)_j = <W'(u), phi_j>
//
// The viscous coupling is eliminated exactly, leaving the SPD system
//
//   (I + alpha A(c)) c' = -A(c) (kappa Lambda c + w(c)),
//
// which is solved matrix-free by preconditioned conjugate gradients. Time
// stepping is the implicit midpoint rule with a Picard fixed-point iteration.

#include "vch/physics.hpp"
#include "vch/spectral.hpp"

namespace vch {

struct SolverConfig {
    double kappa = 1.0;
    double alpha = 1.0;
    PhysicsSpec physics;
    int dim = 1;
    int modes = 64;
    bool dealias = true;
    double padding = 1.5;  ///< product-grid factor when dealias is on (1.5 or 2)
    double dt = 1e-3;
    double t_end = 1.0;
    double cg_tol = 1e-12;
    int cg_max_iter = 500;
    double picard_tol = 1e-12;
    int picard_max = 100;
    double blowup_threshold = 1e8;  ///< max |u| on the grid before a state counts as blown up
};

void validate(const SolverConfig& cfg);
BasisSpec basis_spec(const SolverConfig& cfg);

struct SolverState {
    double t = 0.0;
    SpectralField c;
    double visc_dissipation = 0.0;  ///< alpha * int_0^t ||u_t||^2
    double mob_dissipation = 0.0;   ///< int_0^t int M(u) |grad mu|^2
};

struct MuCoefficients {
    SpectralField d;
};

struct CgStats {
    int iterations = 0;
    double relative_residual = 0.0;
};

struct StepStats {
    int picard_iterations = 0;
    int cg_iterations = 0;
};

class GalerkinSystem {
public:
    explicit GalerkinSystem(const SolverConfig& cfg);
    GalerkinSystem(const SolverConfig& cfg, BasisPtr basis);

    const SolverConfig& config() const { return cfg_; }
    const BasisPtr& basis() const { return basis_; }

    /// u^N on the product grid; throws NumericalBlowUp on non-finite values.
    GridField field_on_grid(const SpectralField& c) const;
    /// M(u^N) on the product grid.
    GridField mobility_on_grid(const SpectralField& c) const;

    /// A(c) d, computed as -P div(M(u) grad d).
    SpectralField apply_mobility_stiffness(const SpectralField& d, const SpectralField& c) const;
    SpectralField apply_stiffness(const SpectralField& d, const GridField& mobility) const;

    /// w(c)_j = <W'(u^N), phi_j>, pseudo-spectrally on the product grid.
    SpectralField potential_coefficients(const SpectralField& c) const;

    MuCoefficients mu_coefficients(const SpectralField& c, const SpectralField& c_dot) const;

    /// c' at state c. An optional guess warm-starts conjugate gradients.
    SpectralField rhs_solve(const SpectralField& c, const SpectralField* guess = nullptr,
                            CgStats* stats = nullptr) const;

    /// int M(u) |grad mu|^2 for mu = sum d_j phi_j, by grid quadrature.
    double mobility_dissipation_rate(const SpectralField& c, const SpectralField& d) const;

    /// One implicit midpoint step of size dt. Throws StepRejected when the
    /// Picard iteration fails and NumericalBlowUp when the new state is not finite.
    SolverState step(const SolverState& state, double dt, StepStats* stats = nullptr) const;
    SolverState step(const SolverState& state) const { return step(state, cfg_.dt); }

private:
    SolverConfig cfg_;
    BasisPtr basis_;
};

}  // namespace vch

#endif  // VCH_GALERKIN_HPP
