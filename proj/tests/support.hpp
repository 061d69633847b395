#ifndef VCH_TESTS_SUPPORT_HPP
#define VCH_TESTS_SUPPORT_HPP

// Independent reference computations shared by the unit and acceptance tests.
// Nothing here goes through the FFT-based code paths.

#include "vch/galerkin.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace vch::testing {

struct Mode {
    int kx;
    int ky;
};

/// Every mode of the truncated full spectrum except the Nyquist rows.
inline std::vector<Mode> full_modes(const Basis& b) {
    std::vector<Mode> out;
    const int half = b.modes() / 2;
    if (b.dim() == 1) {
        for (int k = -half + 1; k < half; ++k) out.push_back({k, 0});
    } else {
        for (int kx = -half + 1; kx < half; ++kx) {
            for (int ky = -half + 1; ky < half; ++ky) out.push_back({kx, ky});
        }
    }
    return out;
}

/// phi_k at a point, by direct evaluation.
inline Complex phi(const Basis& b, Mode k, double x, double y) {
    const double norm = std::pow(kTwoPi, -0.5 * b.dim());
    return norm * std::polar(1.0, k.kx * x + k.ky * y);
}

/// u(x) = sum_k c_k phi_k(x) by direct summation over the full spectrum.
inline double eval_direct(const SpectralField& c, double x, double y) {
    const Basis& b = *c.basis();
    Complex s = 0.0;
    for (Mode k : full_modes(b)) s += c.mode(k.kx, k.ky) * phi(b, k, x, y);
    return s.real();
}

/// Dense A(c) over the half-spectrum rows and full-spectrum columns:
///   A_jk = sum_m h^n M(u(x_m)) grad phi_k(x_m) . conj(grad phi_j(x_m))
/// assembled entry by entry on the collocation grid of the basis.
struct DenseStiffness {
    std::vector<Mode> cols;
    std::vector<std::vector<Complex>> rows;  ///< rows[j][k], j = storage slot

    SpectralField apply(const SpectralField& d) const {
        SpectralField out(d.basis());
        for (std::size_t j = 0; j < rows.size(); ++j) {
            Complex s = 0.0;
            for (std::size_t k = 0; k < cols.size(); ++k) s += rows[j][k] * d.mode(cols[k].kx, cols[k].ky);
            out[j] = s;
        }
        return out;
    }
};

inline DenseStiffness assemble_dense(const SpectralField& c, const MobilitySpec& mob) {
    const Basis& b = *c.basis();
    DenseStiffness A;
    A.cols = full_modes(b);
    std::vector<double> m_at(b.grid_size());
    std::vector<std::array<double, 2>> pts(b.grid_size());
    for (std::size_t m = 0; m < b.grid_size(); ++m) {
        pts[m] = b.grid_point(m);
        m_at[m] = mobility_eval(mob, eval_direct(c, pts[m][0], pts[m][1]));
    }
    const double h = b.cell_volume();
    A.rows.assign(b.spectral_size(), std::vector<Complex>(A.cols.size(), 0.0));
    for (std::size_t j = 0; j < b.spectral_size(); ++j) {
        const Mode mj{b.kx(j), b.ky(j)};
        if (b.multiplicity(j) == 0.0) continue;
        for (std::size_t k = 0; k < A.cols.size(); ++k) {
            const Mode mk = A.cols[k];
            const double dot = static_cast<double>(mk.kx * mj.kx + mk.ky * mj.ky);
            if (dot == 0.0) continue;
            Complex s = 0.0;
            for (std::size_t m = 0; m < b.grid_size(); ++m) {
                // grad phi_k . conj(grad phi_j) = (k . j) phi_k conj(phi_j)
                s += m_at[m] * phi(b, mk, pts[m][0], pts[m][1]) * std::conj(phi(b, mj, pts[m][0], pts[m][1]));
            }
            A.rows[j][k] = h * dot * s;
        }
    }
    return A;
}

/// Random real field with coefficients uniform in [-scale, scale], constant mode set to mean_coeff.
inline SpectralField random_field(const BasisPtr& basis, std::mt19937_64& rng, double scale, double mean_coeff = 0.0) {
    std::uniform_real_distribution<double> U(-scale, scale);
    SpectralField f(basis);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = Complex(U(rng), U(rng));
    f[0] = mean_coeff;
    hermitian_project(f);
    return f;
}

/// Random field whose grid values are all >= floor: a constant mode chosen so min u = floor.
inline SpectralField random_positive_field(const BasisPtr& basis, std::mt19937_64& rng, double scale, double floor) {
    SpectralField f = random_field(basis, rng, scale, 0.0);
    const GridField u = to_grid(f);
    double lo = u[0];
    for (double v : u.values()) lo = std::min(lo, v);
    f[0] = (floor - lo) * std::pow(kTwoPi, 0.5 * basis->dim());
    return f;
}

/// Test-mode decay rate of mode k: theta kappa lambda^2 / (1 + alpha theta lambda).
inline double linear_rate(double theta, double kappa, double alpha, double lambda) {
    return theta * kappa * lambda * lambda / (1.0 + alpha * theta * lambda);
}

/// Test-mode configuration: W = 0, M = theta.
inline SolverConfig linear_test_config(int dim, int modes, double theta, double kappa = 1.0, double alpha = 1.0) {
    SolverConfig cfg;
    cfg.dim = dim;
    cfg.modes = modes;
    cfg.kappa = kappa;
    cfg.alpha = alpha;
    cfg.physics.potential.kind = PotentialKind::zero;
    cfg.physics.mobility = {MobilityKind::constant, theta};
    return cfg;
}

}  // namespace vch::testing

#endif  // VCH_TESTS_SUPPORT_HPP
