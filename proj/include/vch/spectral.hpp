#ifndef VCH_SPECTRAL_HPP
#define VCH_SPECTRAL_HPP

// Fourier basis on the periodic box (0, 2*pi)^n, n = 1 or 2.
//
// A real field is expanded as u(x) = sum_k c_k phi_k(x) with the orthonormal
// eigenfunctions phi_k(x) = (2*pi)^(-n/2) exp(i k.x) of -Laplacian, so that
// c_k = (2*pi)^(-n/2) * integral of u exp(-i k.x) and sum |c_k|^2 = ||u||^2.
//
// Coefficients are stored as a Hermitian half spectrum (last axis k >= 0):
//   n = 1:  index k,                        0 <= k < N/2
//   n = 2:  index ix * (N/2) + ky,          0 <= ix < N, 0 <= ky < N/2
//           with kx = ix for ix < N/2 and kx = ix - N otherwise.
// The Nyquist row kx = -N/2 has no conjugate partner inside the mode set and
// is held at zero. On the ky = 0 row, c(-kx, 0) = conj(c(kx, 0)).

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace vch {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

struct BasisSpec {
    int dim = 1;          ///< spatial dimension, 1 or 2
    int modes = 16;       ///< truncation count per axis, even, >= 4
    int grid_points = 24; ///< collocation points per axis, >= modes
};

/// Smallest even size >= n whose only prime factors are 2, 3 and 5.
int transform_friendly_size(int n);

/// Basis with grid_points = transform_friendly_size(ceil(padding * modes)).
/// padding = 1 disables the zero-padded product grid.
BasisSpec make_basis_spec(int dim, int modes, double padding = 1.5);

/// Immutable mode bookkeeping plus FFTW plans for one BasisSpec. Shared by all
/// fields on that basis; const member functions are safe to call concurrently.
class Basis {
public:
    static std::shared_ptr<const Basis> create(const BasisSpec& spec);
    static std::shared_ptr<const Basis> create(int dim, int modes, double padding = 1.5);

    ~Basis();
    Basis(const Basis&) = delete;
    Basis& operator=(const Basis&) = delete;

    const BasisSpec& spec() const { return spec_; }
    int dim() const { return spec_.dim; }
    int modes() const { return spec_.modes; }
    int grid_points() const { return spec_.grid_points; }

    std::size_t spectral_size() const { return kx_.size(); }
    std::size_t grid_size() const { return grid_size_; }

    /// Signed wavenumbers of storage slot idx; ky is 0 in 1D.
    int kx(std::size_t idx) const { return kx_[idx]; }
    int ky(std::size_t idx) const { return ky_[idx]; }
    /// Eigenvalue |k|^2 of -Laplacian.
    double eigenvalue(std::size_t idx) const { return lambda_[idx]; }
    /// Number of full-spectrum modes represented by slot idx (2 for a
    /// conjugate pair, 1 on the ky = 0 line, 0 for the Nyquist row).
    double multiplicity(std::size_t idx) const { return weight_[idx]; }
    /// Storage slot for a signed mode, if it is inside the half spectrum.
    std::optional<std::size_t> index_of(int kx, int ky = 0) const;

    /// Quadrature weight h^n of one collocation point.
    double cell_volume() const { return cell_volume_; }
    /// Coordinates of grid point m (second entry 0 in 1D).
    std::array<double, 2> grid_point(std::size_t m) const;

    bool same_as(const Basis& other) const;

    // Raw transforms; the coefficient span uses the half-spectrum layout above.
    void to_grid(std::span<const Complex> coeffs, std::span<double> values) const;
    void to_spectral(std::span<const double> values, std::span<Complex> coeffs) const;

private:
    explicit Basis(const BasisSpec& spec);

    BasisSpec spec_;
    std::size_t grid_size_ = 0;
    std::size_t grid_half_size_ = 0;
    double cell_volume_ = 0.0;
    std::vector<int> kx_;
    std::vector<int> ky_;
    std::vector<double> lambda_;
    std::vector<double> weight_;
    std::vector<std::size_t> grid_slot_;
    void* forward_plan_ = nullptr;
    void* inverse_plan_ = nullptr;
};

using BasisPtr = std::shared_ptr<const Basis>;

class GridField;

/// Galerkin coefficients of a real periodic field.
class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(BasisPtr basis);
    SpectralField(BasisPtr basis, std::vector<Complex> coeffs);

    const BasisPtr& basis() const { return basis_; }
    std::span<Complex> coeffs() { return coeffs_; }
    std::span<const Complex> coeffs() const { return coeffs_; }
    Complex& operator[](std::size_t i) { return coeffs_[i]; }
    const Complex& operator[](std::size_t i) const { return coeffs_[i]; }
    std::size_t size() const { return coeffs_.size(); }

    /// Coefficient of signed mode (kx, ky), resolving the conjugate half.
    Complex mode(int kx, int ky = 0) const;
    /// Sets the signed mode and its conjugate partner.
    void set_mode(int kx, int ky, Complex value);

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(double s);
    /// this += s * other
    SpectralField& add_scaled(double s, const SpectralField& other);

private:
    BasisPtr basis_;
    std::vector<Complex> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Real field values on the uniform collocation grid, row-major in 2D.
class GridField {
public:
    GridField() = default;
    explicit GridField(BasisPtr basis);
    GridField(BasisPtr basis, std::vector<double> values);

    const BasisPtr& basis() const { return basis_; }
    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

private:
    BasisPtr basis_;
    std::vector<double> values_;
};

GridField to_grid(const SpectralField& f);
SpectralField to_spectral(const GridField& g);

SpectralField laplacian(const SpectralField& f);
std::vector<SpectralField> gradient(const SpectralField& f);
SpectralField divergence(std::span<const SpectralField> v);

/// Zeroes every mode with |k_a| >= grid_points / 3 on some axis.
SpectralField dealias(const SpectralField& f);

/// Galerkin projection of sampled initial data: coefficient k is the
/// trapezoidal quadrature of the integral of u0 * conj(phi_k). u0 must be
/// sampled on a grid with the same dimension and grid_points as basis.
SpectralField project_initial(const GridField& u0, const BasisPtr& basis);

/// Restricts or zero-pads f onto another basis of the same dimension.
SpectralField resample(const SpectralField& f, const BasisPtr& target);

/// Enforces Hermitian symmetry in place and clears the Nyquist row.
void hermitian_project(SpectralField& f);
/// Largest violation of Hermitian symmetry (including Nyquist residue).
double hermitian_defect(const SpectralField& f);

/// Real L^2(Omega) inner product of the represented fields.
double inner(const SpectralField& a, const SpectralField& b);
double norm_l2(const SpectralField& f);

/// Quadrature of a grid field over Omega.
double integrate(const GridField& g);

/// Samples fn(x, y) on the collocation grid (y = 0 in 1D).
template <class Fn>
GridField sample(const BasisPtr& basis, Fn&& fn) {
    GridField g(basis);
    for (std::size_t m = 0; m < g.size(); ++m) {
        const auto p = basis->grid_point(m);
        g[m] = fn(p[0], p[1]);
    }
    return g;
}

}  // namespace vch

#endif  // VCH_SPECTRAL_HPP
