#include "vch/spectral.hpp"

#include "vch/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

namespace vch {

namespace {

// FFTW planning is not thread safe; execution with the new-array API is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

int wrap(int k, int n) { return k >= 0 ? k : k + n; }

void require_same_basis(const SpectralField& a, const SpectralField& b) {
    if (!a.basis() || !b.basis() || !a.basis()->same_as(*b.basis())) {
        throw PreconditionError("spectral fields live on different bases");
    }
}

}  // namespace

int transform_friendly_size(int n) {
    for (int m = std::max(n, 2);; ++m) {
        if (m % 2 != 0) continue;
        int r = m;
        for (int p : {2, 3, 5}) {
            while (r % p == 0) r /= p;
        }
        if (r == 1) return m;
    }
}

BasisSpec make_basis_spec(int dim, int modes, double padding) {
    if (padding < 1.0) throw PreconditionError("padding factor must be >= 1");
    BasisSpec spec;
    spec.dim = dim;
    spec.modes = modes;
    spec.grid_points = transform_friendly_size(static_cast<int>(std::ceil(padding * modes - 1e-9)));
    return spec;
}

std::shared_ptr<const Basis> Basis::create(const BasisSpec& spec) {
    return std::shared_ptr<const Basis>(new Basis(spec));
}

std::shared_ptr<const Basis> Basis::create(int dim, int modes, double padding) {
    return create(make_basis_spec(dim, modes, padding));
}

Basis::Basis(const BasisSpec& spec) : spec_(spec) {
    if (spec.dim != 1 && spec.dim != 2) {
        throw PreconditionError("spatial dimension must be 1 or 2, got " + std::to_string(spec.dim));
    }
    if (spec.modes < 4 || spec.modes % 2 != 0) {
        throw PreconditionError("mode count must be even and >= 4, got " + std::to_string(spec.modes));
    }
    if (spec.grid_points < spec.modes || spec.grid_points % 2 != 0) {
        throw PreconditionError("grid points must be even and >= mode count");
    }

    const int n = spec.modes;
    const int g = spec.grid_points;
    const int half = n / 2;
    const int ghalf = g / 2 + 1;
    cell_volume_ = std::pow(kTwoPi / g, spec.dim);

    if (spec.dim == 1) {
        grid_size_ = static_cast<std::size_t>(g);
        grid_half_size_ = static_cast<std::size_t>(ghalf);
        for (int k = 0; k < half; ++k) {
            kx_.push_back(k);
            ky_.push_back(0);
            lambda_.push_back(double(k) * k);
            weight_.push_back(k == 0 ? 1.0 : 2.0);
            grid_slot_.push_back(static_cast<std::size_t>(k));
        }
    } else {
        grid_size_ = static_cast<std::size_t>(g) * g;
        grid_half_size_ = static_cast<std::size_t>(g) * ghalf;
        for (int ix = 0; ix < n; ++ix) {
            const int kx = ix < half ? ix : ix - n;
            for (int ky = 0; ky < half; ++ky) {
                kx_.push_back(kx);
                ky_.push_back(ky);
                lambda_.push_back(double(kx) * kx + double(ky) * ky);
                double w = ky == 0 ? 1.0 : 2.0;
                if (kx == -half) w = 0.0;
                weight_.push_back(w);
                grid_slot_.push_back(static_cast<std::size_t>(wrap(kx, g)) * ghalf + ky);
            }
        }
    }

    std::vector<double> real(grid_size_);
    std::vector<Complex> cplx(grid_half_size_);
    auto* r = real.data();
    auto* c = reinterpret_cast<fftw_complex*>(cplx.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;

    std::lock_guard lock(planner_mutex());
    if (spec.dim == 1) {
        forward_plan_ = fftw_plan_dft_r2c_1d(g, r, c, flags);
        inverse_plan_ = fftw_plan_dft_c2r_1d(g, c, r, flags);
    } else {
        forward_plan_ = fftw_plan_dft_r2c_2d(g, g, r, c, flags);
        inverse_plan_ = fftw_plan_dft_c2r_2d(g, g, c, r, flags);
    }
    if (!forward_plan_ || !inverse_plan_) throw Error("FFTW planning failed");
}

Basis::~Basis() {
    std::lock_guard lock(planner_mutex());
    if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    if (inverse_plan_) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

std::optional<std::size_t> Basis::index_of(int kx, int ky) const {
    const int half = spec_.modes / 2;
    if (ky < 0 || ky >= half || kx < -half || kx >= half) return std::nullopt;
    if (spec_.dim == 1) {
        if (ky != 0 || kx < 0) return std::nullopt;
        return static_cast<std::size_t>(kx);
    }
    return static_cast<std::size_t>(wrap(kx, spec_.modes)) * half + ky;
}

std::array<double, 2> Basis::grid_point(std::size_t m) const {
    const double h = kTwoPi / spec_.grid_points;
    if (spec_.dim == 1) return {h * double(m), 0.0};
    const auto g = static_cast<std::size_t>(spec_.grid_points);
    return {h * double(m / g), h * double(m % g)};
}

bool Basis::same_as(const Basis& other) const {
    return this == &other || (spec_.dim == other.spec_.dim && spec_.modes == other.spec_.modes &&
                              spec_.grid_points == other.spec_.grid_points);
}

void Basis::to_grid(std::span<const Complex> coeffs, std::span<double> values) const {
    std::vector<Complex> half(grid_half_size_, Complex(0.0, 0.0));
    const double scale = std::pow(kTwoPi, -0.5 * spec_.dim);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        half[grid_slot_[i]] = coeffs[i] * scale;
    }
    fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_), reinterpret_cast<fftw_complex*>(half.data()),
                         values.data());
}

void Basis::to_spectral(std::span<const double> values, std::span<Complex> coeffs) const {
    std::vector<double> in(values.begin(), values.end());
    std::vector<Complex> half(grid_half_size_);
    fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), in.data(),
                         reinterpret_cast<fftw_complex*>(half.data()));
    const double scale = std::pow(kTwoPi, 0.5 * spec_.dim) / double(grid_size_);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        coeffs[i] = half[grid_slot_[i]] * scale;
    }
}

// ---------------------------------------------------------------------------

SpectralField::SpectralField(BasisPtr basis)
    : basis_(std::move(basis)), coeffs_(basis_->spectral_size(), Complex(0.0, 0.0)) {}

SpectralField::SpectralField(BasisPtr basis, std::vector<Complex> coeffs)
    : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != basis_->spectral_size()) {
        throw PreconditionError("coefficient array does not match basis size");
    }
}

Complex SpectralField::mode(int kx, int ky) const {
    if (auto idx = basis_->index_of(kx, ky)) return coeffs_[*idx];
    if (auto idx = basis_->index_of(-kx, -ky)) return std::conj(coeffs_[*idx]);
    return {0.0, 0.0};
}

void SpectralField::set_mode(int kx, int ky, Complex value) {
    const auto direct = basis_->index_of(kx, ky);
    const auto mirror = basis_->index_of(-kx, -ky);
    if (!direct && !mirror) throw PreconditionError("mode outside the truncated basis");
    if (direct) coeffs_[*direct] = value;
    if (mirror) coeffs_[*mirror] = std::conj(value);
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
    require_same_basis(*this, other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
    require_same_basis(*this, other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

SpectralField& SpectralField::add_scaled(double s, const SpectralField& other) {
    require_same_basis(*this, other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * other.coeffs_[i];
    return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

GridField::GridField(BasisPtr basis) : basis_(std::move(basis)), values_(basis_->grid_size(), 0.0) {}

GridField::GridField(BasisPtr basis, std::vector<double> values)
    : basis_(std::move(basis)), values_(std::move(values)) {
    if (values_.size() != basis_->grid_size()) {
        throw PreconditionError("grid array does not match basis size");
    }
}

// ---------------------------------------------------------------------------

GridField to_grid(const SpectralField& f) {
    GridField g(f.basis());
    f.basis()->to_grid(f.coeffs(), g.values());
    return g;
}

SpectralField to_spectral(const GridField& g) {
    SpectralField f(g.basis());
    g.basis()->to_spectral(g.values(), f.coeffs());
    hermitian_project(f);
    return f;
}

SpectralField laplacian(const SpectralField& f) {
    SpectralField out(f);
    const auto& b = *f.basis();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= -b.eigenvalue(i);
    return out;
}

std::vector<SpectralField> gradient(const SpectralField& f) {
    const auto& b = *f.basis();
    std::vector<SpectralField> out;
    for (int axis = 0; axis < b.dim(); ++axis) {
        SpectralField g(f.basis());
        for (std::size_t i = 0; i < g.size(); ++i) {
            const int k = axis == 0 ? b.kx(i) : b.ky(i);
            g[i] = Complex(0.0, double(k)) * f[i];
        }
        out.push_back(std::move(g));
    }
    return out;
}

SpectralField divergence(std::span<const SpectralField> v) {
    if (v.empty()) throw PreconditionError("divergence of an empty tuple");
    const auto& b = *v[0].basis();
    if (v.size() != static_cast<std::size_t>(b.dim())) {
        throw PreconditionError("divergence needs one component per axis");
    }
    SpectralField out(v[0].basis());
    for (int axis = 0; axis < b.dim(); ++axis) {
        require_same_basis(out, v[axis]);
        for (std::size_t i = 0; i < out.size(); ++i) {
            const int k = axis == 0 ? b.kx(i) : b.ky(i);
            out[i] += Complex(0.0, double(k)) * v[axis][i];
        }
    }
    return out;
}

SpectralField dealias(const SpectralField& f) {
    SpectralField out(f);
    const auto& b = *f.basis();
    const double cutoff = b.grid_points() / 3.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (std::abs(b.kx(i)) >= cutoff || std::abs(b.ky(i)) >= cutoff) out[i] = 0.0;
    }
    return out;
}

SpectralField project_initial(const GridField& u0, const BasisPtr& basis) {
    const auto& src = *u0.basis();
    if (src.dim() != basis->dim() || src.grid_points() != basis->grid_points()) {
        throw PreconditionError("initial data is not sampled on the basis grid");
    }
    SpectralField f(basis);
    basis->to_spectral(u0.values(), f.coeffs());
    hermitian_project(f);
    return f;
}

SpectralField resample(const SpectralField& f, const BasisPtr& target) {
    if (f.basis()->dim() != target->dim()) throw PreconditionError("resample across dimensions");
    SpectralField out(target);
    const auto& b = *target;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (auto src = f.basis()->index_of(b.kx(i), b.ky(i))) out[i] = f[*src];
    }
    hermitian_project(out);
    return out;
}

void hermitian_project(SpectralField& f) {
    const auto& b = *f.basis();
    const int half = b.modes() / 2;
    f[0] = Complex(f[0].real(), 0.0);
    if (b.dim() == 1) return;
    for (int kx = 1; kx < half; ++kx) {
        const auto pos = *b.index_of(kx, 0);
        const auto neg = *b.index_of(-kx, 0);
        const Complex v = 0.5 * (f[pos] + std::conj(f[neg]));
        f[pos] = v;
        f[neg] = std::conj(v);
    }
    for (int ky = 0; ky < half; ++ky) f[*b.index_of(-half, ky)] = 0.0;
}

double hermitian_defect(const SpectralField& f) {
    const auto& b = *f.basis();
    const int half = b.modes() / 2;
    double defect = std::abs(f[0].imag());
    if (b.dim() == 1) return defect;
    for (int kx = 1; kx < half; ++kx) {
        const auto pos = *b.index_of(kx, 0);
        const auto neg = *b.index_of(-kx, 0);
        defect = std::max(defect, std::abs(f[pos] - std::conj(f[neg])));
    }
    for (int ky = 0; ky < half; ++ky) defect = std::max(defect, std::abs(f[*b.index_of(-half, ky)]));
    return defect;
}

double inner(const SpectralField& a, const SpectralField& b) {
    require_same_basis(a, b);
    const auto& basis = *a.basis();
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += basis.multiplicity(i) * (a[i].real() * b[i].real() + a[i].imag() * b[i].imag());
    }
    return s;
}

double norm_l2(const SpectralField& f) { return std::sqrt(inner(f, f)); }

double integrate(const GridField& g) {
    double s = 0.0;
    for (double v : g.values()) s += v;
    return s * g.basis()->cell_volume();
}

}  // namespace vch
