#include "vch/snapshot.hpp"

#include "vch/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

namespace vch {

namespace {

constexpr char kMagic[4] = {'V', 'C', 'H', 'F'};

template <class T>
void put_le(std::string& out, T value) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                 std::conditional_t<sizeof(T) == 4, std::uint32_t,
                                                    std::conditional_t<sizeof(T) == 2, std::uint16_t, std::uint8_t>>>;
    const U bits = std::bit_cast<U>(value);
    for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xffu));
}

class Reader {
public:
    explicit Reader(const std::string& bytes) : bytes_(bytes) {}

    template <class T>
    T get(const char* what) {
        using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                     std::conditional_t<sizeof(T) == 4, std::uint32_t,
                                                        std::conditional_t<sizeof(T) == 2, std::uint16_t, std::uint8_t>>>;
        if (bytes_.size() - pos_ < sizeof(U)) throw FormatError(std::string("snapshot truncated while reading ") + what);
        U bits = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i) {
            bits |= static_cast<U>(static_cast<U>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i));
        }
        pos_ += sizeof(U);
        return std::bit_cast<T>(bits);
    }

    std::size_t remaining() const { return bytes_.size() - pos_; }
    std::size_t position() const { return pos_; }
    void skip(std::size_t n) { pos_ += n; }

private:
    const std::string& bytes_;
    std::size_t pos_ = 0;
};

// Storage slots in lexicographic order of (kx, ky).
std::vector<std::size_t> lexicographic_slots(const Basis& b) {
    std::vector<std::size_t> slots;
    const int half = b.modes() / 2;
    if (b.dim() == 1) {
        for (int k = 0; k < half; ++k) slots.push_back(*b.index_of(k));
        return slots;
    }
    for (int kx = -half; kx < half; ++kx) {
        for (int ky = 0; ky < half; ++ky) slots.push_back(*b.index_of(kx, ky));
    }
    return slots;
}

}  // namespace

std::string encode_snapshot(const SpectralField& f, double t) {
    const Basis& b = *f.basis();
    std::string out(kMagic, sizeof kMagic);
    put_le(out, kSnapshotVersion);
    put_le(out, static_cast<std::uint8_t>(b.dim()));
    for (int a = 0; a < b.dim(); ++a) put_le(out, static_cast<std::uint32_t>(b.modes()));
    put_le(out, t);
    for (std::size_t slot : lexicographic_slots(b)) {
        put_le(out, f[slot].real());
        put_le(out, f[slot].imag());
    }
    return out;
}

void write_snapshot(const SpectralField& f, double t, const std::filesystem::path& path) {
    const std::string bytes = encode_snapshot(f, t);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open " + path.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError("failed writing " + path.string());
}

Snapshot decode_snapshot(const std::string& bytes, double padding) {
    if (bytes.size() < sizeof kMagic || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
        throw FormatError("not a field snapshot (bad magic)");
    }
    Reader in(bytes);
    in.skip(sizeof kMagic);
    const auto version = in.get<std::uint16_t>("version");
    if (version != kSnapshotVersion) {
        throw FormatError("unsupported snapshot version " + std::to_string(version) + " (expected " +
                          std::to_string(kSnapshotVersion) + ")");
    }
    const int dim = in.get<std::uint8_t>("dimension");
    if (dim != 1 && dim != 2) throw FormatError("snapshot dimension must be 1 or 2, got " + std::to_string(dim));
    std::uint32_t modes = 0;
    for (int a = 0; a < dim; ++a) {
        const auto n = in.get<std::uint32_t>("mode count");
        if (a > 0 && n != modes) throw FormatError("snapshot mode counts differ between axes");
        modes = n;
    }
    if (modes < 4 || modes % 2 != 0 || modes > (1u << 20)) {
        throw FormatError("snapshot mode count " + std::to_string(modes) + " is not an even number >= 4");
    }
    const double t = in.get<double>("time");

    BasisPtr basis;
    try {
        basis = Basis::create(dim, static_cast<int>(modes), padding);
    } catch (const Error& e) {
        throw FormatError(std::string("snapshot header: ") + e.what());
    }
    const auto slots = lexicographic_slots(*basis);
    const std::size_t payload = slots.size() * 16;
    if (in.remaining() < payload) {
        throw FormatError("snapshot payload truncated: expected " + std::to_string(payload) + " bytes, found " +
                          std::to_string(in.remaining()));
    }
    if (in.remaining() > payload) {
        throw FormatError("snapshot has " + std::to_string(in.remaining() - payload) + " trailing bytes");
    }
    SpectralField f(basis);
    double scale = 1.0;
    for (std::size_t slot : slots) {
        const double re = in.get<double>("coefficient");
        const double im = in.get<double>("coefficient");
        if (!std::isfinite(re) || !std::isfinite(im)) throw FormatError("snapshot contains non-finite coefficients");
        f[slot] = Complex(re, im);
        scale = std::max(scale, std::abs(f[slot]));
    }
    const double defect = hermitian_defect(f);
    if (defect > 1e-12 * scale) {
        throw FormatError("snapshot coefficients violate Hermitian symmetry (defect " + std::to_string(defect) + ")");
    }
    return {std::move(f), t};
}

Snapshot read_snapshot(const std::filesystem::path& path, double padding) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open snapshot " + path.string());
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return decode_snapshot(bytes, padding);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

}  // namespace vch
