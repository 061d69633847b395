#ifndef VCH_SNAPSHOT_HPP
#define VCH_SNAPSHOT_HPP

// Binary field snapshot, all integers and floats little-endian:
//
//   "VCHF"                 4 bytes magic
//   version                u16 (currently 1)
//   n                      u8, spatial dimension
//   N                      u32 per axis (n entries, all equal)
//   time                   f64
//   coefficients           (re f64, im f64) per half-spectrum mode
//
// Modes are written in lexicographic order of the signed wavenumbers:
// 1D k = 0 .. N/2-1; 2D kx = -N/2 .. N/2-1 outer, ky = 0 .. N/2-1 inner.

#include "vch/spectral.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace vch {

inline constexpr std::uint16_t kSnapshotVersion = 1;

struct Snapshot {
    SpectralField field;
    double t = 0.0;
};

void write_snapshot(const SpectralField& f, double t, const std::filesystem::path& path);
std::string encode_snapshot(const SpectralField& f, double t);

/// Reads a snapshot onto a freshly created basis with the given padding.
/// Throws FormatError on a bad header, truncated or oversized payload, or a
/// field that is not Hermitian.
Snapshot read_snapshot(const std::filesystem::path& path, double padding = 1.5);
Snapshot decode_snapshot(const std::string& bytes, double padding = 1.5);

}  // namespace vch

#endif  // VCH_SNAPSHOT_HPP
