#pragma once

#include <filesystem>

#include "lesbox/field.hpp"

namespace lesbox {

// On-disk spectral state: <base>.bin holds little-endian float64 (re, im)
// pairs, component-major, modes ascending lexicographically in
// (m0, m1, m2) with each m in [-n/2+1, n/2]; <base>.json carries the grid
// geometry, component count, field flags and sample time.
struct Snapshot {
  SpectralField field;
  double time = 0.0;
};

void write_snapshot(const std::filesystem::path& base, const SpectralField& f,
                    double time);

Snapshot read_snapshot(const std::filesystem::path& base);

} // namespace lesbox
