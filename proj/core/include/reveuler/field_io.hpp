#pragma once

// FLD1 field dumps. Layout (little-endian):
//   "FLD1" | u32 n | f64 R | u8 ncomp | u8 axis tag | ncomp * n^3 f64
// Axis tag 0 means x1 slowest, x3 fastest (the in-memory layout); it is the
// only tag this reader accepts.

#include <filesystem>
#include <vector>

#include "reveuler/grid.hpp"

namespace reveuler {

inline constexpr unsigned char kAxisTagX1Slowest = 0;

void write_fld1(const std::filesystem::path& path, const std::vector<const ScalarField*>& components);
void write_fld1(const std::filesystem::path& path, const ScalarField& field);
void write_fld1(const std::filesystem::path& path, const VectorField& field);

/// Throws Io on a short read, bad magic or unknown axis tag.
std::vector<ScalarField> read_fld1(const std::filesystem::path& path);
VectorField read_fld1_vector(const std::filesystem::path& path);

}  // namespace reveuler
