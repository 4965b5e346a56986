#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "hinm/matrix.hpp"

namespace hinm {

// HNMW layout, all little-endian:
//   "HNMW" | u32 version (=1) | u32 rows | u32 cols | rows*cols binary32, row-major
inline constexpr std::uint32_t kHnmwVersion = 1;

std::vector<std::uint8_t> encode_hnmw(const DenseMatrix& m);
/// Throws FormatError on bad magic, version, size, or non-finite values.
DenseMatrix decode_hnmw(std::span<const std::uint8_t> bytes);

/// Throws FileError when the file cannot be opened or written.
DenseMatrix read_hnmw(const std::filesystem::path& path);
void write_hnmw(const std::filesystem::path& path, const DenseMatrix& m);

}  // namespace hinm
