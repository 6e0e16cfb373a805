#pragma once

// Binary field checkpoint, little-endian throughout:
//
//   offset  size  content
//        0     4  magic "SNLS"
//        4     4  format_version (u32) = 1
//        8     8  n_points (u64)
//       16     8  length (f64)
//       24     8  time (f64)
//       32  16*N  samples as interleaved (re, im) f64 pairs
//
// Bytes are produced from the IEEE-754 bit patterns, so write -> read ->
// write reproduces the file exactly.

#include <cstdint>
#include <string>
#include <vector>

#include "snls/spectral.hpp"

namespace snls {

inline constexpr std::uint32_t kCheckpointVersion = 1;
inline constexpr std::size_t kCheckpointHeaderBytes = 32;

struct Checkpoint {
  ComplexField field;
  double time = 0.0;
};

std::vector<std::uint8_t> encode_checkpoint(const ComplexField& field, double time);
/// Throws kIo on a malformed buffer (bad magic, version, grid or size).
Checkpoint decode_checkpoint(const std::vector<std::uint8_t>& bytes);

/// Throws kIo when the file cannot be written or read.
void write_checkpoint(const std::string& path, const ComplexField& field, double time);
Checkpoint read_checkpoint(const std::string& path);

}  // namespace snls
