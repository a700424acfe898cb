#pragma once

// On-disk forms of fields and signals.
//
// Field2D binary layout (all little-endian):
//   bytes  0..7    magic "HLFIELD\0"
//   u64            format version (1)
//   u64            nx, then nt
//   f64            x0, dx, t0, dt
//   f64 pairs      re, im of every value, t-major (all x for t0, then t0 + dt, ...)
//
// CSV forms carry a header row and print every number with %.17g:
//   field   t,x,re,im        (t-major)
//   signal  t,re,im
//   profile x,re,im

#include <cstdint>
#include <filesystem>
#include <string>

#include "halfline/types.hpp"

namespace halfline::io {

inline constexpr char kFieldMagic[8] = {'H', 'L', 'F', 'I', 'E', 'L', 'D', '\0'};
inline constexpr std::uint64_t kFieldVersion = 1;

void write_field_binary(const Field2D& field, const std::filesystem::path& path);
/// Throws Error on a bad magic, unknown version or truncated file.
Field2D read_field_binary(const std::filesystem::path& path);

std::string field_csv(const Field2D& field);
std::string signal_csv(const TimeSignal& signal);
std::string profile_csv(const SpaceProfile& profile);

/// Reads t,re,im rows on a uniform grid starting at t = 0. The support ends
/// one step after the last nonzero sample.
TimeSignal read_signal_csv(const std::filesystem::path& path);
/// Reads x,re,im rows on a uniform grid.
SpaceProfile read_profile_csv(const std::filesystem::path& path, Domain domain);

/// 64-bit FNV-1a hash of the values printed as "%.10e %.10e\n" per entry,
/// t-major, after flushing entries below 1e-13 of the peak to zero.
/// Insensitive to the last few bits of each value.
std::uint64_t field_checksum(const Field2D& field);
std::string to_hex(std::uint64_t value);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace halfline::io
