#pragma once

#include <filesystem>
#include <iosfwd>

#include "fracham/grid.hpp"

namespace fracham {

// Binary dump layout (little-endian): f64 L, u64 N, then N f64 samples.
void write_field_binary(const Field& u, std::ostream& os);
void write_field_binary(const Field& u, const std::filesystem::path& path);
Field read_field_binary(std::istream& is);
Field read_field_binary(const std::filesystem::path& path);

// CSV: header "x,value", then one row per grid point at full precision. L is
// recovered as N * (x_1 - x_0).
void write_field_csv(const Field& u, std::ostream& os);
void write_field_csv(const Field& u, const std::filesystem::path& path);
Field read_field_csv(std::istream& is);
Field read_field_csv(const std::filesystem::path& path);

/// Picks the reader by extension: ".csv" is CSV, anything else binary.
Field read_field(const std::filesystem::path& path);

}  // namespace fracham
