#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "leastgrad/grid.hpp"

namespace leastgrad {

/// Field files are CSV: a header line `# nx ny h x0 y0`, then one line per
/// grid row starting from the bottom row (j = 0), values comma separated and
/// printed with 17 significant digits so that a write/read cycle is exact.
std::string format_field(const ScalarGrid& field);
ScalarGrid parse_field(std::string_view text);

void write_field(const std::filesystem::path& path, const ScalarGrid& field);
ScalarGrid read_field(const std::filesystem::path& path);

/// Mask files use the field format with values in {0, 1}.
void write_mask(const std::filesystem::path& path, const DomainMask& mask);
DomainMask read_mask(const std::filesystem::path& path);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// 17-significant-digit text of a double.
std::string format_double(double v);

}  // namespace leastgrad
