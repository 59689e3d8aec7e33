#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace anderson {

/// Shortest-round-trip-safe decimal: 17 significant digits.
std::string format_double(double value);

/// Writes `contents` to a sibling temporary file, then renames it over
/// `path`, so readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace anderson
