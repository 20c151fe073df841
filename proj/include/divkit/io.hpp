#pragma once

#include <string>

namespace divkit {

/// Shortest round-trip decimal rendering, C locale, '.' decimal point.
std::string format_double(double v);

/// Writes content to path via a temp file in the same directory plus an
/// atomic rename, so a failed run never leaves a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace divkit
