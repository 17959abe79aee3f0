#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sublap {

/// Locale-independent decimal rendering with 17 significant digits;
/// round-trips doubles bit-faithfully across languages.
std::string format_number(double v);

/// FNV-1a 64-bit content hash, hex-encoded. Used by artifact manifests.
std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

void write_file(const std::string& path, std::string_view content);
std::string read_file(const std::string& path);

/// Minimal CSV helpers for the fixed numeric table formats used here.
/// Fields never contain commas or quotes.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

}  // namespace sublap
