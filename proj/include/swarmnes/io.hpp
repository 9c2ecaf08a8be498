#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace swarmnes {

// Shortest decimal representation that parses back to the identical
// double. Locale-independent.
std::string format_double(double value);

// Shortest hex-float representation (no 0x prefix), bit-exact round trip.
std::string format_hex_double(double value);

double parse_double(std::string_view text);      // throws DataError
double parse_hex_double(std::string_view text);  // throws DataError

// Writes via a temp file in the same directory, then renames over the
// target, so readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

std::string read_file(const std::filesystem::path& path);  // throws DataError

// Minimal CSV: comma separators, first line is the header, no quoting
// (all emitted schemas are purely numeric plus fixed header names).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index by header name; throws DataError when absent.
  std::size_t column(std::string_view name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

std::string csv_join(const std::vector<std::string>& fields);

}  // namespace swarmnes
