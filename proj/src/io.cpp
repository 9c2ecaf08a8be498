#include "swarmnes/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "swarmnes/errors.hpp"

namespace swarmnes {

namespace {

std::string format_with(double value, std::chars_format fmt) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value, fmt);
  if (ec != std::errc()) {
    throw DataError("failed to format double");
  }
  return std::string(buffer, ptr);
}

double parse_with(std::string_view text, std::chars_format fmt,
                  const char* what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                         value, fmt);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DataError(std::string("malformed ") + what + " number: '" +
                    std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  return format_with(value, std::chars_format::general);
}

std::string format_hex_double(double value) {
  return format_with(value, std::chars_format::hex);
}

double parse_double(std::string_view text) {
  return parse_with(text, std::chars_format::general, "decimal");
}

double parse_hex_double(std::string_view text) {
  return parse_with(text, std::chars_format::hex, "hex-float");
}

void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw DataError("cannot open '" + tmp.string() + "' for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      throw DataError("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw DataError("failed to move '" + tmp.string() + "' into place: " +
                    ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) {
      return i;
    }
  }
  throw DataError("csv: missing column '" + std::string(name) + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
  const std::string content = read_file(path);

  CsvTable table;
  std::size_t start = 0;
  bool is_header = true;
  while (start <= content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string::npos) {
      end = content.size();
    }
    std::string_view line(content.data() + start, end - start);
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    if (!line.empty()) {
      std::vector<std::string> fields;
      std::size_t field_start = 0;
      for (;;) {
        const std::size_t comma = line.find(',', field_start);
        if (comma == std::string_view::npos) {
          fields.emplace_back(line.substr(field_start));
          break;
        }
        fields.emplace_back(line.substr(field_start, comma - field_start));
        field_start = comma + 1;
      }
      if (is_header) {
        table.header = std::move(fields);
        is_header = false;
      } else {
        if (fields.size() != table.header.size()) {
          throw DataError("csv: row with " + std::to_string(fields.size()) +
                          " fields, expected " +
                          std::to_string(table.header.size()) + " in '" +
                          path.string() + "'");
        }
        table.rows.push_back(std::move(fields));
      }
    }
    if (end == content.size()) {
      break;
    }
    start = end + 1;
  }
  if (is_header) {
    throw DataError("csv: '" + path.string() + "' is empty");
  }
  return table;
}

std::string csv_join(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) {
      line += ',';
    }
    line += fields[i];
  }
  return line;
}

}  // namespace swarmnes
