#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace mwion {

/// Numeric table with named columns. Comment lines start with '#'.
struct Table {
  std::vector<std::string> comments;  // without the leading "# "
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  /// Throws std::out_of_range for an unknown column.
  std::size_t column_index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
};

/// Shortest round-trip decimal form; byte-stable for a given value.
std::string format_number(double v);

std::string to_csv(const Table& table);

/// Throws IoError when the file cannot be opened, std::invalid_argument on
/// malformed content.
Table read_csv(const std::filesystem::path& path);
Table parse_csv(const std::string& text);

/// Throws IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace mwion
