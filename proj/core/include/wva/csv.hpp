#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wva {

/// Library version string, e.g. "0.3.0".
std::string_view version() noexcept;

/// Provenance block written as '#' comment lines at the top of every output.
struct OutputHeader {
  std::string config_hash;
  std::uint64_t seed = 0;
  bool synthetic = true;
  std::vector<std::pair<std::string, std::string>> extra;
};

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Comma-separated table writer. Opens (and truncates) the file, writes the
/// provenance block and the column names, then one row per call.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const OutputHeader& header,
            std::initializer_list<std::string_view> columns);

  void row(std::initializer_list<double> values);
  void row(std::span<const double> values);
  /// Mixed row: cells are written verbatim.
  void text_row(std::initializer_list<std::string_view> cells);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_ = 0;
};

void write_header_block(std::ostream& out, const OutputHeader& header);

}  // namespace wva
