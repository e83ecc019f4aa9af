#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "wva/csv.hpp"

namespace wva {

/// Uniformly sampled real series. Sample i was taken at (start_index + i) * dt.
struct TimeSeries {
  std::vector<double> samples;
  double dt = 1.0;  // s
  std::int64_t start_index = 0;

  [[nodiscard]] std::size_t size() const noexcept { return samples.size(); }
  [[nodiscard]] double time(std::size_t i) const noexcept {
    return static_cast<double>(start_index + static_cast<std::int64_t>(i)) * dt;
  }
  /// Length >= 2 and dt > 0, else InvalidArgument.
  void validate() const;
};

/// Two-column text: t_seconds, value. Lines starting with '#' and a single
/// non-numeric header line are skipped. Ragged rows, unparsable cells and
/// non-uniform spacing (relative 1e-6) raise FormatError naming the line.
TimeSeries parse_series_csv(std::istream& in, const std::string& source = "<stream>");
TimeSeries read_series_csv(const std::filesystem::path& path);

void write_series_csv(const std::filesystem::path& path, const TimeSeries& series,
                      const OutputHeader& header, std::string_view value_column = "value");

}  // namespace wva
