#include "wva/timeseries.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <string_view>

#include "wva/error.hpp"

namespace wva {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(',', start);
    cells.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

[[noreturn]] void format_error(const std::string& source, std::size_t line, const std::string& what) {
  throw Error(ErrorKind::kFormat, source + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

void TimeSeries::validate() const {
  require(samples.size() >= 2, ErrorKind::kInvalidArgument, "time series needs at least 2 samples");
  require(dt > 0.0 && std::isfinite(dt), ErrorKind::kInvalidArgument, "sampling period must be positive");
}

TimeSeries parse_series_csv(std::istream& in, const std::string& source) {
  std::vector<double> t;
  std::vector<double> v;
  std::vector<std::size_t> line_of;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto cells = split(body);
    if (cells.size() != 2) format_error(source, lineno, "expected 2 columns, found " + std::to_string(cells.size()));
    const auto a = parse_number(cells[0]);
    const auto b = parse_number(cells[1]);
    if (!a || !b) {
      if (t.empty() && !header_seen) {
        header_seen = true;
        continue;
      }
      format_error(source, lineno, "unparsable number");
    }
    t.push_back(*a);
    v.push_back(*b);
    line_of.push_back(lineno);
  }
  if (t.size() < 2) format_error(source, lineno, "need at least 2 samples");

  const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  if (!(dt > 0.0)) format_error(source, line_of[1], "time column must increase");
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double step = t[i] - t[i - 1];
    if (std::abs(step - dt) > 1e-6 * dt) format_error(source, line_of[i], "non-uniform sampling");
  }

  TimeSeries series;
  series.samples = std::move(v);
  series.dt = dt;
  series.start_index = static_cast<std::int64_t>(std::llround(t.front() / dt));
  return series;
}

TimeSeries read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::kIo, "cannot open " + path.string());
  return parse_series_csv(in, path.string());
}

void write_series_csv(const std::filesystem::path& path, const TimeSeries& series, const OutputHeader& header,
                      std::string_view value_column) {
  CsvWriter out(path, header, {"t_seconds", value_column});
  for (std::size_t i = 0; i < series.size(); ++i) out.row({series.time(i), series.samples[i]});
}

}  // namespace wva
