#include "wva/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "wva/error.hpp"

#ifndef WVA_VERSION_STRING
#define WVA_VERSION_STRING "0.0.0"
#endif

namespace wva {

std::string_view version() noexcept { return WVA_VERSION_STRING; }

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

void write_header_block(std::ostream& out, const OutputHeader& header) {
  out << "# tool: wva " << version() << '\n';
  out << "# config_hash: " << header.config_hash << '\n';
  out << "# seed: " << header.seed << '\n';
  out << "# data: " << (header.synthetic ? "synthetic" : "ingested") << '\n';
  for (const auto& [key, value] : header.extra) out << "# " << key << ": " << value << '\n';
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const OutputHeader& header,
                     std::initializer_list<std::string_view> columns)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), columns_(columns.size()) {
  require(out_.good(), ErrorKind::kIo, "cannot open " + path.string() + " for writing");
  write_header_block(out_, header);
  bool first = true;
  for (auto c : columns) {
    if (!first) out_ << ',';
    out_ << c;
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values) { row(std::span<const double>(values.begin(), values.size())); }

void CsvWriter::row(std::span<const double> values) {
  require(values.size() == columns_, ErrorKind::kShape, "row width does not match header in " + path_.string());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ',';
    out_ << format_double(values[i]);
  }
  out_ << '\n';
  require(out_.good(), ErrorKind::kIo, "write failed: " + path_.string());
}

void CsvWriter::text_row(std::initializer_list<std::string_view> cells) {
  require(cells.size() == columns_, ErrorKind::kShape, "row width does not match header in " + path_.string());
  bool first = true;
  for (auto c : cells) {
    if (!first) out_ << ',';
    out_ << c;
    first = false;
  }
  out_ << '\n';
  require(out_.good(), ErrorKind::kIo, "write failed: " + path_.string());
}

}  // namespace wva
