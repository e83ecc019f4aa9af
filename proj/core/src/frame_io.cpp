#include "wva/frame_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cctype>
#include <cstring>
#include <fstream>
#include <string>

#include "wva/error.hpp"

namespace wva {
namespace {

constexpr std::array<char, 8> kMagic = {'W', 'V', 'A', 'F', 'R', 'M', '0', '1'};

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorKind::kIo, "cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorKind::kIo, "cannot open " + path.string());
  return in;
}

template <typename T>
void put_le(std::ostream& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.put(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff));
}

template <typename T>
T get_le(std::istream& in) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    const int c = in.get();
    require(c != EOF, ErrorKind::kFormat, "truncated frame header");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return static_cast<T>(v);
}

std::string pgm_token(std::istream& in) {
  std::string tok;
  int c = in.get();
  for (;;) {
    while (c != EOF && std::isspace(c)) c = in.get();
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
      continue;
    }
    break;
  }
  while (c != EOF && !std::isspace(c)) {
    tok.push_back(static_cast<char>(c));
    c = in.get();
  }
  return tok;
}

}  // namespace

void write_pgm(const std::filesystem::path& path, const Frame& frame) {
  auto out = open_out(path);
  out << "P5\n" << frame.cols() << ' ' << frame.rows() << "\n65535\n";
  for (std::uint16_t v : frame.counts) {
    out.put(static_cast<char>(v >> 8));
    out.put(static_cast<char>(v & 0xff));
  }
  require(out.good(), ErrorKind::kIo, "write failed: " + path.string());
}

Frame read_pgm(const std::filesystem::path& path, CcdSpec spec) {
  auto in = open_in(path);
  require(pgm_token(in) == "P5", ErrorKind::kFormat, path.string() + ": not a binary PGM");
  std::size_t cols = 0, rows = 0;
  unsigned long maxval = 0;
  try {
    cols = std::stoul(pgm_token(in));
    rows = std::stoul(pgm_token(in));
    maxval = std::stoul(pgm_token(in));
  } catch (const std::exception&) {
    throw Error(ErrorKind::kFormat, path.string() + ": bad PGM header");
  }
  require(maxval > 0 && maxval <= 65535, ErrorKind::kFormat, path.string() + ": bad PGM maxval");
  spec.rows = rows;
  spec.cols = cols;
  Frame f{spec, {}, std::vector<std::uint16_t>(rows * cols)};
  for (auto& v : f.counts) {
    if (maxval < 256) {
      const int c = in.get();
      require(c != EOF, ErrorKind::kFormat, path.string() + ": truncated PGM");
      v = static_cast<std::uint16_t>(c);
    } else {
      const int hi = in.get();
      const int lo = in.get();
      require(lo != EOF && hi != EOF, ErrorKind::kFormat, path.string() + ": truncated PGM");
      v = static_cast<std::uint16_t>((hi << 8) | lo);
    }
  }
  return f;
}

void write_frame_binary(const std::filesystem::path& path, const Frame& frame, std::uint64_t seed) {
  auto out = open_out(path);
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(frame.rows()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(frame.cols()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(frame.spec.bit_depth));
  put_le<std::uint32_t>(out, 0);
  put_le<std::uint64_t>(out, seed);
  for (std::uint16_t v : frame.counts) put_le<std::uint16_t>(out, v);
  require(out.good(), ErrorKind::kIo, "write failed: " + path.string());
}

Frame read_frame_binary(const std::filesystem::path& path, std::uint64_t* seed) {
  auto in = open_in(path);
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  require(in.good() && magic == kMagic, ErrorKind::kFormat, path.string() + ": bad frame magic");
  CcdSpec spec;
  spec.rows = get_le<std::uint32_t>(in);
  spec.cols = get_le<std::uint32_t>(in);
  spec.bit_depth = static_cast<int>(get_le<std::uint32_t>(in));
  (void)get_le<std::uint32_t>(in);
  const auto s = get_le<std::uint64_t>(in);
  if (seed) *seed = s;
  Frame f{spec, {}, std::vector<std::uint16_t>(spec.rows * spec.cols)};
  for (auto& v : f.counts) v = get_le<std::uint16_t>(in);
  return f;
}

void write_marginal_csv(const std::filesystem::path& path, const Frame& frame, const OutputHeader& header) {
  CsvWriter out(path, header, {"row", "counts"});
  const auto k = row_marginal(frame);
  for (std::size_t r = 0; r < k.size(); ++r)
    out.text_row({std::to_string(r), std::to_string(k[r])});
}

void write_intensity_csv(const std::filesystem::path& path, const IntensityMap& map, const OutputHeader& header) {
  auto out = open_out(path);
  write_header_block(out, header);
  for (std::size_t r = 0; r < map.rows(); ++r) {
    for (std::size_t c = 0; c < map.cols(); ++c) {
      if (c) out << ',';
      out << format_double(map(r, c));
    }
    out << '\n';
  }
  require(out.good(), ErrorKind::kIo, "write failed: " + path.string());
}

void write_intensity_pgm(const std::filesystem::path& path, const IntensityMap& map) {
  const auto v = map.values();
  const double peak = v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
  CcdSpec spec;
  spec.rows = map.rows();
  spec.cols = map.cols();
  spec.bit_depth = 16;
  Frame f{spec, {}, std::vector<std::uint16_t>(v.size(), 0)};
  if (peak > 0.0)
    for (std::size_t i = 0; i < v.size(); ++i)
      f.counts[i] = static_cast<std::uint16_t>(std::lround(std::max(v[i], 0.0) / peak * 65535.0));
  write_pgm(path, f);
}

}  // namespace wva
