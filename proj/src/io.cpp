#include "maenv/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "maenv/errors.hpp"

namespace maenv::io {
namespace {

constexpr std::array<char, 6> kMagic = {'M', 'A', 'E', 'N', 'V', '1'};

template <typename T>
T to_little(T value) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
    std::reverse(bytes.begin(), bytes.end());
    value = std::bit_cast<T>(bytes);
  }
  return value;
}

template <typename T>
void put_le(std::ostream& out, T value) {
  value = to_little(value);
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw Error("binary field: truncated input");
  return to_little(value);
}

std::ofstream open_out(const std::filesystem::path& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), end);
}

void write_csv(std::ostream& out, const GridField& f) {
  for (int i = 0; i < f.n(); ++i) {
    for (int j = 0; j < f.n(); ++j) {
      if (j) out << ',';
      out << format_double(f(i, j));
    }
    out << '\n';
  }
}

GridField read_csv(std::istream& in) {
  std::vector<double> values;
  std::string line;
  int rows = 0;
  std::size_t cols = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t count = 0;
    while (std::getline(ss, cell, ',')) {
      values.push_back(std::stod(cell));
      ++count;
    }
    if (rows == 0) cols = count;
    if (count != cols) throw Error("csv field: ragged rows");
    ++rows;
  }
  if (static_cast<std::size_t>(rows) != cols) throw Error("csv field: not square");
  return GridField(TorusGrid(rows), std::move(values));
}

void write_binary(std::ostream& out, const GridField& f) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(f.n()));
  for (double v : f.values()) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
}

GridField read_binary(std::istream& in) {
  std::array<char, 6> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw Error("binary field: bad magic");
  const auto n = get_le<std::uint32_t>(in);
  TorusGrid grid(static_cast<int>(n));
  std::vector<double> values(grid.size());
  for (double& v : values) v = std::bit_cast<double>(get_le<std::uint64_t>(in));
  return GridField(grid, std::move(values));
}

void save_csv(const std::filesystem::path& path, const GridField& f) {
  auto out = open_out(path, false);
  write_csv(out, f);
}

void save_binary(const std::filesystem::path& path, const GridField& f) {
  auto out = open_out(path, true);
  write_binary(out, f);
}

GridField load_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return read_binary(in);
}

void Table::write(std::ostream& out) const {
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
    out << '\n';
  }
}

void Table::save(const std::filesystem::path& path) const {
  auto out = open_out(path, false);
  write(out);
}

}  // namespace maenv::io
