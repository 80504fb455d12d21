#pragma once

// GridField serialisation.
//
//   CSV:    N rows of N comma-separated values, row i holds u(i, 0..N-1).
//   Binary: "MAENV1", u32 N (little-endian), then N*N float64 (little-endian),
//           row-major.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "maenv/grid.hpp"

namespace maenv::io {

void write_csv(std::ostream& out, const GridField& f);
GridField read_csv(std::istream& in);

void write_binary(std::ostream& out, const GridField& f);
GridField read_binary(std::istream& in);

void save_csv(const std::filesystem::path& path, const GridField& f);
void save_binary(const std::filesystem::path& path, const GridField& f);
GridField load_binary(const std::filesystem::path& path);

/// Shortest decimal text that round-trips the double.
std::string format_double(double v);

/// Header plus rows of numbers; used for the diagnostic tables.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void write(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
};

}  // namespace maenv::io
