#pragma once

// Flat-file artifacts. Grids are CSV in gnuplot's "nonuniform matrix"
// layout: a '#' header block, then a first line holding the column count and
// column coordinates, then one line per row (row coordinate, values).
// Complex grids write re/im pairs per column. Files are written to a
// temporary name and renamed into place.

#include <map>
#include <string>
#include <vector>

#include "mirror/grid.hpp"

namespace mirror {

inline constexpr int kOutputSchemaVersion = 1;

// Ordered key/value lines for the header. No wall-clock entries: identical
// inputs must give identical bytes.
using Provenance = std::vector<std::pair<std::string, std::string>>;

// Shortest text that reads back to the same double.
std::string format_number(double x);

std::string grid_csv(const FieldGrid& g, const Provenance& prov);

// Columns: x, then one column per series.
struct CurveTable {
  std::string x_name;
  std::vector<double> x;
  std::vector<std::string> names;
  std::vector<std::vector<double>> series;
};

std::string curve_csv(const CurveTable& t, const Provenance& prov);

// gnuplot scripts reading the CSVs above and writing PNGs next to them.
std::string heatmap_script(const std::string& csv_file, const std::string& title, const std::string& xlabel,
                           const std::string& ylabel);
std::string curve_script(const std::string& csv_file, const CurveTable& t, const std::string& title);

// Writes via "<path>.tmp" and rename; creates parent directories.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace mirror
