#include "mirror/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mirror {

std::vector<double> Axis::samples() const {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = at(i);
  return out;
}

void Axis::validate() const {
  if (count < 16) throw std::invalid_argument("axis '" + role + "' needs at least 16 samples");
  if (!std::isfinite(min) || !std::isfinite(max) || !(max > min)) {
    throw std::invalid_argument("axis '" + role + "' has a degenerate range");
  }
}

void GridSpec::validate() const {
  rows.validate();
  cols.validate();
}

FieldGrid FieldGrid::real_field(const GridSpec& g) {
  g.validate();
  FieldGrid f;
  f.rows = g.rows;
  f.cols = g.cols;
  f.real.assign(f.size(), 0.0);
  return f;
}

FieldGrid FieldGrid::complex_field(const GridSpec& g) {
  g.validate();
  FieldGrid f;
  f.rows = g.rows;
  f.cols = g.cols;
  f.is_complex = true;
  f.cplx.assign(f.size(), {0.0, 0.0});
  return f;
}

std::vector<double> FieldGrid::row(std::size_t r) const {
  return {real.begin() + static_cast<std::ptrdiff_t>(index(r, 0)),
          real.begin() + static_cast<std::ptrdiff_t>(index(r, 0) + cols.count)};
}

std::vector<double> FieldGrid::column(std::size_t c) const {
  std::vector<double> out(rows.count);
  for (std::size_t r = 0; r < rows.count; ++r) out[r] = real[index(r, c)];
  return out;
}

bool FieldGrid::has_flag(const std::string& f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

}  // namespace mirror
