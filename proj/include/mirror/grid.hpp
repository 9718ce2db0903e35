#pragma once

// Sampled fields over two axes. Row-major: the first axis indexes rows.

#include <complex>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace mirror {

struct Axis {
  std::string role;          // "x1", "x2", "t1", "t2"
  double min = 0.0;
  double max = 1.0;
  std::size_t count = 16;

  double step() const { return count > 1 ? (max - min) / static_cast<double>(count - 1) : 0.0; }
  double at(std::size_t i) const { return min + step() * static_cast<double>(i); }
  std::vector<double> samples() const;
  void validate() const;
};

struct GridSpec {
  Axis rows;
  Axis cols;

  void validate() const;
};

struct FieldGrid {
  Axis rows;
  Axis cols;
  bool is_complex = false;
  std::vector<double> real;                 // PDFs and other real fields
  std::vector<std::complex<double>> cplx;   // amplitudes
  std::map<std::string, std::string> provenance;
  std::vector<std::string> flags;

  static FieldGrid real_field(const GridSpec& g);
  static FieldGrid complex_field(const GridSpec& g);

  std::size_t size() const { return rows.count * cols.count; }
  std::size_t index(std::size_t r, std::size_t c) const { return r * cols.count + c; }
  double& operator()(std::size_t r, std::size_t c) { return real[index(r, c)]; }
  double operator()(std::size_t r, std::size_t c) const { return real[index(r, c)]; }

  std::vector<double> row(std::size_t r) const;
  std::vector<double> column(std::size_t c) const;
  bool has_flag(const std::string& f) const;
};

}  // namespace mirror
