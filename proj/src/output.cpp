#include "mirror/output.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>

namespace mirror {

std::string format_number(double x) { return fmt::format("{}", x); }

namespace {

std::string header(const Provenance& prov) {
  std::string out = fmt::format("# schema_version: {}\n", kOutputSchemaVersion);
  for (const auto& [k, v] : prov) out += fmt::format("# {}: {}\n", k, v);
  return out;
}

std::string axis_line(const char* which, const Axis& a) {
  return fmt::format("# {}: {} [{}, {}] x {}\n", which, a.role, format_number(a.min), format_number(a.max), a.count);
}

}  // namespace

std::string grid_csv(const FieldGrid& g, const Provenance& prov) {
  std::string out = header(prov);
  out += axis_line("rows", g.rows);
  out += axis_line("cols", g.cols);
  out += fmt::format("# field: {}\n", g.is_complex ? "complex (re, im pairs)" : "real");
  if (!g.flags.empty()) {
    std::string f;
    for (const auto& s : g.flags) f += (f.empty() ? "" : ",") + s;
    out += "# flags: " + f + "\n";
  }
  const std::size_t nc = g.cols.count;
  out += format_number(static_cast<double>(g.is_complex ? 2 * nc : nc));
  for (std::size_t c = 0; c < nc; ++c) {
    const std::string x = format_number(g.cols.at(c));
    out += "," + x;
    if (g.is_complex) out += "," + x;
  }
  out += "\n";
  for (std::size_t r = 0; r < g.rows.count; ++r) {
    out += format_number(g.rows.at(r));
    for (std::size_t c = 0; c < nc; ++c) {
      if (g.is_complex) {
        const auto z = g.cplx[g.index(r, c)];
        out += "," + format_number(z.real()) + "," + format_number(z.imag());
      } else {
        out += "," + format_number(g.real[g.index(r, c)]);
      }
    }
    out += "\n";
  }
  return out;
}

std::string curve_csv(const CurveTable& t, const Provenance& prov) {
  for (const auto& s : t.series)
    if (s.size() != t.x.size()) throw std::invalid_argument("curve series length differs from the abscissa");
  std::string out = header(prov);
  out += t.x_name;
  for (const auto& n : t.names) out += "," + n;
  out += "\n";
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    out += format_number(t.x[i]);
    for (const auto& s : t.series) out += "," + format_number(s[i]);
    out += "\n";
  }
  return out;
}

std::string heatmap_script(const std::string& csv_file, const std::string& title, const std::string& xlabel,
                           const std::string& ylabel) {
  const std::string png = std::filesystem::path(csv_file).replace_extension(".png").filename().string();
  const std::string csv = std::filesystem::path(csv_file).filename().string();
  // Matrix rows are the first axis; gnuplot puts matrix columns on x.
  return fmt::format(
      "set terminal pngcairo size 900,800\n"
      "set output '{}'\n"
      "set datafile separator ','\n"
      "set title '{}'\n"
      "set xlabel '{}'\n"
      "set ylabel '{}'\n"
      "set view map\n"
      "set palette defined (0 'white', 1 'blue', 2 'black')\n"
      "plot '{}' nonuniform matrix with image notitle\n",
      png, title, xlabel, ylabel, csv);
}

std::string curve_script(const std::string& csv_file, const CurveTable& t, const std::string& title) {
  const std::string png = std::filesystem::path(csv_file).replace_extension(".png").filename().string();
  const std::string csv = std::filesystem::path(csv_file).filename().string();
  std::string out = fmt::format(
      "set terminal pngcairo size 900,500\n"
      "set output '{}'\n"
      "set datafile separator ','\n"
      "set key autotitle columnhead\n"
      "set title '{}'\n"
      "set xlabel '{}'\n"
      "plot ",
      png, title, t.x_name);
  for (std::size_t i = 0; i < t.names.size(); ++i)
    out += fmt::format("{}'{}' using 1:{} with lines", i ? ", " : "", csv, i + 2);
  out += "\n";
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace mirror
