#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace mirror {

// Gauss-Hermite rule for ∫ e^{-x²} f(x) dx. Nodes ascending.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussHermiteRule gauss_hermite(std::size_t n);

// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(std::size_t n);

// ∫_a^b f by composite 10-point Gauss-Legendre on panels no wider than
// max_panel. Panel count is capped at max_panels.
double integrate_panels(const std::function<double(double)>& f, double a, double b, double max_panel,
                        std::size_t max_panels = 200000);

}  // namespace mirror
