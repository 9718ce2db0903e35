#include "mirror/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace mirror {

// Golub-Welsch seeds the nodes (eigenvalues of the Jacobi matrix of the
// Hermite recurrence). The eigenvector weights are only accurate in absolute
// terms, so the outer ones are recomputed from the normalized recurrence
// after a Newton polish of each node.
GaussHermiteRule gauss_hermite(std::size_t n) {
  if (n == 0) throw std::invalid_argument("Gauss-Hermite rule needs at least one node");
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(nn);
  Eigen::VectorXd sub(std::max<Eigen::Index>(nn - 1, 0));
  for (Eigen::Index i = 0; i + 1 < nn; ++i) sub[i] = std::sqrt(0.5 * static_cast<double>(i + 1));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw std::runtime_error("Gauss-Hermite eigen-decomposition failed");
  GaussHermiteRule rule{std::vector<double>(n), std::vector<double>(n)};
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  const double p0 = 1.0 / std::sqrt(sqrt_pi);
  for (Eigen::Index i = 0; i < nn; ++i) {
    const double v = es.eigenvectors()(0, i);
    double x = es.eigenvalues()[i];
    double w = sqrt_pi * v * v;
    // p_j = psi_j(x) e^{x²/2}; stays finite while x² / 2 < ~700.
    for (int it = 0; it < 3; ++it) {
      double p1 = p0, p2 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const auto jd = static_cast<double>(j);
        p1 = x * std::sqrt(2.0 / jd) * p2 - std::sqrt((jd - 1.0) / jd) * p3;
      }
      const double pp = std::sqrt(2.0 * static_cast<double>(n)) * p2;
      if (!std::isfinite(pp) || pp == 0.0) break;
      x -= p1 / pp;
      w = 2.0 / (pp * pp);
    }
    rule.nodes[static_cast<std::size_t>(i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
  }
  // Exact symmetry about zero.
  for (std::size_t i = 0; i < n / 2; ++i) {
    const std::size_t j = n - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

GaussLegendreRule gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("Gauss-Legendre rule needs at least one node");
  GaussLegendreRule rule{std::vector<double>(n), std::vector<double>(n)};
  const auto nd = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const auto jd = static_cast<double>(j);
        p1 = ((2.0 * jd + 1.0) * z * p2 - jd * p3) / (jd + 1.0);
      }
      pp = nd * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

double integrate_panels(const std::function<double(double)>& f, double a, double b, double max_panel,
                        std::size_t max_panels) {
  if (!(b > a)) return 0.0;
  static const GaussLegendreRule rule = gauss_legendre(10);
  auto panels = static_cast<std::size_t>(std::ceil((b - a) / max_panel));
  panels = std::clamp<std::size_t>(panels, 1, max_panels);
  const double h = (b - a) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + (static_cast<double>(p) + 0.5) * h;
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
    total += 0.5 * h * acc;
  }
  return total;
}

}  // namespace mirror
