#include "mirror/gaussian_integral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mirror {

Matrix2c Matrix2c::inverse() const {
  const cplx d = det();
  return {a11 / d, -a01 / d, -a10 / d, a00 / d};
}

void validate(const ComplexQuadraticForm& q) {
  const auto& A = q.A;
  const double scale = std::abs(A.a01) + std::abs(A.a10) + 1e-300;
  if (std::abs(A.a01 - A.a10) > 1e-12 * scale) throw std::invalid_argument("quadratic form matrix must be symmetric");
  const double r00 = A.a00.real();
  const double r11 = A.a11.real();
  const double r01 = A.a01.real();
  if (!(r00 > 0.0) || !(r00 * r11 - r01 * r01 > 0.0)) {
    throw std::invalid_argument("real part of the quadratic form must be positive definite");
  }
}

cplx sqrt_det_branch(const Matrix2c& A) {
  const double r00 = A.a00.real(), r01 = A.a01.real(), r11 = A.a11.real();
  const double s00 = A.a00.imag(), s01 = A.a01.imag(), s11 = A.a11.imag();
  const double det_r = r00 * r11 - r01 * r01;

  // R⁻¹S, a real 2x2 matrix similar to the symmetric R^{-1/2} S R^{-1/2}.
  const double m00 = (r11 * s00 - r01 * s01) / det_r;
  const double m01 = (r11 * s01 - r01 * s11) / det_r;
  const double m10 = (r00 * s01 - r01 * s00) / det_r;
  const double m11 = (r00 * s11 - r01 * s01) / det_r;

  const double half_tr = 0.5 * (m00 + m11);
  const double det_m = m00 * m11 - m01 * m10;
  const double disc = std::sqrt(std::max(0.0, half_tr * half_tr - det_m));
  // Stable pair of roots.
  const double s1 = half_tr >= 0.0 ? half_tr + disc : half_tr - disc;
  const double s2 = s1 != 0.0 ? det_m / s1 : 0.0;

  return std::sqrt(det_r) * std::sqrt(cplx(1.0, s1)) * std::sqrt(cplx(1.0, s2));
}

cplx half_quadratic(const Matrix2c& A, const Vector2c& b) {
  const Matrix2c inv = A.inverse();
  const cplx y0 = inv.a00 * b.v0 + inv.a01 * b.v1;
  const cplx y1 = inv.a10 * b.v0 + inv.a11 * b.v1;
  return 0.5 * (b.v0 * y0 + b.v1 * y1);
}

cplx log_gaussian_integral(const ComplexQuadraticForm& q) {
  validate(q);
  return std::log(2.0 * std::numbers::pi) - std::log(sqrt_det_branch(q.A)) + half_quadratic(q.A, q.b) + q.c;
}

cplx gaussian_integral(const ComplexQuadraticForm& q) {
  validate(q);
  return 2.0 * std::numbers::pi / sqrt_det_branch(q.A) * std::exp(half_quadratic(q.A, q.b) + q.c);
}

}  // namespace mirror
