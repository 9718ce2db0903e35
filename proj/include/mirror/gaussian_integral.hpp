#pragma once

// Closed-form two-dimensional complex Gaussian integrals
//
//   I = ∬ exp(-1/2 uᵀ A u + bᵀ u + c) d²u = 2π / sqrt(det A) · exp(1/2 bᵀ A⁻¹ b + c)
//
// for complex symmetric A whose real part is positive definite. The square
// root of det A is taken on the branch continuously connected to the real
// positive root: writing A = R + iS with R > 0,
//   det A = det R · (1 + iσ₁)(1 + iσ₂),
// where σ are the (real) eigenvalues of R⁻¹S, and each factor lies in the
// right half plane so its principal root is unambiguous.

#include <array>
#include <complex>

namespace mirror {

using cplx = std::complex<double>;

struct Matrix2c {
  cplx a00, a01, a10, a11;

  cplx det() const { return a00 * a11 - a01 * a10; }
  Matrix2c inverse() const;
};

struct Vector2c {
  cplx v0, v1;
};

struct ComplexQuadraticForm {
  Matrix2c A;
  Vector2c b;
  cplx c;
};

// Throws std::invalid_argument when A is not symmetric or Re(A) is not
// positive definite.
void validate(const ComplexQuadraticForm& q);

// sqrt(det A) on the continuous branch described above.
cplx sqrt_det_branch(const Matrix2c& A);

// 1/2 bᵀ A⁻¹ b.
cplx half_quadratic(const Matrix2c& A, const Vector2c& b);

cplx gaussian_integral(const ComplexQuadraticForm& q);

// log of the integral; useful when the exponent over- or underflows.
cplx log_gaussian_integral(const ComplexQuadraticForm& q);

}  // namespace mirror
