#include "nhse/polynomial.hpp"

#include "nhse/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace nhse {

Complex polyder_val(const CVector& coeffs, Complex z) {
  Complex acc = 0.0;
  for (Index i = coeffs.size() - 1; i >= 1; --i) acc = acc * z + double(i) * coeffs(i);
  return acc;
}

void sort_by_modulus(std::vector<Complex>& roots) {
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (std::abs(ma - mb) > 1e-12 * std::max(ma, mb)) return ma < mb;
    return std::arg(a) < std::arg(b);
  });
}

std::vector<Complex> polynomial_roots(const CVector& coeffs, double collapse_tol) {
  const Index n = coeffs.size() - 1;
  if (n < 1) throw DegreeCollapseError("polynomial_roots: need degree >= 1");
  const double scale = coeffs.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) throw DegreeCollapseError("polynomial_roots: zero polynomial");
  if (std::abs(coeffs(n)) <= collapse_tol * scale)
    throw DegreeCollapseError("polynomial_roots: leading coefficient vanishes");
  if (std::abs(coeffs(0)) <= collapse_tol * scale)
    throw DegreeCollapseError("polynomial_roots: constant coefficient vanishes (root at 0)");

  CMatrix companion = CMatrix::Zero(n, n);
  for (Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (Index i = 0; i < n; ++i) companion(i, n - 1) = -coeffs(i) / coeffs(n);

  Eigen::ComplexEigenSolver<CMatrix> solver(companion, false);
  if (solver.info() != Eigen::Success) throw NumericalError("polynomial_roots: eigensolver failed");

  std::vector<Complex> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  for (Complex& z : roots) {
    for (int it = 0; it < 4; ++it) {
      const Complex f = polyval(coeffs, z);
      const Complex d = polyder_val(coeffs, z);
      if (d == Complex(0.0)) break;
      const Complex step = f / d;
      const Complex candidate = z - step;
      // keep the polish only if it actually reduces the residual
      if (std::abs(polyval(coeffs, candidate)) < std::abs(f)) z = candidate;
      else break;
    }
  }
  sort_by_modulus(roots);
  return roots;
}

}  // namespace nhse
