#pragma once

#include "nhse/types.hpp"

#include <vector>

namespace nhse {

/// Horner evaluation; coefficients in ascending order of power.
template <typename Derived>
Complex polyval(const Eigen::MatrixBase<Derived>& coeffs, Complex z) {
  Complex acc = 0.0;
  for (Index i = coeffs.size() - 1; i >= 0; --i) acc = acc * z + Complex(coeffs(i));
  return acc;
}

Complex polyder_val(const CVector& coeffs, Complex z);

/// Roots of sum_i c_i z^i via companion-matrix eigenvalues, each polished by
/// Newton steps. Sorted by modulus, ties by argument.
/// Throws DegreeCollapseError if the leading or the constant coefficient is
/// negligible relative to the coefficient scale (zero or infinite roots).
std::vector<Complex> polynomial_roots(const CVector& coeffs, double collapse_tol = 1e-14);

/// Sort ascending by modulus, ties (|.| equal to 1e-12 relative) by argument.
void sort_by_modulus(std::vector<Complex>& roots);

}  // namespace nhse
