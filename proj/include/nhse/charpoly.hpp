#pragma once

#include "nhse/model.hpp"
#include "nhse/types.hpp"

#include <vector>

namespace nhse {

/// f(beta, E) = beta^p * det(H(beta) - E), a polynomial in both variables,
/// with p the largest inverse power of beta in H(beta).
/// Coefficients are recovered by exact-degree 2D DFT sampling.
class CharacteristicPolynomial {
 public:
  explicit CharacteristicPolynomial(const LatticeModel& model);

  int beta_degree() const noexcept { return int(coeffs_.rows()) - 1; }
  int energy_degree() const noexcept { return int(coeffs_.cols()) - 1; }
  int beta_shift() const noexcept { return shift_; }
  /// coefficients()(m, n) multiplies beta^m E^n.
  const CMatrix& coefficients() const noexcept { return coeffs_; }
  /// Largest coefficient magnitude after scaling E by the hopping scale.
  double coefficient_scale() const noexcept { return scale_; }
  const LatticeModel& model() const noexcept { return model_; }

  Complex operator()(Complex beta, Complex energy) const { return eval(beta, energy, 0, 0); }
  Complex d_beta(Complex beta, Complex energy) const { return eval(beta, energy, 1, 0); }
  Complex d_energy(Complex beta, Complex energy) const { return eval(beta, energy, 0, 1); }
  Complex d_beta2(Complex beta, Complex energy) const { return eval(beta, energy, 2, 0); }
  Complex d_beta_energy(Complex beta, Complex energy) const { return eval(beta, energy, 1, 1); }
  Complex d_energy2(Complex beta, Complex energy) const { return eval(beta, energy, 0, 2); }

  /// Partial derivative of order (db, de) evaluated at (beta, E).
  Complex eval(Complex beta, Complex energy, int db, int de) const;

  /// Coefficients in beta (ascending) at fixed energy.
  CVector beta_coefficients(Complex energy) const;
  /// Residual |f(beta, E)| relative to the coefficient magnitudes involved.
  double relative_residual(Complex beta, Complex energy) const;

  /// All beta roots at fixed E, ascending by modulus then argument.
  std::vector<Complex> beta_roots(Complex energy) const;

 private:
  LatticeModel model_;
  int shift_ = 0;
  CMatrix coeffs_;
  double scale_ = 1.0;
};

/// Roots of beta^p det(H(beta) - E) = 0 (4 roots for GT), ascending by modulus.
/// Throws DegreeCollapseError when t1 or t2 vanish.
std::vector<Complex> charpoly_beta_roots(const LatticeModel& model, Complex energy);

}  // namespace nhse
