#include "nhse/charpoly.hpp"

#include "nhse/polynomial.hpp"

#include <Eigen/LU>

#include <cmath>

namespace nhse {

namespace {

double falling(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= double(n - i);
  return r;
}

}  // namespace

CharacteristicPolynomial::CharacteristicPolynomial(const LatticeModel& model) : model_(model) {
  const LaurentDegree deg = laurent_degree(model);
  shift_ = deg.lowest;
  const int kb = deg.lowest + deg.highest + 1;
  const int ke = model.sites_per_cell() + 1;
  const double radius = std::max(1.0, model.hopping_scale());

  CMatrix samples(kb, ke);
  for (int i = 0; i < kb; ++i) {
    const Complex beta = std::polar(1.0, kTwoPi * i / kb);
    const CMatrix h = non_bloch_hamiltonian(model, beta);
    const Complex bp = std::pow(beta, shift_);
    for (int j = 0; j < ke; ++j) {
      const Complex energy = radius * std::polar(1.0, kTwoPi * j / ke);
      CMatrix a = h;
      a.diagonal().array() -= energy;
      samples(i, j) = bp * a.determinant();
    }
  }

  // forward DFT along both axes: samples = sum_mn A_mn w_b^{mi} (R w_e^j)^n
  coeffs_.resize(kb, ke);
  for (int m = 0; m < kb; ++m) {
    for (int n = 0; n < ke; ++n) {
      Complex acc = 0.0;
      for (int i = 0; i < kb; ++i)
        for (int j = 0; j < ke; ++j)
          acc += samples(i, j) *
                 std::polar(1.0, -kTwoPi * (double(m) * i / kb + double(n) * j / ke));
      coeffs_(m, n) = acc / double(kb * ke) / std::pow(radius, n);
    }
  }
  scale_ = 0.0;
  for (int m = 0; m < kb; ++m)
    for (int n = 0; n < ke; ++n) scale_ = std::max(scale_, std::abs(coeffs_(m, n)) * std::pow(radius, n));
  // DFT round-off leaves ~eps*scale noise in coefficients that are exactly zero
  for (int m = 0; m < kb; ++m)
    for (int n = 0; n < ke; ++n)
      if (std::abs(coeffs_(m, n)) * std::pow(radius, n) < 1e-14 * scale_) coeffs_(m, n) = 0.0;
}

Complex CharacteristicPolynomial::eval(Complex beta, Complex energy, int db, int de) const {
  Complex acc = 0.0;
  for (Index m = coeffs_.rows() - 1; m >= db; --m) {
    Complex row = 0.0;
    for (Index n = coeffs_.cols() - 1; n >= de; --n)
      row = row * energy + falling(int(n), de) * coeffs_(m, n);
    acc = acc * beta + falling(int(m), db) * row;
  }
  return acc;
}

CVector CharacteristicPolynomial::beta_coefficients(Complex energy) const {
  CVector c(coeffs_.rows());
  for (Index m = 0; m < coeffs_.rows(); ++m) c(m) = polyval(coeffs_.row(m).transpose(), energy);
  return c;
}

double CharacteristicPolynomial::relative_residual(Complex beta, Complex energy) const {
  double mag = 0.0;
  const double ab = std::abs(beta), ae = std::abs(energy);
  for (Index m = 0; m < coeffs_.rows(); ++m)
    for (Index n = 0; n < coeffs_.cols(); ++n)
      mag += std::abs(coeffs_(m, n)) * std::pow(ab, double(m)) * std::pow(ae, double(n));
  return std::abs((*this)(beta, energy)) / std::max(mag, 1e-300);
}

std::vector<Complex> CharacteristicPolynomial::beta_roots(Complex energy) const {
  return polynomial_roots(beta_coefficients(energy), 1e-12);
}

std::vector<Complex> charpoly_beta_roots(const LatticeModel& model, Complex energy) {
  return CharacteristicPolynomial(model).beta_roots(energy);
}

}  // namespace nhse
