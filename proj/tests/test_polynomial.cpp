#include "nhse/charpoly.hpp"
#include "nhse/polynomial.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace nhse;

namespace {

CVector from_roots(const std::vector<Complex>& roots, Complex lead) {
  CVector c = CVector::Zero(Index(roots.size()) + 1);
  c(0) = lead;
  Index deg = 0;
  for (const Complex& r : roots) {
    // multiply by (z - r)
    for (Index i = deg + 1; i >= 1; --i) c(i) = c(i - 1) - r * c(i);
    c(0) = -r * c(0);
    ++deg;
  }
  return c;
}

}  // namespace

TEST_CASE("roots of a cubic with known factors") {
  const auto r = polynomial_roots(from_roots({3.0, 1.0, 2.0}, 1.0));
  REQUIRE(r.size() == 3);
  CHECK(std::abs(r[0] - 1.0) < 1e-13);
  CHECK(std::abs(r[1] - 2.0) < 1e-13);
  CHECK(std::abs(r[2] - 3.0) < 1e-13);
}

TEST_CASE("random roots are recovered") {
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Complex> roots;
    const int deg = 2 + trial % 6;
    for (int i = 0; i < deg; ++i) roots.push_back(std::polar(test::uniform(0.2, 3.0), test::uniform(-kPi, kPi)));
    const auto got = polynomial_roots(from_roots(roots, test::random_complex() + 2.0));
    CHECK(test::multiset_distance(got, roots) < 1e-9);
    for (size_t i = 1; i < got.size(); ++i) CHECK(std::abs(got[i]) >= std::abs(got[i - 1]) * (1 - 1e-12));
  }
}

TEST_CASE("collapsed polynomials are rejected") {
  CVector c(3);
  c << 1.0, 2.0, 0.0;
  CHECK_THROWS_AS(polynomial_roots(c), DegreeCollapseError);
  c << 0.0, 2.0, 1.0;
  CHECK_THROWS_AS(polynomial_roots(c), DegreeCollapseError);
}

TEST_CASE("Horner value and derivative") {
  CVector c(4);
  c << 1.0, -2.0, 0.5, 3.0;  // 1 - 2z + 0.5 z^2 + 3 z^3
  const Complex z(0.3, -1.1);
  CHECK(std::abs(polyval(c, z) - (1.0 - 2.0 * z + 0.5 * z * z + 3.0 * z * z * z)) < 1e-14);
  CHECK(std::abs(polyder_val(c, z) - (-2.0 + z + 9.0 * z * z)) < 1e-13);
}

TEST_CASE("characteristic polynomial equals beta^p det(H(beta) - E)") {
  for (int trial = 0; trial < 20; ++trial) {
    const LatticeModel m = test::random_gt(1);
    const CharacteristicPolynomial cp(m);
    CHECK(cp.beta_shift() == 2);
    CHECK(cp.beta_degree() == 4);
    CHECK(cp.energy_degree() == 4);
    const Complex b = std::polar(test::uniform(0.3, 2.0), test::uniform(-kPi, kPi));
    const Complex e = test::random_complex(5.0);
    const CMatrix a = non_bloch_hamiltonian(m, b) - e * CMatrix::Identity(4, 4);
    const Complex oracle = b * b * a.determinant();
    CHECK(std::abs(cp(b, e) - oracle) < 1e-10 * std::max(1.0, std::abs(oracle)));
  }
}

TEST_CASE("characteristic polynomial derivatives match finite differences") {
  const LatticeModel m = test::random_gt(1);
  const CharacteristicPolynomial cp(m);
  const Complex b(0.7, 0.4), e(1.3, -0.2);
  const double h = 1e-5;
  const Complex fb = (cp(b + h, e) - cp(b - h, e)) / (2 * h);
  const Complex fe = (cp(b, e + h) - cp(b, e - h)) / (2 * h);
  CHECK(std::abs(cp.d_beta(b, e) - fb) < 1e-6 * std::max(1.0, std::abs(fb)));
  CHECK(std::abs(cp.d_energy(b, e) - fe) < 1e-6 * std::max(1.0, std::abs(fe)));
  const Complex fbb = (cp.d_beta(b + h, e) - cp.d_beta(b - h, e)) / (2 * h);
  CHECK(std::abs(cp.d_beta2(b, e) - fbb) < 1e-6 * std::max(1.0, std::abs(fbb)));
  const Complex fbe = (cp.d_beta(b, e + h) - cp.d_beta(b, e - h)) / (2 * h);
  CHECK(std::abs(cp.d_beta_energy(b, e) - fbe) < 1e-6 * std::max(1.0, std::abs(fbe)));
}

TEST_CASE("beta roots make H(beta) - E singular") {
  for (int trial = 0; trial < 10; ++trial) {
    const LatticeModel m = test::random_gt(1);
    const Complex e = test::random_complex(3.0);
    const auto roots = charpoly_beta_roots(m, e);
    REQUIRE(roots.size() == 4);
    for (const Complex& b : roots) {
      const CMatrix a = non_bloch_hamiltonian(m, b) - e * CMatrix::Identity(4, 4);
      Eigen::JacobiSVD<CMatrix> svd(a);
      CHECK(svd.singularValues()(3) < 1e-9 * svd.singularValues()(0));
    }
  }
}

TEST_CASE("Hatano-Nelson beta roots solve the quadratic") {
  const LatticeModel m = make_model(Family::HatanoNelson, 1.5, 0.6, 0, 0, 0, 0, 1);
  const Complex e(0.4, 0.1);
  const auto roots = charpoly_beta_roots(m, e);
  REQUIRE(roots.size() == 2);
  // t1 beta^2 - E beta + t2 = 0
  const Complex disc = std::sqrt(e * e - 4.0 * 1.5 * 0.6);
  const std::vector<Complex> oracle = {(e + disc) / 3.0, (e - disc) / 3.0};
  CHECK(test::multiset_distance(roots, oracle) < 1e-13);
}

TEST_CASE("Hermitian models pair roots beta and 1/conj(beta)") {
  for (int trial = 0; trial < 10; ++trial) {
    LatticeModel m = test::random_gt(1);
    m.t4 = m.t3;
    const double e = test::uniform(-2.0, 2.0);
    const auto roots = charpoly_beta_roots(m, Complex(e));
    std::vector<Complex> mirrored;
    for (const Complex& b : roots) mirrored.push_back(1.0 / std::conj(b));
    CHECK(test::multiset_distance(roots, mirrored) < 1e-8);
  }
}

TEST_CASE("vanishing t1 collapses the beta degree") {
  LatticeModel m = test::random_gt(1);
  m.t1 = 0.0;  // bypasses validation on purpose
  CHECK_THROWS_AS(charpoly_beta_roots(m, Complex(0.5, 0.1)), DegreeCollapseError);
}
