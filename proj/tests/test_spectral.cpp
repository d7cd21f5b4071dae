#include "nhse/spectral.hpp"
#include "support.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

using namespace nhse;

TEST_CASE("2x2 nonnormal matrix has a biorthogonal eigensystem") {
  CMatrix h(2, 2);
  h << 0.0, 2.0, 1.0, 0.0;
  const Spectrum s = eig_biorthogonal(h);
  CHECK(std::abs(s.eigenvalues(0) + std::sqrt(2.0)) < 1e-14);
  CHECK(std::abs(s.eigenvalues(1) - std::sqrt(2.0)) < 1e-14);
  CHECK(biorthogonality_residual(s) < 1e-14);
  CHECK(eigen_residual(h, s) < 1e-14);
  // right eigenvector of +sqrt2 is proportional to (sqrt2, 1)
  const CVector r = s.right.col(1);
  CHECK(std::abs(r(0) / r(1) - std::sqrt(2.0)) < 1e-13);
  CHECK_FALSE(s.near_exceptional);
}

TEST_CASE("defective matrix is flagged as near exceptional") {
  CMatrix h(2, 2);
  h << 0.0, 1.0, 0.0, 0.0;
  const Spectrum s = eig_biorthogonal(h);
  CHECK(s.near_exceptional);
}

TEST_CASE("Hatano-Nelson OBC spectrum follows the cosine law") {
  const double t1 = 1.7, t2 = 0.4;
  const int n = 12;
  const LatticeModel m = make_model(Family::HatanoNelson, t1, t2, 0, 0, 0, 0, n);
  const Spectrum s = obc_spectrum(m);
  std::vector<Complex> oracle;
  for (int j = 1; j <= n; ++j) oracle.push_back(2.0 * std::sqrt(t1 * t2) * std::cos(j * kPi / (n + 1)));
  CHECK(test::multiset_distance(test::to_std(s.eigenvalues), oracle) < 1e-10);
  CHECK(biorthogonality_residual(s) < 1e-8);
}

TEST_CASE("PBC spectrum is the union of Bloch spectra") {
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 6;
    const LatticeModel m = test::random_gt(n).with_bc(BoundaryCondition::Periodic);
    const Spectrum s = pbc_spectrum(m, n);
    Eigen::ComplexEigenSolver<CMatrix> direct(real_space_hamiltonian(m));
    CHECK(test::multiset_distance(test::to_std(s.eigenvalues), test::to_std(direct.eigenvalues())) < 1e-10);
    std::vector<Complex> bloch;
    for (int k = 0; k < n; ++k) {
      Eigen::ComplexEigenSolver<CMatrix> es(bloch_hamiltonian(m, kTwoPi * k / n));
      for (Index i = 0; i < 4; ++i) bloch.push_back(es.eigenvalues()(i));
    }
    CHECK(test::multiset_distance(test::to_std(s.eigenvalues), bloch) < 1e-10);
  }
}

TEST_CASE("uniform damping shifts every eigenvalue by -i gamma") {
  for (int trial = 0; trial < 5; ++trial) {
    const LatticeModel m = test::random_gt(5);
    const double gamma = test::uniform(0.1, 5.0);
    const CVector e0 = obc_eigenvalues(m);
    const CVector eg = obc_eigenvalues(m.with_gamma(gamma));
    CHECK(test::multiset_distance(test::to_std(eg), test::to_std((e0.array() - Complex(0, gamma)).matrix())) <
          1e-9 * m.hopping_scale());
  }
}

TEST_CASE("Hermitian GT chains have a real spectrum and orthonormal modes") {
  LatticeModel m = test::random_gt(8);
  m.t4 = m.t3;
  const Spectrum s = obc_spectrum(m);
  CHECK(s.max_abs_im() < 1e-12);
  CHECK((s.right.adjoint() * s.right - CMatrix::Identity(32, 32)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(biorthogonality_residual(s) < 1e-12);
}

TEST_CASE("random GT chains: biorthogonality and eigen residuals") {
  for (int trial = 0; trial < 20; ++trial) {
    const LatticeModel m = test::random_gt(10);
    const CMatrix h = real_space_hamiltonian(m);
    const Spectrum s = obc_spectrum(m);
    if (s.near_exceptional) continue;
    CHECK(biorthogonality_residual(s) < 1e-8);
    CHECK(eigen_residual(h, s) < 1e-10);
  }
}

TEST_CASE("GT OBC spectrum is symmetric under E -> -conj(E)") {
  for (int trial = 0; trial < 20; ++trial) {
    const LatticeModel m = test::random_gt(10);
    const CVector e = obc_eigenvalues(m);
    CHECK(gt_symmetry_defect(e) < 1e-8 * std::max(1.0, e.cwiseAbs().maxCoeff()));
    std::vector<Complex> mirrored;
    for (Index i = 0; i < e.size(); ++i) mirrored.push_back(-std::conj(e(i)));
    CHECK(test::multiset_distance(test::to_std(e), mirrored) < 1e-8 * std::max(1.0, e.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("eigenvalues come sorted by real part") {
  const Spectrum s = obc_spectrum(test::random_gt(6));
  for (Index i = 1; i < s.size(); ++i)
    CHECK(s.eigenvalues(i).real() >= s.eigenvalues(i - 1).real() - 1e-9 * s.spectral_radius());
}

TEST_CASE("non-Bloch spectrum solves H(beta)") {
  const LatticeModel m = test::random_gt(1);
  const Complex b(0.6, -0.3);
  const Spectrum s = non_bloch_spectrum(m, b);
  CHECK(eigen_residual(non_bloch_hamiltonian(m, b), s) < 1e-12);
  CHECK(biorthogonality_residual(s) < 1e-10);
}

TEST_CASE("extended precision agrees with double") {
  const LatticeModel m = test::phase_a();
  const auto hl = real_space_hamiltonian<long double>(m.with_gamma(0.0));
  const auto sl = eig_biorthogonal<long double>(hl);
  const CVector e = obc_eigenvalues(m.with_gamma(0.0));
  std::vector<Complex> el;
  for (Index i = 0; i < sl.size(); ++i) el.emplace_back(double(sl.eigenvalues(i).real()), double(sl.eigenvalues(i).imag()));
  CHECK(test::multiset_distance(test::to_std(e), el) < 1e-8);
}

TEST_CASE("Hermitian line gap matches the Bloch band edge") {
  const LatticeModel m = make_model(Family::GT, 0.5, 1.0, 0.7, 0.7, 0.0, 0.0, 10);
  double edge = 1e300;
  for (int k = 0; k <= 20000; ++k) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(bloch_hamiltonian(m, kPi * k / 20000.0));
    edge = std::min(edge, es.eigenvalues().cwiseAbs().minCoeff());
  }
  const GapReport g = gap_report(m);
  CHECK(g.is_real_spectrum);
  CHECK(g.line_gap_width == doctest::Approx(2.0 * edge).epsilon(1e-4));
}

TEST_CASE("phase A reports an open line gap near 3.3 Hz") {
  const GapReport g = gap_report(test::phase_a());
  CHECK_FALSE(g.is_real_spectrum);
  CHECK(g.line_gap_width / kTwoPi == doctest::Approx(3.3).epsilon(0.07));
  CHECK(g.in_gap_mode_count >= 0);
}

TEST_CASE("phase B closes the line gap") {
  const GapReport g = gap_report(test::phase_b());
  CHECK_FALSE(g.is_real_spectrum);
  CHECK(g.line_gap_width == 0.0);
}

TEST_CASE("gap report ignores damping") {
  const GapReport a = gap_report(test::phase_a().with_gamma(0.0));
  const GapReport b = gap_report(test::phase_a().with_gamma(7.0));
  CHECK(a.line_gap_width == doctest::Approx(b.line_gap_width).epsilon(1e-9));
  CHECK(a.max_abs_im == doctest::Approx(b.max_abs_im).epsilon(1e-8));
}
