#pragma once

#include "nhse/errors.hpp"
#include "nhse/model.hpp"
#include "nhse/types.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace nhse {

enum class SpectrumSource { Matrix, OBC, PBC, NonBloch };

inline constexpr double kExceptionalCondition = 1e8;

/// Eigenvalues with paired right/left eigenvectors (columns), normalized so
/// that left.col(i).adjoint() * right.col(j) == delta_ij.
template <typename Real>
struct BasicSpectrum {
  CVectorT<Real> eigenvalues;
  CMatrixT<Real> right;
  CMatrixT<Real> left;
  SpectrumSource source = SpectrumSource::Matrix;
  std::complex<Real> beta{1};  // meaningful only for NonBloch
  Real condition{1};           // eigenvector-matrix condition number (balanced basis)
  bool near_exceptional = false;

  Index size() const noexcept { return eigenvalues.size(); }
  Real max_abs_im() const { return eigenvalues.imag().cwiseAbs().maxCoeff(); }
  Real max_abs_re() const { return eigenvalues.real().cwiseAbs().maxCoeff(); }
  Real max_im() const { return eigenvalues.imag().maxCoeff(); }
  Real spectral_radius() const { return eigenvalues.cwiseAbs().maxCoeff(); }
};
using Spectrum = BasicSpectrum<double>;

/// Ascending Re, ties (Re equal after quantization) by ascending Im.
template <typename Real>
std::vector<Index> eigenvalue_order(const CVectorT<Real>& ev) {
  std::vector<Index> idx(size_t(ev.size()));
  std::iota(idx.begin(), idx.end(), Index(0));
  const Real q = Real(1e-9) * std::max(Real(1), ev.size() ? ev.cwiseAbs().maxCoeff() : Real(1));
  auto key = [&](Index i) { return std::llround(double(ev(i).real() / q)); };
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) {
    const auto ka = key(a), kb = key(b);
    if (ka != kb) return ka < kb;
    return ev(a).imag() < ev(b).imag();
  });
  return idx;
}

/// Biorthogonal eigendecomposition of a dense complex matrix.
///
/// `balance` is an optional positive diagonal similarity S (one entry per row):
/// the decomposition is carried out on S^-1 H S, which leaves the eigenvalues
/// unchanged but can tame the exponential eigenvector profiles of skin modes.
/// The returned vectors are mapped back to the original basis.
template <typename Real>
BasicSpectrum<Real> eig_biorthogonal(const CMatrixT<Real>& h,
                                     const std::vector<Real>& balance = {},
                                     Real exceptional_threshold = Real(kExceptionalCondition)) {
  using C = std::complex<Real>;
  using Mat = CMatrixT<Real>;
  using Vec = CVectorT<Real>;
  if (h.rows() != h.cols()) throw ValidationError("eig_biorthogonal: matrix must be square");
  if (!h.allFinite()) throw ValidationError("eig_biorthogonal: non-finite entries");
  const Index n = h.rows();
  const bool balanced = !balance.empty();
  if (balanced && Index(balance.size()) != n)
    throw ValidationError("eig_biorthogonal: balance length mismatch");

  Mat a = h;
  if (balanced)
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) a(i, j) *= balance[size_t(j)] / balance[size_t(i)];

  BasicSpectrum<Real> out;
  Vec ev;
  Mat rs, ls;
  const Real hnorm = std::max(a.cwiseAbs().maxCoeff(), std::numeric_limits<Real>::min());
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() <= Real(1e-14) * hnorm) {
    Eigen::SelfAdjointEigenSolver<Mat> es(a);
    if (es.info() != Eigen::Success) throw NumericalError("eig_biorthogonal: solver failed");
    ev = es.eigenvalues().template cast<C>();
    rs = es.eigenvectors();
    ls = rs;
    out.condition = Real(1);
  } else {
    Eigen::ComplexEigenSolver<Mat> es(a, true);
    if (es.info() != Eigen::Success) throw NumericalError("eig_biorthogonal: solver failed");
    ev = es.eigenvalues();
    rs = es.eigenvectors();
    for (Index j = 0; j < n; ++j) rs.col(j).normalize();
    Eigen::BDCSVD<Mat> svd(rs);
    const auto& sv = svd.singularValues();
    out.condition = sv(n - 1) > Real(0) ? sv(0) / sv(n - 1) : std::numeric_limits<Real>::infinity();
    Eigen::PartialPivLU<Mat> lu(rs);
    ls = lu.inverse().adjoint();
  }
  out.near_exceptional = !(out.condition <= exceptional_threshold);

  if (balanced) {
    for (Index i = 0; i < n; ++i) {
      rs.row(i) *= balance[size_t(i)];
      ls.row(i) /= balance[size_t(i)];
    }
    for (Index j = 0; j < n; ++j) {
      const Real nr = rs.col(j).norm();
      rs.col(j) /= nr;
      ls.col(j) *= nr;
    }
  }

  const auto order = eigenvalue_order<Real>(ev);
  out.eigenvalues.resize(n);
  out.right.resize(n, n);
  out.left.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    const Index j = order[size_t(k)];
    out.eigenvalues(k) = ev(j);
    out.right.col(k) = rs.col(j);
    out.left.col(k) = ls.col(j);
  }
  return out;
}

/// max_{i,j} |<L_i|R_j> - delta_ij|.
template <typename Real>
Real biorthogonality_residual(const BasicSpectrum<Real>& s) {
  const Index n = s.size();
  return (s.left.adjoint() * s.right - CMatrixT<Real>::Identity(n, n)).cwiseAbs().maxCoeff();
}

/// max_j ||H r_j - E_j r_j|| / (||H|| ||r_j||).
template <typename Real>
Real eigen_residual(const CMatrixT<Real>& h, const BasicSpectrum<Real>& s) {
  const Real hn = std::max(h.norm(), std::numeric_limits<Real>::min());
  Real worst = 0;
  for (Index j = 0; j < s.size(); ++j) {
    const auto r = s.right.col(j);
    worst = std::max(worst, (h * r - s.eigenvalues(j) * r).norm() / (hn * r.norm()));
  }
  return worst;
}

/// Geometric-mean GBZ radius of the OBC bulk, used to balance skin modes.
/// Computed from the beta roots of the OBC eigenvalues (gamma removed).
double skin_balance_radius(const LatticeModel& model);

/// Per-site balancing weights r^(cell - (N-1)/2).
std::vector<double> skin_balance_weights(const LatticeModel& model, double radius);

/// Spectrum of the open chain (bc forced to OBC), damping included.
Spectrum obc_spectrum(const LatticeModel& model);
/// Eigenvalues only, without eigenvectors.
CVector obc_eigenvalues(const LatticeModel& model);

/// Union of Bloch spectra at k = 2 pi m / n_k, m = 0..n_k-1, shifted by -i gamma.
/// Eigenvectors are the Bloch states embedded as plane waves on an n_k-cell ring.
Spectrum pbc_spectrum(const LatticeModel& model, int n_k);

/// Biorthogonal eigensystem of the non-Bloch Hamiltonian H(beta) (no damping).
Spectrum non_bloch_spectrum(const LatticeModel& model, Complex beta);

/// Pairs every E with some -conj(E); returns the worst pairing distance.
double gt_symmetry_defect(const CVector& eigenvalues);

struct GapReport {
  double line_gap_width = 0.0;  // rad/s
  int in_gap_mode_count = 0;
  bool is_real_spectrum = false;
  double max_abs_im = 0.0;  // rad/s, damping removed
  double tol_im = 0.0;
  double tol_gap = 0.0;
  bool near_exceptional = false;
};

struct GapTolerances {
  double tol_im = -1.0;   // negative: 1e-6 x spectral radius
  double tol_gap = -1.0;  // negative: 1e-3 x spectral radius
};

/// Bulk line gap from the non-Bloch bands on the GBZ, in-gap OBC modes, and
/// realness of the OBC spectrum. Evaluated at gamma = 0.
GapReport gap_report(const LatticeModel& model, GapTolerances tol = {});

}  // namespace nhse
