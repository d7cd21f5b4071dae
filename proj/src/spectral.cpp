#include "nhse/spectral.hpp"

#include "nhse/charpoly.hpp"

#include <algorithm>
#include <cmath>

namespace nhse {

namespace {

CVector eigenvalues_of(const CMatrix& h) {
  Eigen::ComplexEigenSolver<CMatrix> es(h, false);
  if (es.info() != Eigen::Success) throw NumericalError("eigenvalue solver failed");
  return es.eigenvalues();
}

CMatrix balanced(const CMatrix& h, const std::vector<double>& w) {
  CMatrix a = h;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) a(i, j) *= w[size_t(j)] / w[size_t(i)];
  return a;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + long(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + long(mid)));
  return m;
}

double radius_from(const CharacteristicPolynomial& cp, const CVector& energies) {
  const size_t p = size_t(cp.beta_shift());
  std::vector<double> logs;
  logs.reserve(size_t(energies.size()));
  for (Index i = 0; i < energies.size(); ++i) {
    try {
      const auto roots = cp.beta_roots(energies(i));
      logs.push_back(0.5 * (std::log(std::abs(roots[p - 1])) + std::log(std::abs(roots[p]))));
    } catch (const DomainError&) {
    }
  }
  return std::exp(median(std::move(logs)));
}

}  // namespace

std::vector<double> skin_balance_weights(const LatticeModel& model, double radius) {
  const int s = model.sites_per_cell();
  const double mid = 0.5 * (model.n_cells - 1);
  std::vector<double> w(size_t(model.n_sites()));
  for (int c = 0; c < model.n_cells; ++c)
    for (int a = 0; a < s; ++a) w[size_t(c * s + a)] = std::pow(radius, double(c) - mid);
  return w;
}

double skin_balance_radius(const LatticeModel& model) {
  if (model.is_hermitian()) return 1.0;
  // the radius converges quickly with length; a short probe chain suffices
  const int probe_cells = std::min(model.n_cells, (40 + model.sites_per_cell() - 1) / model.sites_per_cell());
  const LatticeModel m =
      model.with_gamma(0.0).with_bc(BoundaryCondition::Open).with_cells(probe_cells);
  const CharacteristicPolynomial cp(m);
  const CMatrix h = real_space_hamiltonian(m);
  double r = radius_from(cp, eigenvalues_of(h));
  if (!(r > 0.0) || !std::isfinite(r)) return 1.0;
  // one refinement pass on the balanced matrix, whose eigenvalues are more accurate
  const double r2 = radius_from(cp, eigenvalues_of(balanced(h, skin_balance_weights(m, r))));
  if (r2 > 0.0 && std::isfinite(r2)) r = r2;
  return r;
}

Spectrum obc_spectrum(const LatticeModel& model) {
  const LatticeModel m = model.with_bc(BoundaryCondition::Open);
  const CMatrix h = real_space_hamiltonian(m);
  Spectrum s;
  if (m.is_hermitian()) {
    s = eig_biorthogonal(h);
  } else {
    s = eig_biorthogonal(h, skin_balance_weights(m, skin_balance_radius(m)));
  }
  s.source = SpectrumSource::OBC;
  return s;
}

CVector obc_eigenvalues(const LatticeModel& model) {
  const LatticeModel m = model.with_bc(BoundaryCondition::Open);
  CMatrix h = real_space_hamiltonian(m);
  if (!m.is_hermitian()) h = balanced(h, skin_balance_weights(m, skin_balance_radius(m)));
  CVector ev = eigenvalues_of(h);
  const auto order = eigenvalue_order<double>(ev);
  CVector sorted(ev.size());
  for (Index k = 0; k < ev.size(); ++k) sorted(k) = ev(order[size_t(k)]);
  return sorted;
}

Spectrum non_bloch_spectrum(const LatticeModel& model, Complex beta) {
  Spectrum s = eig_biorthogonal(non_bloch_hamiltonian(model, beta));
  s.source = SpectrumSource::NonBloch;
  s.beta = beta;
  return s;
}

Spectrum pbc_spectrum(const LatticeModel& model, int n_k) {
  validate(model);
  if (n_k < 1) throw ValidationError("pbc_spectrum: n_k must be >= 1");
  const Index s = model.sites_per_cell();
  const Index dim = s * n_k;
  CVector ev(dim);
  CMatrix right = CMatrix::Zero(dim, dim), left = CMatrix::Zero(dim, dim);
  double worst_condition = 1.0;
  const double norm = 1.0 / std::sqrt(double(n_k));
  for (int mk = 0; mk < n_k; ++mk) {
    const double k = kTwoPi * mk / n_k;
    const Spectrum b = eig_biorthogonal(bloch_hamiltonian(model, k));
    worst_condition = std::max(worst_condition, b.condition);
    for (Index j = 0; j < s; ++j) {
      const Index col = mk * s + j;
      ev(col) = b.eigenvalues(j) - Complex(0.0, model.gamma);
      for (int x = 0; x < n_k; ++x) {
        const Complex phase = std::polar(norm, k * x);
        right.block(x * s, col, s, 1) = phase * b.right.col(j);
        left.block(x * s, col, s, 1) = phase * b.left.col(j);
      }
    }
  }
  Spectrum out;
  const auto order = eigenvalue_order<double>(ev);
  out.eigenvalues.resize(dim);
  out.right.resize(dim, dim);
  out.left.resize(dim, dim);
  for (Index k = 0; k < dim; ++k) {
    out.eigenvalues(k) = ev(order[size_t(k)]);
    out.right.col(k) = right.col(order[size_t(k)]);
    out.left.col(k) = left.col(order[size_t(k)]);
  }
  out.source = SpectrumSource::PBC;
  out.condition = worst_condition;
  out.near_exceptional = worst_condition > kExceptionalCondition;
  return out;
}

double gt_symmetry_defect(const CVector& ev) {
  const Index n = ev.size();
  std::vector<bool> used(size_t(n), false);
  double worst = 0.0;
  for (Index i = 0; i < n; ++i) {
    const Complex target = -std::conj(ev(i));
    Index best = -1;
    double bd = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (used[size_t(j)]) continue;
      const double d = std::abs(ev(j) - target);
      if (best < 0 || d < bd) {
        best = j;
        bd = d;
      }
    }
    used[size_t(best)] = true;
    worst = std::max(worst, bd);
  }
  return worst;
}

}  // namespace nhse
