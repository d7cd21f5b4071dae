#pragma once

#include "nhse/errors.hpp"
#include "nhse/types.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace nhse {

enum class Family { GT, HatanoNelson, NHSSH };
enum class BoundaryCondition { Open, Periodic };

// Intrinsic oscillator damping and the attenuated damping window, in rad/s.
inline constexpr double kIntrinsicDamping = 2.64;
inline constexpr double kAttenuatedDampingMin = kTwoPi * 0.49;
inline constexpr double kAttenuatedDampingMax = kTwoPi * 1.06;

/// Parameters of a one-dimensional tight-binding chain. All rates in rad/s.
///
/// GT: four sites per cell, reciprocal SSH hoppings t1/t2 along the two chains
/// and the nonreciprocal rungs t3 (site 1 -> 2, 4 -> 3) and t4 (2 -> 1, 3 -> 4).
/// HatanoNelson: one site per cell, leftward amplitude t1, rightward t2.
/// NHSSH: two sites per cell, intra-cell t1 -/+ delta, inter-cell t2.
struct LatticeModel {
  Family family = Family::GT;
  double t1 = 1.0;
  double t2 = 1.0;
  double t3 = 1.0;
  double t4 = 1.0;
  double omega0 = 0.0;
  double gamma = 0.0;
  int n_cells = 1;
  BoundaryCondition bc = BoundaryCondition::Open;
  std::optional<double> delta;  // NHSSH nonreciprocity; default 0.5 * min(t1, t2)

  int sites_per_cell() const noexcept;
  int n_sites() const noexcept { return sites_per_cell() * n_cells; }
  double delta_t() const noexcept { return t3 - t4; }
  double nhssh_delta() const noexcept;
  bool is_hermitian() const noexcept;
  /// Sum of hopping magnitudes; an upper bound on the bulk spectral radius.
  double hopping_scale() const noexcept;

  LatticeModel with_gamma(double g) const;
  LatticeModel with_cells(int n) const;
  LatticeModel with_bc(BoundaryCondition b) const;
  LatticeModel with_rungs(double new_t3, double new_t4) const;
};

/// Throws ValidationError if the model violates a parameter invariant.
void validate(const LatticeModel& model);

LatticeModel make_model(Family family, double t1, double t2, double t3, double t4,
                        double omega0, double gamma, int n_cells,
                        BoundaryCondition bc = BoundaryCondition::Open);

enum class SymmetryOp { Mx, My, P, G };

LatticeModel apply_symmetry(const LatticeModel& model, SymmetryOp op);

std::string_view to_string(Family family);
std::string_view to_string(BoundaryCondition bc);
std::string_view to_string(SymmetryOp op);
Family parse_family(std::string_view text);
BoundaryCondition parse_boundary(std::string_view text);

/// Laurent-polynomial bounds of the non-Bloch Hamiltonian in beta.
struct LaurentDegree {
  int lowest;   // most negative power of beta in det(H(beta) - E), as a positive count
  int highest;  // most positive power
};
LaurentDegree laurent_degree(const LatticeModel& model);

// ---------------------------------------------------------------------------
// Hamiltonians. omega0 never enters; damping enters only the real-space form.

template <typename Real = double>
CMatrixT<Real> non_bloch_hamiltonian(const LatticeModel& m, std::complex<Real> beta) {
  using C = std::complex<Real>;
  if (beta == C(0)) throw DomainError("non_bloch_hamiltonian: beta = 0 is a pole of H(beta)");
  const Real t1 = Real(m.t1), t2 = Real(m.t2), t3 = Real(m.t3), t4 = Real(m.t4);
  const C inv = Real(1) / beta;
  switch (m.family) {
    case Family::GT: {
      CMatrixT<Real> h = CMatrixT<Real>::Zero(4, 4);
      h(0, 1) = t4;
      h(0, 2) = t2 + t1 * inv;
      h(1, 0) = t3;
      h(1, 3) = t1 + t2 * inv;
      h(2, 0) = t2 + t1 * beta;
      h(2, 3) = t3;
      h(3, 1) = t1 + t2 * beta;
      h(3, 2) = t4;
      return h;
    }
    case Family::HatanoNelson: {
      CMatrixT<Real> h(1, 1);
      h(0, 0) = t1 * beta + t2 * inv;
      return h;
    }
    case Family::NHSSH: {
      const Real d = Real(m.nhssh_delta());
      CMatrixT<Real> h = CMatrixT<Real>::Zero(2, 2);
      h(0, 1) = (t1 - d) + t2 * inv;
      h(1, 0) = (t1 + d) + t2 * beta;
      return h;
    }
  }
  return {};
}

template <typename Real = double>
CMatrixT<Real> bloch_hamiltonian(const LatticeModel& m, Real k) {
  using C = std::complex<Real>;
  const Real t1 = Real(m.t1), t2 = Real(m.t2), t3 = Real(m.t3), t4 = Real(m.t4);
  const C ep = std::polar(Real(1), k);
  const C em = std::polar(Real(1), -k);
  switch (m.family) {
    case Family::GT: {
      CMatrixT<Real> h = CMatrixT<Real>::Zero(4, 4);
      h(0, 1) = t4;
      h(0, 2) = t2 + t1 * em;
      h(1, 0) = t3;
      h(1, 3) = t1 + t2 * em;
      h(2, 0) = t2 + t1 * ep;
      h(2, 3) = t3;
      h(3, 1) = t1 + t2 * ep;
      h(3, 2) = t4;
      return h;
    }
    case Family::HatanoNelson: {
      CMatrixT<Real> h(1, 1);
      h(0, 0) = t1 * ep + t2 * em;
      return h;
    }
    case Family::NHSSH: {
      const Real d = Real(m.nhssh_delta());
      CMatrixT<Real> h = CMatrixT<Real>::Zero(2, 2);
      h(0, 1) = (t1 - d) + t2 * em;
      h(1, 0) = (t1 + d) + t2 * ep;
      return h;
    }
  }
  return {};
}

/// Real-space Hamiltonian. Global site index = sites_per_cell * cell + local index.
template <typename Real = double>
CMatrixT<Real> real_space_hamiltonian(const LatticeModel& m) {
  validate(m);
  using C = std::complex<Real>;
  const Index s = m.sites_per_cell();
  const Index n = m.n_cells;
  const Index dim = s * n;
  const Real t1 = Real(m.t1), t2 = Real(m.t2), t3 = Real(m.t3), t4 = Real(m.t4);
  const bool periodic = m.bc == BoundaryCondition::Periodic;

  CMatrixT<Real> h = CMatrixT<Real>::Zero(dim, dim);
  h.diagonal().setConstant(C(0, -Real(m.gamma)));

  for (Index c = 0; c < n; ++c) {
    const Index o = s * c;
    switch (m.family) {
      case Family::GT:
        h(o + 0, o + 1) += t4;
        h(o + 1, o + 0) += t3;
        h(o + 0, o + 2) += t2;
        h(o + 2, o + 0) += t2;
        h(o + 1, o + 3) += t1;
        h(o + 3, o + 1) += t1;
        h(o + 2, o + 3) += t3;
        h(o + 3, o + 2) += t4;
        break;
      case Family::HatanoNelson:
        break;
      case Family::NHSSH: {
        const Real d = Real(m.nhssh_delta());
        h(o + 0, o + 1) += t1 - d;
        h(o + 1, o + 0) += t1 + d;
        break;
      }
    }
    if (c + 1 == n && !periodic) continue;
    const Index q = s * ((c + 1) % n);
    switch (m.family) {
      case Family::GT:
        // site 3 of cell c <-> site 1 of cell c+1 (t1); site 4 <-> site 2 (t2)
        h(q + 0, o + 2) += t1;
        h(o + 2, q + 0) += t1;
        h(q + 1, o + 3) += t2;
        h(o + 3, q + 1) += t2;
        break;
      case Family::HatanoNelson:
        h(q, o) += t2;
        h(o, q) += t1;
        break;
      case Family::NHSSH:
        h(q + 0, o + 1) += t2;
        h(o + 1, q + 0) += t2;
        break;
    }
  }
  return h;
}

}  // namespace nhse
