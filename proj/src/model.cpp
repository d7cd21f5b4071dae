#include "nhse/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nhse {

int LatticeModel::sites_per_cell() const noexcept {
  switch (family) {
    case Family::GT: return 4;
    case Family::HatanoNelson: return 1;
    case Family::NHSSH: return 2;
  }
  return 4;
}

double LatticeModel::nhssh_delta() const noexcept {
  return delta ? *delta : 0.5 * std::min(t1, t2);
}

bool LatticeModel::is_hermitian() const noexcept {
  switch (family) {
    case Family::GT: return t3 == t4;
    case Family::HatanoNelson: return t1 == t2;
    case Family::NHSSH: return nhssh_delta() == 0.0;
  }
  return false;
}

double LatticeModel::hopping_scale() const noexcept {
  switch (family) {
    case Family::GT: return t1 + t2 + std::max(t3, t4);
    case Family::HatanoNelson: return t1 + t2;
    case Family::NHSSH: return t1 + nhssh_delta() + t2;
  }
  return 0.0;
}

LatticeModel LatticeModel::with_gamma(double g) const {
  LatticeModel m = *this;
  m.gamma = g;
  return m;
}

LatticeModel LatticeModel::with_cells(int n) const {
  LatticeModel m = *this;
  m.n_cells = n;
  return m;
}

LatticeModel LatticeModel::with_bc(BoundaryCondition b) const {
  LatticeModel m = *this;
  m.bc = b;
  return m;
}

LatticeModel LatticeModel::with_rungs(double new_t3, double new_t4) const {
  LatticeModel m = *this;
  m.t3 = new_t3;
  m.t4 = new_t4;
  return m;
}

namespace {

void require_positive(const char* name, double v) {
  if (!std::isfinite(v) || !(v > 0.0))
    throw ValidationError(std::string(name) + " must be a finite positive hopping, got " +
                          std::to_string(v));
}

}  // namespace

void validate(const LatticeModel& m) {
  require_positive("t1", m.t1);
  require_positive("t2", m.t2);
  if (m.family == Family::GT) {
    require_positive("t3", m.t3);
    require_positive("t4", m.t4);
  }
  if (m.family == Family::NHSSH) {
    const double d = m.nhssh_delta();
    if (!std::isfinite(d) || d < 0.0) throw ValidationError("delta must be finite and >= 0");
    if (!(m.t1 - d > 0.0)) throw ValidationError("NHSSH requires t1 - delta > 0");
  }
  if (!std::isfinite(m.gamma) || m.gamma < 0.0) throw ValidationError("gamma must be >= 0");
  if (!std::isfinite(m.omega0) || m.omega0 < 0.0) throw ValidationError("omega0 must be >= 0");
  if (m.n_cells < 1) throw ValidationError("n_cells must be >= 1");
}

LatticeModel make_model(Family family, double t1, double t2, double t3, double t4,
                        double omega0, double gamma, int n_cells, BoundaryCondition bc) {
  LatticeModel m;
  m.family = family;
  m.t1 = t1;
  m.t2 = t2;
  m.t3 = t3;
  m.t4 = t4;
  m.omega0 = omega0;
  m.gamma = gamma;
  m.n_cells = n_cells;
  m.bc = bc;
  validate(m);
  return m;
}

LatticeModel apply_symmetry(const LatticeModel& model, SymmetryOp op) {
  LatticeModel m = model;
  switch (op) {
    case SymmetryOp::Mx:
      std::swap(m.t3, m.t4);
      break;
    case SymmetryOp::My:
      std::swap(m.t3, m.t4);
      std::swap(m.t1, m.t2);
      break;
    case SymmetryOp::P:
      std::swap(m.t1, m.t2);
      break;
    case SymmetryOp::G:
      break;
  }
  return m;
}

std::string_view to_string(Family family) {
  switch (family) {
    case Family::GT: return "GT";
    case Family::HatanoNelson: return "HatanoNelson";
    case Family::NHSSH: return "NHSSH";
  }
  return "?";
}

std::string_view to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::Open ? "OBC" : "PBC";
}

std::string_view to_string(SymmetryOp op) {
  switch (op) {
    case SymmetryOp::Mx: return "Mx";
    case SymmetryOp::My: return "My";
    case SymmetryOp::P: return "P";
    case SymmetryOp::G: return "G";
  }
  return "?";
}

Family parse_family(std::string_view text) {
  if (text == "GT" || text == "gt") return Family::GT;
  if (text == "HatanoNelson" || text == "HN" || text == "hn") return Family::HatanoNelson;
  if (text == "NHSSH" || text == "nhssh") return Family::NHSSH;
  throw ValidationError("unknown model family '" + std::string(text) + "'");
}

BoundaryCondition parse_boundary(std::string_view text) {
  if (text == "OBC" || text == "obc" || text == "open") return BoundaryCondition::Open;
  if (text == "PBC" || text == "pbc" || text == "periodic") return BoundaryCondition::Periodic;
  throw ValidationError("unknown boundary condition '" + std::string(text) + "'");
}

LaurentDegree laurent_degree(const LatticeModel& model) {
  if (model.family == Family::GT) return {2, 2};
  return {1, 1};
}

}  // namespace nhse
