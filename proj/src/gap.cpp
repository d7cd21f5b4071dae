#include "nhse/gbz.hpp"
#include "nhse/spectral.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>

namespace nhse {

namespace {

// Looks for a point of the GBZ bands with Re E = 0, starting from (beta, u beta, E).
// Unknowns: beta (complex), y = Im E, theta = arg(u).
bool crossing_on_gbz(const CharacteristicPolynomial& cp, Complex beta, Complex beta2, double y) {
  double theta = std::arg(beta2 / beta);
  for (int it = 0; it < 60; ++it) {
    const Complex e(0.0, y);
    const Complex u = std::polar(1.0, theta);
    const Complex bu = beta * u;
    const Complex f1 = cp(beta, e), f2 = cp(bu, e);
    const Complex g1 = cp.d_beta(beta, e), g2 = cp.d_beta(bu, e);
    const Complex h1 = cp.d_energy(beta, e), h2 = cp.d_energy(bu, e);
    // columns: Re beta, Im beta, y, theta
    const Complex col[2][4] = {{g1, Complex(0, 1) * g1, Complex(0, 1) * h1, 0.0},
                               {u * g2, Complex(0, 1) * u * g2, Complex(0, 1) * h2,
                                Complex(0, 1) * bu * g2}};
    Eigen::Matrix4d jac;
    Eigen::Vector4d rhs;
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 4; ++c) {
        jac(2 * r, c) = col[r][c].real();
        jac(2 * r + 1, c) = col[r][c].imag();
      }
    }
    rhs << -f1.real(), -f1.imag(), -f2.real(), -f2.imag();
    Eigen::FullPivLU<Eigen::Matrix4d> lu(jac);
    if (lu.rank() < 4) return false;
    const Eigen::Vector4d d = lu.solve(rhs);
    beta += Complex(d(0), d(1));
    y += d(2);
    theta += d(3);
    if (!d.allFinite() || std::abs(beta) < 1e-6 || std::abs(beta) > 1e6) return false;
    if (d.head<2>().norm() < 1e-13 * std::max(1.0, std::abs(beta)) &&
        std::abs(d(2)) < 1e-11 * std::max(1.0, std::abs(y)) && std::abs(d(3)) < 1e-12) {
      const double st = std::sin(0.5 * theta);
      if (std::abs(st) < 1e-6) return false;  // collapsed onto a double root
      try {
        const auto roots = cp.beta_roots(Complex(0.0, y));
        const size_t p = size_t(cp.beta_shift());
        const double m = std::abs(beta);
        auto is_root = [&](Complex b) {
          return std::abs(roots[p - 1] - b) < 1e-6 * std::max(1.0, m) ||
                 std::abs(roots[p] - b) < 1e-6 * std::max(1.0, m);
        };
        return is_root(beta) && is_root(beta * std::polar(1.0, theta));
      } catch (const DomainError&) {
        return false;
      }
    }
  }
  return false;
}

}  // namespace

GapReport gap_report_from(const LatticeModel& model, const CVector& obc, const Gbz& bulk,
                          GapTolerances tol) {
  GapReport rep;
  const double radius = obc.size() ? obc.cwiseAbs().maxCoeff() : 0.0;
  rep.tol_im = tol.tol_im > 0.0 ? tol.tol_im : 1e-6 * radius;
  rep.tol_gap = tol.tol_gap > 0.0 ? tol.tol_gap : 1e-3 * radius;
  rep.max_abs_im = obc.size() ? obc.imag().cwiseAbs().maxCoeff() : 0.0;
  rep.is_real_spectrum = rep.max_abs_im < rep.tol_im;

  if (bulk.points.empty()) {
    rep.line_gap_width = 0.0;
  } else {
    const GbzPoint* edge = &bulk.points.front();
    for (const auto& p : bulk.points)
      if (std::abs(p.energy.real()) < std::abs(edge->energy.real())) edge = &p;
    double half = std::abs(edge->energy.real());

    const CharacteristicPolynomial cp(model.with_gamma(0.0));
    const size_t p = size_t(cp.beta_shift());
    // the pair partner of the edge point at the same energy
    const GbzPoint* partner = nullptr;
    for (const auto& q : bulk.points)
      if (&q != edge && q.energy == edge->energy) partner = &q;

    if (half > rep.tol_gap / 2 && partner != nullptr &&
        crossing_on_gbz(cp, edge->beta, partner->beta, edge->energy.imag())) {
      half = 0.0;
    } else if (half > 0.0) {
      const BranchPoint bp = refine_branch_point(cp, edge->beta, edge->energy);
      if (bp.converged && std::abs(bp.energy.real()) <= half * (1.0 + 1e-9) &&
          std::abs(bp.energy - edge->energy) < 0.1 * std::max(radius, 1e-300)) {
        try {
          const auto roots = cp.beta_roots(bp.energy);
          const double sep = std::abs(roots[p - 1] - roots[p]);
          const double tol_root = 1e-4 * std::max(1.0, std::abs(bp.beta));
          if (sep < tol_root && std::abs(roots[p - 1] - bp.beta) < tol_root)
            half = std::abs(bp.energy.real());
        } catch (const DomainError&) {
        }
      }
    }
    rep.line_gap_width = 2.0 * half;
  }
  if (rep.line_gap_width <= rep.tol_gap) rep.line_gap_width = 0.0;

  if (rep.line_gap_width > 0.0) {
    const double bound = rep.line_gap_width / 2 - rep.tol_gap;
    for (Index i = 0; i < obc.size(); ++i)
      if (std::abs(obc(i).real()) < bound) ++rep.in_gap_mode_count;
  }
  return rep;
}

GapReport gap_report(const LatticeModel& model, GapTolerances tol) {
  const LatticeModel m = model.with_gamma(0.0).with_bc(BoundaryCondition::Open);
  const CVector obc = obc_eigenvalues(m);
  const int s = m.sites_per_cell();
  const int bulk_sites = std::max(m.n_sites(), (kBulkSites + s - 1) / s * s);
  const Gbz bulk = bulk_sites == m.n_sites() ? gbz_from_energies(m, obc)
                                             : gbz_compute(m, GbzMethod::ObcFit, bulk_sites);
  return gap_report_from(m, obc, bulk, tol);
}

}  // namespace nhse
