#include "nhse/gbz.hpp"

#include "nhse/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace nhse {

std::vector<Complex> Gbz::betas(int band_pair) const {
  std::vector<Complex> out;
  for (const auto& p : points)
    if (band_pair < 0 || p.band_pair == band_pair) out.push_back(p.beta);
  return out;
}

int Gbz::n_band_pairs() const {
  int n = 0;
  for (const auto& p : points) n = std::max(n, p.band_pair + 1);
  return n;
}

double Gbz::max_modulus() const {
  double m = 0.0;
  for (const auto& p : points) m = std::max(m, std::abs(p.beta));
  return m;
}

double Gbz::min_modulus() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& p : points) m = std::min(m, std::abs(p.beta));
  return m;
}

int band_pair_of(const LatticeModel& model, Complex beta, Complex energy) {
  const int s = model.sites_per_cell();
  if (s < 2) return 0;
  Eigen::ComplexEigenSolver<CMatrix> es(non_bloch_hamiltonian(model, beta), false);
  CVector ev = es.eigenvalues();
  std::sort(ev.data(), ev.data() + ev.size(),
            [](Complex a, Complex b) { return a.real() < b.real(); });
  Index j = 0;
  (ev.array() - energy).abs().minCoeff(&j);
  return (s / 2 - 1) - int(std::min<Index>(j, s - 1 - j));
}

namespace {

// beta and beta' are the middle pair of the roots at E, with equal modulus.
bool is_middle_pair(const std::vector<Complex>& roots, size_t p, Complex b1, Complex b2,
                    double rel) {
  const double m = std::abs(b1);
  if (std::abs(std::abs(roots[p - 1]) - m) > rel * m) return false;
  if (std::abs(std::abs(roots[p]) - m) > rel * m) return false;
  if (std::abs(std::abs(b2) - m) > rel * m) return false;
  // both candidates must actually be among the two middle roots
  auto near_middle = [&](Complex b) {
    const double tol = 1e-6 * std::max(1.0, m);
    return std::abs(roots[p - 1] - b) < tol || std::abs(roots[p] - b) < tol;
  };
  return near_middle(b1) && near_middle(b2);
}

struct PairSolution {
  Complex beta;
  Complex energy;
};

// Newton on f(beta, E) = 0, f(beta u, E) = 0.
bool newton_pair(const CharacteristicPolynomial& cp, Complex u, PairSolution& s) {
  Complex b = s.beta, e = s.energy;
  for (int it = 0; it < 40; ++it) {
    const Complex bu = b * u;
    const Complex f1 = cp(b, e), f2 = cp(bu, e);
    const Complex a11 = cp.d_beta(b, e), a12 = cp.d_energy(b, e);
    const Complex a21 = u * cp.d_beta(bu, e), a22 = cp.d_energy(bu, e);
    const Complex det = a11 * a22 - a12 * a21;
    if (det == Complex(0.0)) return false;
    const Complex db = -(a22 * f1 - a12 * f2) / det;
    const Complex de = -(a11 * f2 - a21 * f1) / det;
    b += db;
    e += de;
    if (!std::isfinite(b.real()) || !std::isfinite(e.real())) return false;
    const double ab = std::abs(b);
    if (ab > 1e4 || ab < 1e-4) return false;
    if (std::abs(db) < 1e-13 * std::max(1.0, ab) && std::abs(de) < 1e-12 * std::max(1.0, std::abs(e))) {
      s = {b, e};
      return true;
    }
  }
  return false;
}

bool accept_pair(const CharacteristicPolynomial& cp, Complex u, const PairSolution& s) {
  try {
    const auto roots = cp.beta_roots(s.energy);
    return is_middle_pair(roots, size_t(cp.beta_shift()), s.beta, s.beta * u, 1e-7);
  } catch (const DomainError&) {
    return false;
  }
}

std::vector<PairSolution> global_pair_solutions(const CharacteristicPolynomial& cp, double theta) {
  const Complex u = std::polar(1.0, theta);
  std::vector<PairSolution> found;
  const int n_rho = 11, n_phi = 12;
  for (int i = 0; i < n_rho; ++i) {
    const double rho = std::pow(10.0, -1.5 + 3.0 * i / (n_rho - 1));
    for (int j = 0; j < n_phi; ++j) {
      const Complex b0 = std::polar(rho, kTwoPi * (j + 0.5) / n_phi);
      Eigen::ComplexEigenSolver<CMatrix> es(non_bloch_hamiltonian(cp.model(), b0), false);
      for (Index k = 0; k < es.eigenvalues().size(); ++k) {
        PairSolution s{b0, es.eigenvalues()(k)};
        if (!newton_pair(cp, u, s) || !accept_pair(cp, u, s)) continue;
        const bool dup = std::any_of(found.begin(), found.end(), [&](const PairSolution& f) {
          return std::abs(f.beta - s.beta) < 1e-8 * std::max(1.0, std::abs(s.beta)) &&
                 std::abs(f.energy - s.energy) < 1e-8 * std::max(1.0, std::abs(s.energy));
        });
        if (!dup) found.push_back(s);
      }
    }
  }
  return found;
}

// Follows one solution from theta_a toward theta_b with adaptive steps.
std::vector<PairSolution> march(const CharacteristicPolynomial& cp, PairSolution start,
                                double theta_a, double theta_b, std::vector<double>& thetas) {
  std::vector<PairSolution> out{start};
  thetas.assign(1, theta_a);
  const double h_max = (theta_b - theta_a) / 32.0;
  double h = h_max;
  double theta = theta_a;
  PairSolution cur = start;
  while ((theta_b - theta) * (h_max > 0 ? 1.0 : -1.0) > 1e-14) {
    double step = h;
    if (std::abs(step) > std::abs(theta_b - theta)) step = theta_b - theta;
    PairSolution next = cur;
    const Complex u = std::polar(1.0, theta + step);
    const bool ok = newton_pair(cp, u, next) &&
                    std::abs(next.beta - cur.beta) < 0.05 * std::max(0.1, std::abs(cur.beta));
    if (!ok) {
      h *= 0.5;
      if (std::abs(h) < 1e-9) break;
      continue;
    }
    if (!accept_pair(cp, u, next)) break;
    theta += step;
    cur = next;
    out.push_back(cur);
    thetas.push_back(theta);
    h = std::abs(h * 1.5) > std::abs(h_max) ? h_max : h * 1.5;
  }
  return out;
}

Gbz charpoly_gbz(const LatticeModel& model, int n_sites) {
  const LatticeModel m = model.with_gamma(0.0);
  const CharacteristicPolynomial cp(m);
  Gbz g;
  g.method = GbzMethod::CharPoly;
  g.n_sites_used = n_sites;
  g.model = m;

  const int n_coarse = 24;
  const double theta_min = 1e-3;
  int branch = 0;
  auto emit = [&](const std::vector<PairSolution>& path, const std::vector<double>& thetas) {
    if (path.size() < 2) return;
    // beta track and beta*u track are separate polylines
    for (int track = 0; track < 2; ++track) {
      for (size_t i = 0; i < path.size(); ++i) {
        const Complex b = track == 0 ? path[i].beta : path[i].beta * std::polar(1.0, thetas[i]);
        g.points.push_back({b, path[i].energy, band_pair_of(m, b, path[i].energy), branch});
      }
      ++branch;
    }
  };

  for (int c = 1; c < n_coarse; ++c) {
    const double theta_c = kTwoPi * c / n_coarse;
    const auto sols = global_pair_solutions(cp, theta_c);
    const double theta_next = c + 1 < n_coarse ? kTwoPi * (c + 1) / n_coarse : kTwoPi - theta_min;
    for (const auto& s : sols) {
      std::vector<double> thetas;
      auto path = march(cp, s, theta_c, theta_next, thetas);
      emit(path, thetas);
      if (c == 1) {
        path = march(cp, s, theta_c, theta_min, thetas);
        emit(path, thetas);
      }
    }
  }
  return g;
}

}  // namespace

Gbz gbz_from_energies(const LatticeModel& model, const CVector& energies) {
  const LatticeModel m = model.with_gamma(0.0);
  const CharacteristicPolynomial cp(m);
  const size_t p = size_t(cp.beta_shift());
  Gbz g;
  g.method = GbzMethod::ObcFit;
  g.n_sites_used = int(energies.size());
  g.model = m;
  for (Index i = 0; i < energies.size(); ++i) {
    const Complex e = energies(i);
    std::vector<Complex> roots;
    try {
      roots = cp.beta_roots(e);
    } catch (const DomainError&) {
      ++g.n_rejected;
      continue;
    }
    const Complex b1 = roots[p - 1], b2 = roots[p];
    if (std::abs(std::abs(b1) - std::abs(b2)) >= kMiddlePairTol * std::abs(b1)) {
      ++g.n_rejected;
      continue;
    }
    const double mism = std::abs(std::abs(b1) - std::abs(b2)) / std::abs(b1);
    for (Complex b : {b1, b2}) g.points.push_back({b, e, band_pair_of(m, b, e), 0, mism});
  }
  return g;
}

Gbz gbz_compute(const LatticeModel& model, GbzMethod method, int n_sites) {
  validate(model);
  const int s = model.sites_per_cell();
  if (n_sites < s || n_sites % s != 0)
    throw ValidationError("gbz_compute: n_sites must be a positive multiple of " + std::to_string(s));
  if (method == GbzMethod::CharPoly) return charpoly_gbz(model, n_sites);
  const LatticeModel chain = model.with_gamma(0.0).with_cells(n_sites / s).with_bc(BoundaryCondition::Open);
  Gbz g = gbz_from_energies(chain, obc_eigenvalues(chain));
  g.n_sites_used = n_sites;
  g.model = model.with_gamma(0.0);
  return g;
}

namespace {

double segment_distance(Complex p, Complex a, Complex b) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

}  // namespace

double gbz_deviation(const Gbz& fit, const Gbz& cp, double resolution) {
  if (cp.points.empty()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const auto& q : fit.points) {
    if (q.mismatch * std::abs(q.beta) >= resolution) continue;
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < cp.points.size(); ++i) {
      best = std::min(best, std::abs(q.beta - cp.points[i].beta));
      if (i + 1 < cp.points.size() && cp.points[i + 1].branch == cp.points[i].branch)
        best = std::min(best, segment_distance(q.beta, cp.points[i].beta, cp.points[i + 1].beta));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

double gbz_cross_validate(const Gbz& fit, const Gbz& cp, double tol) {
  const double dev = gbz_deviation(fit, cp, tol);
  if (!(dev <= tol))
    throw CrossValidationError("GBZ methods disagree: max deviation " + std::to_string(dev), dev);
  return dev;
}

BranchPoint refine_branch_point(const CharacteristicPolynomial& cp, Complex beta0, Complex energy0,
                                int max_iterations) {
  BranchPoint bp{beta0, energy0, false, 0};
  Complex b = beta0, e = energy0;
  auto merit = [&](Complex bb, Complex ee) {
    return std::abs(cp(bb, ee)) + std::abs(cp.d_beta(bb, ee)) * std::max(1.0, std::abs(bb));
  };
  double current = merit(b, e);
  for (int it = 1; it <= max_iterations; ++it) {
    bp.iterations = it;
    const Complex f = cp(b, e), g = cp.d_beta(b, e);
    const Complex a11 = g, a12 = cp.d_energy(b, e);
    const Complex a21 = cp.d_beta2(b, e), a22 = cp.d_beta_energy(b, e);
    const Complex det = a11 * a22 - a12 * a21;
    if (det == Complex(0.0) || !std::isfinite(std::abs(det))) break;
    const Complex db = -(a22 * f - a12 * g) / det;
    const Complex de = -(a11 * g - a21 * f) / det;
    double lambda = 1.0;
    Complex nb = b + db, ne = e + de;
    double next = merit(nb, ne);
    while (!(next < current) && lambda > 1e-4) {
      lambda *= 0.5;
      nb = b + lambda * db;
      ne = e + lambda * de;
      next = merit(nb, ne);
    }
    b = nb;
    e = ne;
    current = next;
    if (std::abs(lambda * db) < 1e-13 * std::max(1.0, std::abs(b)) &&
        std::abs(lambda * de) < 1e-11 * std::max(1.0, std::abs(e))) {
      bp.converged = true;
      break;
    }
    if (std::abs(b) < 1e-8 || std::abs(b) > 1e8) break;
  }
  bp.beta = b;
  bp.energy = e;
  return bp;
}

TouchingPoint gbz_touching_point(const Gbz& gbz) {
  std::vector<const GbzPoint*> c0, c1;
  for (const auto& p : gbz.points) (p.band_pair == 0 ? c0 : c1).push_back(&p);
  if (c0.empty() || c1.empty()) throw NoTouchingError("GBZ has fewer than two band-pair components");

  double scale = 0.0;
  for (const auto& p : gbz.points) scale += std::abs(p.beta);
  scale /= double(gbz.points.size());

  double gap = std::numeric_limits<double>::infinity();
  const GbzPoint* seed = nullptr;
  const GbzPoint* partner = nullptr;
  double best_score = std::numeric_limits<double>::infinity();
  for (const GbzPoint* a : c0) {
    const GbzPoint* nearest = nullptr;
    double d = std::numeric_limits<double>::infinity();
    for (const GbzPoint* b : c1) {
      const double dd = std::abs(a->beta - b->beta);
      if (dd < d) {
        d = dd;
        nearest = b;
      }
    }
    gap = std::min(gap, d);
    if (a->beta.real() >= 0.0) continue;
    const double score = std::abs(a->beta.imag()) + d;
    if (score < best_score) {
      best_score = score;
      seed = a;
      partner = nearest;
    }
  }
  if (gap > 0.2 * scale)
    throw NoTouchingError("band-pair components stay apart (gap " + std::to_string(gap) + ")");
  if (seed == nullptr) throw NoTouchingError("no GBZ points with Re(beta) < 0");

  const CharacteristicPolynomial cp(gbz.model);
  TouchingPoint tp;
  tp.component_gap = gap;
  bool found = false;
  double best = std::numeric_limits<double>::infinity();
  const Complex mid = 0.5 * (seed->beta + partner->beta);
  for (Complex b0 : {Complex(mid.real(), 0.0), seed->beta, partner->beta}) {
    for (Complex e0 : {seed->energy, partner->energy}) {
      const BranchPoint bp = refine_branch_point(cp, b0, e0);
      if (!bp.converged) continue;
      const double d = std::abs(bp.beta - mid);
      if (d > 0.2 * scale || d >= best) continue;
      best = d;
      tp.beta = bp.beta;
      tp.energy = bp.energy;
      tp.iterations = bp.iterations;
      found = true;
    }
  }
  if (!found) throw NoTouchingError("branch-point refinement did not converge near the components");
  if (!(std::abs(tp.beta.imag()) < 1e-3 * std::max(1.0, std::abs(tp.beta))) || !(tp.beta.real() < 0.0))
    throw NoTouchingError("touching point off the negative real axis");
  return tp;
}

SkinDirection skin_direction(const Gbz& gbz, double tol) {
  SkinDirection sd;
  if (gbz.points.empty()) return sd;
  double acc = 0.0;
  for (const auto& p : gbz.points) acc += std::log(std::abs(p.beta));
  sd.mean_log_modulus = acc / double(gbz.points.size());
  if (sd.mean_log_modulus < -tol) sd.direction = Direction::Left;
  else if (sd.mean_log_modulus > tol) sd.direction = Direction::Right;
  return sd;
}

Direction reversed(Direction d) {
  if (d == Direction::Left) return Direction::Right;
  if (d == Direction::Right) return Direction::Left;
  return Direction::None;
}

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::Left: return "Left";
    case Direction::Right: return "Right";
    case Direction::None: return "None";
  }
  return "?";
}

}  // namespace nhse
