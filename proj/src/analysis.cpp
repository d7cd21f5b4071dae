#include "nhse/analysis.hpp"

#include "nhse/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

namespace nhse {

namespace {

template <typename Fn>
void parallel_for(size_t n, int threads, Fn&& fn) {
  size_t workers = threads > 0 ? size_t(threads) : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < n && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

// --- GBZ projection ---------------------------------------------------------

std::vector<Index> band_pair_modes(int s, int band_pair) {
  if (s == 1) return {0};
  // modes sorted by Re E; pair 0 is the innermost two
  const Index lo = Index(s / 2 - 1 - band_pair);
  const Index hi = Index(s - 1) - lo;
  if (lo < 0) throw ValidationError("band pair out of range");
  return {lo, hi};
}

GbzProjection laplace_projection(const WaveField& field, const Gbz& gbz, const ProjectionOptions& opt) {
  const LatticeModel& model = field.model;
  const Index s = model.sites_per_cell();
  const Index n = model.n_cells;
  if (field.n_sites() != s * n) throw ValidationError("laplace_projection: field does not match its model");

  GbzProjection out;
  out.times = field.times;
  out.points = gbz.points;
  out.normalized = opt.normalize;
  const Index nt = field.n_times();
  const Index np = Index(gbz.points.size());
  out.coefficients.assign(size_t(nt), CMatrix::Zero(np, s));

  for (Index p = 0; p < np; ++p) {
    const Complex beta = gbz.points[size_t(p)].beta;
    if (beta == Complex(0.0)) throw DomainError("laplace_projection: beta = 0");
    CVector w(n);
    for (Index x = 0; x < n; ++x) {
      const Complex bx = std::pow(beta, double(x + 1));
      w(x) = opt.kernel == LaplaceKernel::Laplace ? 1.0 / bx : std::conj(bx);
    }
    if (opt.kernel == LaplaceKernel::Matched) w /= w.norm();

    CMatrix kernel = CMatrix::Zero(s * n, s);
    for (Index x = 0; x < n; ++x)
      for (Index a = 0; a < s; ++a) kernel(x * s + a, a) = w(x);
    const CMatrix psi_beta = field.amplitudes * kernel;  // time x s

    const Spectrum sb = non_bloch_spectrum(model, beta);
    const CMatrix c = psi_beta * sb.left.conjugate();  // C_j = sum_a conj(L_aj) Psi_a
    for (Index t = 0; t < nt; ++t) out.coefficients[size_t(t)].row(p) = c.row(t);
  }

  if (opt.normalize) {
    for (auto& c : out.coefficients) {
      const double peak = c.size() ? c.cwiseAbs().maxCoeff() : 0.0;
      if (peak > 0.0) c /= peak;
    }
  }

  out.magnitude.resize(nt, np);
  for (Index p = 0; p < np; ++p) {
    const auto modes = band_pair_modes(int(s), gbz.points[size_t(p)].band_pair);
    for (Index t = 0; t < nt; ++t) {
      double acc = 0.0;
      for (Index j : modes) acc += std::norm(out.coefficients[size_t(t)](p, j));
      out.magnitude(t, p) = std::sqrt(acc);
    }
  }
  return out;
}

double weighted_mean_modulus(const GbzProjection& proj, Index t) {
  double num = 0.0, den = 0.0;
  for (Index p = 0; p < proj.magnitude.cols(); ++p) {
    const double w = proj.magnitude(t, p);
    num += w * std::abs(proj.points[size_t(p)].beta);
    den += w;
  }
  return den > 0.0 ? num / den : 0.0;
}

// --- OBC mode decomposition --------------------------------------------------

ModeDecomposition obc_decomposition(const WaveField& field, const Spectrum& spectrum) {
  if (spectrum.size() != field.n_sites())
    throw ValidationError("obc_decomposition: spectrum dimension " + std::to_string(spectrum.size()) +
                          " does not match field with " + std::to_string(field.n_sites()) + " sites");
  ModeDecomposition d;
  d.times = field.times;
  d.coefficients = field.amplitudes * spectrum.left.conjugate();
  d.eigenvalues = spectrum.eigenvalues;
  return d;
}

CMatrix reconstruct(const ModeDecomposition& d, const Spectrum& spectrum) {
  if (spectrum.size() != d.coefficients.cols()) throw ValidationError("reconstruct: dimension mismatch");
  return d.coefficients * spectrum.right.transpose();
}

// --- Phase classification -----------------------------------------------------

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::A: return "A";
    case Phase::Aprime: return "A'";
    case Phase::B: return "B";
    case Phase::Bprime: return "B'";
    case Phase::C: return "C";
    case Phase::Cprime: return "C'";
    case Phase::HermitianLine: return "Hermitian";
    case Phase::Boundary: return "Boundary";
  }
  return "?";
}

Phase parse_phase(std::string_view t) {
  for (Phase p : {Phase::A, Phase::Aprime, Phase::B, Phase::Bprime, Phase::C, Phase::Cprime,
                  Phase::HermitianLine, Phase::Boundary})
    if (t == to_string(p)) return p;
  throw ValidationError("unknown phase label '" + std::string(t) + "'");
}

Phase primed_swap(Phase p) {
  switch (p) {
    case Phase::A: return Phase::Aprime;
    case Phase::Aprime: return Phase::A;
    case Phase::B: return Phase::Bprime;
    case Phase::Bprime: return Phase::B;
    case Phase::C: return Phase::Cprime;
    case Phase::Cprime: return Phase::C;
    default: return p;
  }
}

namespace {

bool is_c(Phase p) { return p == Phase::C || p == Phase::Cprime; }

}  // namespace

PhaseLabel classify_phase(const LatticeModel& model, GapTolerances tol) {
  if (model.family != Family::GT) throw ValidationError("classify_phase expects a GT model");
  validate(model);
  const LatticeModel m = model.with_gamma(0.0).with_bc(BoundaryCondition::Open);
  PhaseLabel out;
  if (m.is_hermitian()) {
    out.label = Phase::HermitianLine;
    return out;
  }
  const Spectrum spec = obc_spectrum(m);
  const double radius = spec.spectral_radius();
  const double tol_im = tol.tol_im > 0.0 ? tol.tol_im : 1e-6 * radius;
  const double tol_gap = tol.tol_gap > 0.0 ? tol.tol_gap : 1e-3 * radius;
  out.max_abs_im = spec.max_abs_im();
  out.near_exceptional = spec.near_exceptional;
  out.direction = skin_direction(gbz_from_energies(m, spec.eigenvalues));
  if (spec.near_exceptional) {
    out.label = Phase::Boundary;
    return out;
  }

  Phase base;
  if (out.max_abs_im < tol_im) {
    base = Phase::C;
  } else {
    const int bulk_sites = std::max(m.n_sites(), kBulkSites);
    const Gbz bulk = gbz_compute(m, GbzMethod::ObcFit, bulk_sites);
    const GapReport gap = gap_report_from(m, spec.eigenvalues, bulk, {tol_im, tol_gap});
    out.line_gap = gap.line_gap_width;
    base = gap.line_gap_width > tol_gap ? Phase::A : Phase::B;
  }
  out.label = out.direction.direction == Direction::Right ? primed_swap(base) : base;
  return out;
}

PhaseDiagram scan_phase_diagram(double t1, double t2, GridRange t3, GridRange t4, int resolution,
                                int n_cells, const ScanOptions& opt) {
  if (resolution < 2) throw ValidationError("scan_phase_diagram: resolution must be >= 2");
  if (!(t3.lo > 0.0) || !(t4.lo > 0.0) || !(t3.hi > t3.lo) || !(t4.hi > t4.lo))
    throw ValidationError("scan_phase_diagram: ranges must be positive and increasing");
  PhaseDiagram pd;
  for (int i = 0; i < resolution; ++i) {
    pd.t3_grid.push_back(t3.at(i, resolution));
    pd.t4_grid.push_back(t4.at(i, resolution));
  }
  const size_t n3 = pd.t3_grid.size(), n4 = pd.t4_grid.size();
  pd.cells.resize(n3 * n4);
  const LatticeModel base = make_model(Family::GT, t1, t2, pd.t3_grid[0], pd.t4_grid[0], 0.0, 0.0, n_cells);
  parallel_for(n3 * n4, opt.threads, [&](size_t k) {
    pd.cells[k] = classify_phase(base.with_rungs(pd.t3_grid[k / n4], pd.t4_grid[k % n4]), opt.tol);
  });

  // boundary bands: near the Hermitian line, and C points bordering a complex phase
  const double half_step = 0.5 * std::min(t3.step(resolution), t4.step(resolution));
  const std::vector<PhaseLabel> raw = pd.cells;
  auto raw_at = [&](size_t i, size_t j) -> const PhaseLabel& { return raw[i * n4 + j]; };
  for (size_t i = 0; i < n3; ++i) {
    for (size_t j = 0; j < n4; ++j) {
      PhaseLabel& cell = pd.at(i, j);
      if (cell.label == Phase::HermitianLine || cell.label == Phase::Boundary) continue;
      if (std::abs(pd.t3_grid[i] - pd.t4_grid[j]) < half_step) {
        cell.label = Phase::Boundary;
        continue;
      }
      if (!is_c(cell.label)) continue;
      const double tol_im = opt.tol.tol_im > 0.0 ? opt.tol.tol_im : 0.0;
      bool borders_complex = false;
      const int di[] = {-1, 1, 0, 0}, dj[] = {0, 0, -1, 1};
      for (int d = 0; d < 4; ++d) {
        const long ii = long(i) + di[d], jj = long(j) + dj[d];
        if (ii < 0 || jj < 0 || ii >= long(n3) || jj >= long(n4)) continue;
        const Phase nb = raw_at(size_t(ii), size_t(jj)).label;
        if (!is_c(nb) && nb != Phase::HermitianLine && nb != Phase::Boundary) borders_complex = true;
      }
      // a strictly real spectrum (round-off level) stays C even next to a complex phase
      const double floor = tol_im > 0.0 ? 0.01 * tol_im : 1e-8 * std::max(1.0, t1 + t2 + pd.t3_grid[i]);
      if (borders_complex && cell.max_abs_im > floor) cell.label = Phase::Boundary;
    }
  }
  return pd;
}

DirectionDiagram scan_direction_diagram(GridRange t1, GridRange t2, int resolution, int n_cells, int threads) {
  if (resolution < 2) throw ValidationError("scan_direction_diagram: resolution must be >= 2");
  DirectionDiagram dd;
  for (int i = 0; i < resolution; ++i) {
    dd.t1_grid.push_back(t1.at(i, resolution));
    dd.t2_grid.push_back(t2.at(i, resolution));
  }
  const size_t n2 = dd.t2_grid.size();
  dd.cells.resize(dd.t1_grid.size() * n2);
  parallel_for(dd.cells.size(), threads, [&](size_t k) {
    const LatticeModel m =
        make_model(Family::HatanoNelson, dd.t1_grid[k / n2], dd.t2_grid[k % n2], 1.0, 1.0, 0.0, 0.0, n_cells);
    dd.cells[k] = skin_direction(gbz_compute(m, GbzMethod::ObcFit, n_cells));
  });
  return dd;
}

// --- Transition sweeps -------------------------------------------------------

LatticeModel PathSpec::model_at(double m, int n_cells, double gamma) const {
  return make_model(Family::GT, t1, t2, t3_0 + t3_slope * m, t4_0 + t4_slope * m, 0.0, gamma, n_cells);
}

PathSpec path1() { return PathSpec{1.0, 2.0, 4.0, -1.0, 1.0, 1.0, 1.2}; }
PathSpec path2() { return PathSpec{1.0, 2.0, 4.0, 0.0, 1.0, 1.0, 2.5}; }

double growth_rate(const EnergyTrace& trace, double fraction) {
  const size_t n = trace.times.size();
  if (n < 2) throw ValidationError("growth_rate: need at least two samples");
  const double t_end = trace.times.back();
  const double t_start = t_end - fraction * (t_end - trace.times.front());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int k = 0;
  for (size_t i = 0; i < n; ++i) {
    if (trace.times[i] < t_start - 1e-12) continue;
    if (!(trace.energy[i] > 0.0)) throw NumericalError("growth_rate: energy vanished");
    const double x = trace.times[i], y = std::log(trace.energy[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++k;
  }
  if (k < 2) throw ValidationError("growth_rate: fitting window holds fewer than two samples");
  const double den = k * sxx - sx * sx;
  return (k * sxy - sx * sy) / den;
}

SweepResult transition_sweep(const PathSpec& path, int m_samples, const std::vector<double>& times,
                             const CVector& psi0, const SweepOptions& opt) {
  if (m_samples < 2) throw ValidationError("transition_sweep: need at least two samples");
  SweepResult r;
  for (int i = 0; i < m_samples; ++i) r.m.push_back(path.m_max * i / (m_samples - 1));
  const size_t n = r.m.size();
  r.traces.resize(n);
  r.growth_rates.assign(n, std::numeric_limits<double>::quiet_NaN());
  r.twice_max_im.resize(n);
  std::vector<char> truncated(n, 0);
  parallel_for(n, opt.threads, [&](size_t i) {
    const LatticeModel model = path.model_at(r.m[i], opt.n_cells, opt.gamma);
    const Spectrum s = obc_spectrum(model);
    r.twice_max_im[i] = 2.0 * s.max_im();
    WaveField f;
    try {
      f = s.near_exceptional ? evolve_integrator(model, psi0, times) : evolve_spectral(model, s, psi0, times);
    } catch (const HorizonTruncation&) {
      truncated[i] = 1;
      return;
    }
    r.traces[i] = energy_trace(f);
    r.growth_rates[i] = growth_rate(r.traces[i], opt.fit_fraction);
  });
  r.truncated.assign(truncated.begin(), truncated.end());
  return r;
}

OneSidedDifferences one_sided_differences(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ValidationError("one_sided_differences: size mismatch");
  const size_t n = x.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  OneSidedDifferences d{std::vector<double>(n, nan), std::vector<double>(n, nan)};
  for (size_t i = 1; i < n; ++i) d.backward[i] = (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
  for (size_t i = 0; i + 1 < n; ++i) d.forward[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
  return d;
}

double max_relative_fd_mismatch(const OneSidedDifferences& d) {
  double worst = 0.0;
  for (size_t i = 1; i + 1 < d.backward.size(); ++i) {
    const double a = d.backward[i], b = d.forward[i];
    const double den = std::max(std::abs(a), std::abs(b));
    if (den > 0.0) worst = std::max(worst, std::abs(a - b) / den);
  }
  return worst;
}

Kink detect_kink(const std::vector<double>& m, const std::vector<double>& lambda,
                 const std::vector<double>& twice_max_im, double tol) {
  Kink k;
  const size_t n = m.size();
  if (n < 3 || lambda.size() != n || twice_max_im.size() != n) return k;
  size_t b = n;
  for (size_t i = 0; i < n; ++i) {
    if (twice_max_im[i] <= tol) {
      b = i;
      break;
    }
  }
  if (b == n) return k;
  const auto d = one_sided_differences(m, lambda);
  k.boundary = b;
  for (size_t i = (b > 0 ? b - 1 : 0); i <= b + 1 && i < n; ++i) {
    if (i == 0 || i + 1 >= n) continue;
    const double lo = std::min(std::abs(d.backward[i]), std::abs(d.forward[i]));
    const double hi = std::max(std::abs(d.backward[i]), std::abs(d.forward[i]));
    const double ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    if (!k.found || ratio > k.ratio) {
      k.found = true;
      k.index = i;
      k.backward = d.backward[i];
      k.forward = d.forward[i];
      k.ratio = ratio;
    }
  }
  return k;
}

}  // namespace nhse
