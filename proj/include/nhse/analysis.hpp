#pragma once

#include "nhse/dynamics.hpp"
#include "nhse/gbz.hpp"
#include "nhse/model.hpp"
#include "nhse/spectral.hpp"

#include <string_view>
#include <vector>

namespace nhse {

// --- GBZ projection ---------------------------------------------------------

enum class LaplaceKernel {
  Laplace,  // Psi_a(beta) = sum_x psi_a(x) beta^-x
  Matched,  // Psi_a(beta) = sum_x psi_a(x) conj(beta^x) / ||beta^x||
};

struct ProjectionOptions {
  LaplaceKernel kernel = LaplaceKernel::Laplace;
  bool normalize = false;  // scale so that max |C| over (point, mode) is 1 at each time
};

struct GbzProjection {
  std::vector<double> times;
  std::vector<GbzPoint> points;
  std::vector<CMatrix> coefficients;  // per time: points x modes, C_j(t, beta)
  RMatrix magnitude;                  // time x points, root-sum-square over the point's band pair
  bool normalized = false;
};

/// C_j(t, beta) = <phi_L,j(beta) | Psi(t, beta)> for every GBZ point.
GbzProjection laplace_projection(const WaveField& field, const Gbz& gbz,
                                 const ProjectionOptions& options = {});

/// Mode indices of H(beta) (sorted by Re E) that belong to a band pair.
std::vector<Index> band_pair_modes(int sites_per_cell, int band_pair);

/// |C|-weighted mean of |beta| at one time index.
double weighted_mean_modulus(const GbzProjection& projection, Index time_index);

// --- OBC mode decomposition --------------------------------------------------

struct ModeDecomposition {
  std::vector<double> times;
  CMatrix coefficients;  // time x modes, D_j(t) = <phi_L,j | psi(t)>
  CVector eigenvalues;
};

ModeDecomposition obc_decomposition(const WaveField& field, const Spectrum& spectrum);

/// sum_j D_j(t) phi_R,j for every stored time (time x sites).
CMatrix reconstruct(const ModeDecomposition& decomposition, const Spectrum& spectrum);

// --- Phase classification -----------------------------------------------------

enum class Phase { A, Aprime, B, Bprime, C, Cprime, HermitianLine, Boundary };

std::string_view to_string(Phase p);
Phase parse_phase(std::string_view text);
/// A <-> A', B <-> B', C <-> C'; other labels unchanged.
Phase primed_swap(Phase p);

struct PhaseLabel {
  Phase label = Phase::Boundary;
  double max_abs_im = 0.0;  // rad/s
  double line_gap = 0.0;    // rad/s
  SkinDirection direction;
  bool near_exceptional = false;
};

/// Classifies the GT model at gamma = 0. Negative tolerances select the defaults
/// (1e-6 and 1e-3 times the spectral radius).
PhaseLabel classify_phase(const LatticeModel& model, GapTolerances tol = {});

struct GridRange {
  double lo = 0.0;
  double hi = 0.0;
  double at(int i, int resolution) const { return lo + (hi - lo) * i / (resolution - 1); }
  double step(int resolution) const { return (hi - lo) / (resolution - 1); }
};

struct PhaseDiagram {
  std::vector<double> t3_grid;
  std::vector<double> t4_grid;
  std::vector<PhaseLabel> cells;  // row-major: index i3 * t4_grid.size() + i4

  const PhaseLabel& at(size_t i3, size_t i4) const { return cells[i3 * t4_grid.size() + i4]; }
  PhaseLabel& at(size_t i3, size_t i4) { return cells[i3 * t4_grid.size() + i4]; }
};

struct ScanOptions {
  int threads = 0;  // 0: hardware concurrency
  GapTolerances tol;
};

/// Classifies every (t3, t4) grid point; grid points run in parallel and are
/// written back in grid order. Boundary bands are applied afterwards.
PhaseDiagram scan_phase_diagram(double t1, double t2, GridRange t3, GridRange t4, int resolution,
                                int n_cells, const ScanOptions& options = {});

/// Skin direction of the Hatano-Nelson chain over a (t1, t2) grid.
struct DirectionDiagram {
  std::vector<double> t1_grid;
  std::vector<double> t2_grid;
  std::vector<SkinDirection> cells;  // row-major i1 * t2_grid.size() + i2
};

DirectionDiagram scan_direction_diagram(GridRange t1, GridRange t2, int resolution, int n_cells,
                                        int threads = 0);

// --- Transition sweeps -------------------------------------------------------

/// t3(m) = t3_0 + t3_slope m, t4(m) = t4_0 + t4_slope m with t1, t2 fixed.
struct PathSpec {
  double t1 = 1.0;
  double t2 = 2.0;
  double t3_0 = 4.0;
  double t3_slope = 0.0;
  double t4_0 = 1.0;
  double t4_slope = 0.0;
  double m_max = 1.0;

  LatticeModel model_at(double m, int n_cells, double gamma = 0.0) const;
};

PathSpec path1();  // t3 = 4 - m, t4 = 1 + m
PathSpec path2();  // t3 = 4, t4 = 1 + m

struct SweepResult {
  std::vector<double> m;
  std::vector<EnergyTrace> traces;
  std::vector<double> growth_rates;    // fitted slope of log P, 1/s
  std::vector<double> twice_max_im;    // 2 max Im(E_OBC), 1/s
  std::vector<bool> truncated;         // horizon truncation hit
};

struct SweepOptions {
  int n_cells = 10;
  double gamma = 0.0;
  double fit_fraction = 0.25;
  int threads = 0;
};

SweepResult transition_sweep(const PathSpec& path, int m_samples, const std::vector<double>& times,
                             const CVector& psi0, const SweepOptions& options = {});

/// Least-squares slope of log P over the last `fraction` of the horizon.
double growth_rate(const EnergyTrace& trace, double fraction = 0.25);

struct OneSidedDifferences {
  std::vector<double> backward;  // (y_i - y_{i-1}) / (x_i - x_{i-1}); NaN at i = 0
  std::vector<double> forward;   // (y_{i+1} - y_i) / (x_{i+1} - x_i); NaN at the end
};

OneSidedDifferences one_sided_differences(const std::vector<double>& x, const std::vector<double>& y);

/// Worst |D- - D+| / max(|D-|, |D+|) over interior samples.
double max_relative_fd_mismatch(const OneSidedDifferences& d);

struct Kink {
  bool found = false;
  size_t boundary = 0;  // first sample whose OBC spectrum is real
  size_t index = 0;     // sample of largest one-sided disagreement next to the boundary
  double backward = 0.0;
  double forward = 0.0;
  double ratio = 0.0;  // max(|D-|,|D+|) / min(|D-|,|D+|)
};

/// Locates the boundary as the first sample with twice_max_im <= tol and
/// compares the one-sided differences of lambda at the interior samples
/// within one step of it.
Kink detect_kink(const std::vector<double>& m, const std::vector<double>& lambda,
                 const std::vector<double>& twice_max_im, double tol = 1e-6);

}  // namespace nhse
