#pragma once

#include "nhse/charpoly.hpp"
#include "nhse/model.hpp"
#include "nhse/spectral.hpp"
#include "nhse/types.hpp"

#include <limits>
#include <vector>

namespace nhse {

enum class GbzMethod { CharPoly, ObcFit };

struct GbzPoint {
  Complex beta;
  Complex energy;
  int band_pair = 0;  // 0: inner bands (closest to Re E = 0), 1: outer bands
  int branch = 0;     // CharPoly: consecutive points of one branch form a polyline
  double mismatch = 0.0;  // ObcFit: ||b_p| - |b_p+1|| / |b_p| of the pair it came from
};

struct Gbz {
  std::vector<GbzPoint> points;
  GbzMethod method = GbzMethod::ObcFit;
  int n_sites_used = 0;
  int n_rejected = 0;  // ObcFit: eigenvalues failing the middle-pair test
  LatticeModel model;

  std::vector<Complex> betas(int band_pair = -1) const;
  int n_band_pairs() const;
  double max_modulus() const;
  double min_modulus() const;
};

/// Middle-pair acceptance used by ObcFit: ||b_p| - |b_p+1|| < tol |b_p|.
inline constexpr double kMiddlePairTol = 1e-2;

/// GBZ by diagonalizing an open chain of n_sites sites (ObcFit, gamma = 0) or by
/// continuation of |beta_p| = |beta_p+1| along the non-Bloch bands (CharPoly).
Gbz gbz_compute(const LatticeModel& model, GbzMethod method, int n_sites = 160);

/// ObcFit GBZ for a given set of energies (gamma must already be removed).
Gbz gbz_from_energies(const LatticeModel& model, const CVector& energies);

/// Band-pair index of (beta, E): which eigenvalue of H(beta) E is closest to.
int band_pair_of(const LatticeModel& model, Complex beta, Complex energy);

/// Largest distance from an ObcFit point to the CharPoly polylines. Only points
/// whose own pair mismatch (times |beta|) is below `resolution` take part, since
/// a finite chain cannot place the others more precisely than that.
double gbz_deviation(const Gbz& obc_fit, const Gbz& char_poly,
                     double resolution = std::numeric_limits<double>::infinity());
/// Throws CrossValidationError when gbz_deviation exceeds tol.
double gbz_cross_validate(const Gbz& obc_fit, const Gbz& char_poly, double tol = 1e-3);

struct BranchPoint {
  Complex beta;
  Complex energy;
  bool converged = false;
  int iterations = 0;
};

/// Damped Newton on f = 0, df/dbeta = 0 (a double root in beta).
BranchPoint refine_branch_point(const CharacteristicPolynomial& cp, Complex beta0, Complex energy0,
                                int max_iterations = 200);

struct TouchingPoint {
  Complex beta;
  Complex energy;
  double component_gap = 0.0;  // smallest sampled distance between the two components
  int iterations = 0;
};

/// Point where the two band-pair components meet. Throws NoTouchingError when
/// the components stay apart or the refined point is off the negative real axis.
TouchingPoint gbz_touching_point(const Gbz& gbz);

enum class Direction { Left, Right, None };

struct SkinDirection {
  Direction direction = Direction::None;
  double mean_log_modulus = 0.0;
};

SkinDirection skin_direction(const Gbz& gbz, double tol = 1e-6);
Direction reversed(Direction d);
std::string_view to_string(Direction d);

/// Chain length used to sample the bulk bands in gap_report.
inline constexpr int kBulkSites = 160;

/// Gap analysis against a precomputed OBC spectrum (gamma = 0) and a bulk ObcFit GBZ.
GapReport gap_report_from(const LatticeModel& model, const CVector& obc_energies,
                          const Gbz& bulk, GapTolerances tol = {});

}  // namespace nhse
