#pragma once

#include "nhse/model.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace nhse::test {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline Complex random_complex(double scale = 1.0) { return {uniform(-scale, scale), uniform(-scale, scale)}; }

/// Positive-hopping GT chain with hoppings drawn from [lo, hi] rad/s.
inline LatticeModel random_gt(int n_cells, double lo = 0.3, double hi = 5.0, double gamma = 0.0) {
  return make_model(Family::GT, uniform(lo, hi), uniform(lo, hi), uniform(lo, hi), uniform(lo, hi), 0.0, gamma,
                    n_cells);
}

inline CVector random_state(Index n) {
  CVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = random_complex();
  return v / v.norm();
}

/// Largest distance in an optimal-ish greedy pairing of two multisets.
inline double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
  if (a.size() != b.size()) return 1e300;
  double worst = 0.0;
  for (const Complex& z : a) {
    auto it = std::min_element(b.begin(), b.end(),
                               [&](const Complex& u, const Complex& v) { return std::abs(u - z) < std::abs(v - z); });
    worst = std::max(worst, std::abs(*it - z));
    b.erase(it);
  }
  return worst;
}

inline std::vector<Complex> to_std(const CVector& v) { return {v.data(), v.data() + v.size()}; }

// Canonical models used across suites (rad/s).
inline LatticeModel phase_a(int n_cells = 10) { return make_model(Family::GT, 2.1, 14.9, 11.2, 3.7, 86.5, 2.8, n_cells); }
inline LatticeModel phase_b(int n_cells = 10) { return make_model(Family::GT, 3.2, 6.7, 22.6, 8.4, 80.9, 4.4, n_cells); }
inline LatticeModel phase_c(int n_cells = 10) { return make_model(Family::GT, 2.1, 14.9, 12.6, 8.9, 89.8, 2.5, n_cells); }

}  // namespace nhse::test
