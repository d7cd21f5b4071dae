#pragma once

#include "nhse/model.hpp"
#include "nhse/spectral.hpp"
#include "nhse/types.hpp"

#include <vector>

namespace nhse {

/// Complex amplitudes psi(t, site); row i holds the state at times[i].
struct WaveField {
  std::vector<double> times;  // s
  CMatrix amplitudes;         // time x sites
  LatticeModel model;

  Index n_times() const noexcept { return amplitudes.rows(); }
  Index n_sites() const noexcept { return amplitudes.cols(); }
  CVector state(Index i) const { return amplitudes.row(i).transpose(); }
};

struct EnergyTrace {
  std::vector<double> times;
  std::vector<double> energy;  // P(t) = sum_x |psi|^2
};

/// Magnitude spectrogram; magnitudes(k, j) is frequency k at frame j.
struct Spectrogram {
  std::vector<double> times;        // frame centres, s
  std::vector<double> frequencies;  // Hz, 0 .. fs/2
  RMatrix magnitudes;
};

enum class Propagator { Auto, Spectral, Integrator };

struct EvolveOptions {
  Propagator propagator = Propagator::Auto;
  double rtol = 1e-11;  // integrator per-step relative tolerance
  double atol = 1e-14;
  double overflow_limit = 1e120;
};

inline constexpr double kDefaultHorizon = 20.0;   // s
inline constexpr double kSampleRate = 500.0;      // Hz

/// Unit amplitude on one site (1-based global index), zero elsewhere.
CVector poke_state(const LatticeModel& model, int site);

/// 0, dt, 2 dt, ... up to and including horizon (within round-off).
std::vector<double> uniform_time_grid(double horizon, double dt);

/// psi(t) = exp(-i H_OBC t) psi0 on the given grid, which must start at 0 and increase.
WaveField evolve(const LatticeModel& model, const CVector& psi0, const std::vector<double>& times,
                 const EvolveOptions& options = {});

/// Spectral propagation with a precomputed OBC spectrum of `model`.
WaveField evolve_spectral(const LatticeModel& model, const Spectrum& spectrum, const CVector& psi0,
                          const std::vector<double>& times, double overflow_limit = 1e120);

/// Adaptive Dormand-Prince 5(4) integration of i dpsi/dt = H psi.
WaveField evolve_integrator(const LatticeModel& model, const CVector& psi0,
                            const std::vector<double>& times, const EvolveOptions& options = {});

EnergyTrace energy_trace(const WaveField& field);

/// Energy-weighted mean unit-cell coordinate (cells numbered 1..N).
std::vector<double> packet_center(const WaveField& field);

/// Fraction of P(t) carried by the first `sites` sites.
std::vector<double> left_fraction(const WaveField& field, int sites);

/// theta_n(t) = Re[psi_n(t) exp(-i omega0 t)]; time x sites.
RMatrix synthesize_signal(const WaveField& field, double omega0);

struct StftOptions {
  double fs = kSampleRate;  // Hz
  double window = 2.0;      // s, Hann taper
  double hop = 0.1;         // s
};

Spectrogram stft(const std::vector<double>& signal, const StftOptions& options = {});

}  // namespace nhse
