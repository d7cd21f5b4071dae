#include "nhse/dynamics.hpp"

#include "nhse/errors.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <string>

namespace nhse {

namespace {

void check_grid(const std::vector<double>& times) {
  if (times.empty()) throw ValidationError("time grid is empty");
  if (times.front() != 0.0) throw ValidationError("time grid must start at 0");
  for (size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw ValidationError("time grid must be strictly increasing");
}

void check_state(const LatticeModel& model, const CVector& psi0) {
  if (psi0.size() != model.n_sites())
    throw ValidationError("initial state has " + std::to_string(psi0.size()) + " entries, chain has " +
                          std::to_string(model.n_sites()) + " sites");
}

void guard(const CVector& psi, double limit, const std::vector<double>& times, size_t i) {
  const double peak = psi.cwiseAbs().maxCoeff();
  if (!std::isfinite(peak) || peak > limit) {
    const double last = i > 0 ? times[i - 1] : 0.0;
    throw HorizonTruncation("amplitude exceeded " + std::to_string(limit) + " before t = " +
                                std::to_string(times[i]) + " s; last valid time " + std::to_string(last) + " s",
                            last);
  }
}

}  // namespace

CVector poke_state(const LatticeModel& model, int site) {
  if (site < 1 || site > model.n_sites())
    throw ValidationError("poke site " + std::to_string(site) + " outside 1.." + std::to_string(model.n_sites()));
  CVector psi = CVector::Zero(model.n_sites());
  psi(site - 1) = 1.0;
  return psi;
}

std::vector<double> uniform_time_grid(double horizon, double dt) {
  if (!(horizon >= 0.0) || !(dt > 0.0)) throw ValidationError("uniform_time_grid: need horizon >= 0, dt > 0");
  const long n = std::lround(std::floor(horizon / dt + 1e-9));
  std::vector<double> t(size_t(n + 1));
  for (long i = 0; i <= n; ++i) t[size_t(i)] = double(i) * dt;
  return t;
}

WaveField evolve_spectral(const LatticeModel& model, const Spectrum& spectrum, const CVector& psi0,
                          const std::vector<double>& times, double overflow_limit) {
  check_grid(times);
  check_state(model, psi0);
  if (spectrum.size() != psi0.size()) throw ValidationError("spectrum dimension does not match the state");
  WaveField f;
  f.model = model;
  f.times = times;
  f.amplitudes.resize(Index(times.size()), psi0.size());
  const CVector c = spectrum.left.adjoint() * psi0;
  f.amplitudes.row(0) = psi0.transpose();
  for (size_t i = 1; i < times.size(); ++i) {
    const CVector phase = (Complex(0.0, -times[i]) * spectrum.eigenvalues).array().exp();
    const CVector psi = spectrum.right * c.cwiseProduct(phase);
    guard(psi, overflow_limit, times, i);
    f.amplitudes.row(Index(i)) = psi.transpose();
  }
  return f;
}

WaveField evolve_integrator(const LatticeModel& model, const CVector& psi0,
                            const std::vector<double>& times, const EvolveOptions& opt) {
  check_grid(times);
  check_state(model, psi0);
  const CMatrix h = real_space_hamiltonian(model.with_bc(BoundaryCondition::Open));
  const CMatrix a = Complex(0.0, -1.0) * h;  // dpsi/dt = a psi

  // Dormand-Prince 5(4) tableau
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  (void)c2, (void)c3, (void)c4, (void)c5;  // autonomous system

  WaveField f;
  f.model = model;
  f.times = times;
  f.amplitudes.resize(Index(times.size()), psi0.size());
  f.amplitudes.row(0) = psi0.transpose();

  CVector y = psi0;
  const double hnorm = std::max(h.cwiseAbs().rowwise().sum().maxCoeff(), 1e-300);
  double step = 0.1 / hnorm;
  CVector k1 = a * y, k2, k3, k4, k5, k6, k7, y5, err;
  for (size_t i = 1; i < times.size(); ++i) {
    double t = times[i - 1];
    const double target = times[i];
    while (t < target) {
      const bool last = t + step >= target;
      const double hstep = last ? target - t : step;
      k2 = a * (y + hstep * (a21 * k1));
      k3 = a * (y + hstep * (a31 * k1 + a32 * k2));
      k4 = a * (y + hstep * (a41 * k1 + a42 * k2 + a43 * k3));
      k5 = a * (y + hstep * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      k6 = a * (y + hstep * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      y5 = y + hstep * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      k7 = a * y5;
      err = hstep * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      const double scale = opt.atol + opt.rtol * std::max(y.norm(), y5.norm());
      const double ratio = err.norm() / scale;
      if (ratio <= 1.0) {
        t = last ? target : t + hstep;
        y = y5;
        k1 = k7;  // first-same-as-last
      }
      const double factor = ratio > 0.0 ? 0.9 * std::pow(ratio, -0.2) : 5.0;
      const double proposed = hstep * std::clamp(factor, 0.2, 5.0);
      if (!last || ratio > 1.0) step = proposed;
      if (step < 1e-14 * std::max(1.0, target)) throw NumericalError("integrator step size underflow");
    }
    guard(y, opt.overflow_limit, times, i);
    f.amplitudes.row(Index(i)) = y.transpose();
  }
  return f;
}

WaveField evolve(const LatticeModel& model, const CVector& psi0, const std::vector<double>& times,
                 const EvolveOptions& options) {
  check_grid(times);
  check_state(model, psi0);
  if (options.propagator == Propagator::Integrator) return evolve_integrator(model, psi0, times, options);
  const Spectrum s = obc_spectrum(model);
  if (options.propagator == Propagator::Auto && s.near_exceptional)
    return evolve_integrator(model, psi0, times, options);
  return evolve_spectral(model, s, psi0, times, options.overflow_limit);
}

EnergyTrace energy_trace(const WaveField& field) {
  EnergyTrace e;
  e.times = field.times;
  e.energy.resize(field.times.size());
  for (Index i = 0; i < field.n_times(); ++i) e.energy[size_t(i)] = field.amplitudes.row(i).squaredNorm();
  return e;
}

std::vector<double> packet_center(const WaveField& field) {
  const int s = field.model.sites_per_cell();
  std::vector<double> xc(size_t(field.n_times()));
  for (Index i = 0; i < field.n_times(); ++i) {
    double num = 0.0, den = 0.0;
    for (Index x = 0; x < field.n_sites(); ++x) {
      const double w = std::norm(field.amplitudes(i, x));
      num += double(x / s + 1) * w;
      den += w;
    }
    xc[size_t(i)] = den > 0.0 ? num / den : 0.0;
  }
  return xc;
}

std::vector<double> left_fraction(const WaveField& field, int sites) {
  const Index edge = std::clamp<Index>(Index(sites), 0, field.n_sites());
  std::vector<double> out(size_t(field.n_times()));
  for (Index i = 0; i < field.n_times(); ++i) {
    const double total = field.amplitudes.row(i).squaredNorm();
    out[size_t(i)] = total > 0.0 ? field.amplitudes.row(i).head(edge).squaredNorm() / total : 0.0;
  }
  return out;
}

RMatrix synthesize_signal(const WaveField& field, double omega0) {
  if (!(omega0 >= 0.0)) throw ValidationError("omega0 must be >= 0");
  RMatrix out(field.n_times(), field.n_sites());
  for (Index i = 0; i < field.n_times(); ++i) {
    const Complex carrier = std::polar(1.0, -omega0 * field.times[size_t(i)]);
    for (Index x = 0; x < field.n_sites(); ++x) out(i, x) = (field.amplitudes(i, x) * carrier).real();
  }
  return out;
}

Spectrogram stft(const std::vector<double>& signal, const StftOptions& opt) {
  if (!(opt.fs > 0.0)) throw ValidationError("stft: sample rate must be positive");
  const long wl = std::lround(opt.window * opt.fs);
  const long hop = std::lround(opt.hop * opt.fs);
  if (wl < 2) throw ValidationError("stft: window shorter than two samples");
  if (hop < 1) throw ValidationError("stft: hop must be at least one sample");
  if (wl > long(signal.size())) throw ValidationError("stft: window longer than the signal");

  std::vector<double> window(static_cast<size_t>(wl));
  double wsum = 0.0;
  for (long n = 0; n < wl; ++n) {
    window[size_t(n)] = 0.5 - 0.5 * std::cos(kTwoPi * double(n) / double(wl));
    wsum += window[size_t(n)];
  }
  const long n_frames = (long(signal.size()) - wl) / hop + 1;
  const long n_freq = wl / 2 + 1;

  Spectrogram sg;
  sg.magnitudes.resize(n_freq, n_frames);
  sg.frequencies.resize(size_t(n_freq));
  for (long k = 0; k < n_freq; ++k) sg.frequencies[size_t(k)] = double(k) * opt.fs / double(wl);
  sg.times.resize(size_t(n_frames));

  Eigen::FFT<double> fft;
  std::vector<double> frame(static_cast<size_t>(wl));
  std::vector<Complex> spectrum;
  for (long j = 0; j < n_frames; ++j) {
    const long start = j * hop;
    for (long n = 0; n < wl; ++n) frame[size_t(n)] = signal[size_t(start + n)] * window[size_t(n)];
    fft.fwd(spectrum, frame);
    for (long k = 0; k < n_freq; ++k) sg.magnitudes(k, j) = 2.0 * std::abs(spectrum[size_t(k)]) / wsum;
    sg.times[size_t(j)] = (double(start) + 0.5 * double(wl)) / opt.fs;
  }
  return sg;
}

}  // namespace nhse
