#include "nhse/dynamics.hpp"
#include "nhse/spectral.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace nhse;

namespace {

double rel(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("two-site chain matches the closed-form propagator") {
  // H = [[0, t1], [t2, 0]], exp(-iHt) = cos(wt) I - i sin(wt)/w H with w = sqrt(t1 t2)
  const double t1 = 1.3, t2 = 0.4, w = std::sqrt(t1 * t2);
  const LatticeModel m = make_model(Family::HatanoNelson, t1, t2, 0, 0, 0, 0, 2);
  const auto times = uniform_time_grid(5.0, 0.25);
  const CVector psi0 = poke_state(m, 1);
  for (Propagator p : {Propagator::Spectral, Propagator::Integrator}) {
    const WaveField f = evolve(m, psi0, times, {p});
    for (size_t i = 0; i < times.size(); ++i) {
      const double t = times[i];
      CHECK(std::abs(f.amplitudes(Index(i), 0) - std::cos(w * t)) < 1e-9);
      CHECK(std::abs(f.amplitudes(Index(i), 1) - Complex(0, -std::sin(w * t) / w * t2)) < 1e-9);
    }
  }
}

TEST_CASE("t = 0 returns the initial state exactly") {
  const LatticeModel m = test::phase_a();
  const CVector psi0 = test::random_state(m.n_sites());
  for (Propagator p : {Propagator::Spectral, Propagator::Integrator}) {
    const WaveField f = evolve(m, psi0, {0.0}, {p});
    REQUIRE(f.n_times() == 1);
    CHECK(f.state(0) == psi0);
  }
}

TEST_CASE("evolution is a semigroup") {
  const LatticeModel m = test::phase_c();
  const CVector psi0 = test::random_state(m.n_sites());
  const WaveField a = evolve(m, psi0, {0.0, 0.7, 1.9});
  const WaveField b = evolve(m, a.state(1), {0.0, 1.2});
  CHECK((a.state(2) - b.state(1)).norm() < 1e-9 * a.state(2).norm());
}

TEST_CASE("spectral and integrator propagators agree") {
  for (const LatticeModel& m : {test::phase_a(), test::phase_b(), test::phase_c()}) {
    const auto times = uniform_time_grid(5.0, 0.05);
    const CVector psi0 = poke_state(m, 20);
    const WaveField s = evolve(m, psi0, times, {Propagator::Spectral});
    const WaveField i = evolve(m, psi0, times, {Propagator::Integrator});
    CHECK(rel(i.amplitudes, s.amplitudes) < 1e-6);
  }
}

TEST_CASE("Hermitian evolution conserves P") {
  LatticeModel m = test::random_gt(10);
  m.t4 = m.t3;
  const auto times = uniform_time_grid(20.0, 0.1);
  for (Propagator p : {Propagator::Spectral, Propagator::Integrator}) {
    const EnergyTrace e = energy_trace(evolve(m, poke_state(m, 7), times, {p}));
    for (double v : e.energy) CHECK(std::abs(v - 1.0) < 1e-6);
  }
}

TEST_CASE("uniform damping factorizes out of the evolution") {
  const LatticeModel m = test::phase_a().with_gamma(0.0);
  const double gamma = 2.64;
  const auto times = uniform_time_grid(4.0, 0.1);
  const CVector psi0 = test::random_state(m.n_sites());
  for (Propagator p : {Propagator::Spectral, Propagator::Integrator}) {
    const WaveField free = evolve(m, psi0, times, {p});
    const WaveField damped = evolve(m.with_gamma(gamma), psi0, times, {p});
    double worst = 0.0;
    for (size_t i = 0; i < times.size(); ++i) {
      const CVector expected = std::exp(-gamma * times[i]) * free.state(Index(i));
      worst = std::max(worst, (damped.state(Index(i)) - expected).norm() / expected.norm());
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("runaway amplification reports the last valid time") {
  const LatticeModel m = test::phase_b().with_gamma(0.0);
  const auto times = uniform_time_grid(400.0, 1.0);
  try {
    evolve(m, poke_state(m, 20), times);
    FAIL("expected HorizonTruncation");
  } catch (const HorizonTruncation& e) {
    CHECK(e.last_valid_time() > 0.0);
    CHECK(e.last_valid_time() < 400.0);
  }
}

TEST_CASE("time grids and poke states") {
  const auto t = uniform_time_grid(1.0, 0.1);
  CHECK(t.size() == 11);
  CHECK(t.back() == doctest::Approx(1.0));
  CHECK(uniform_time_grid(0.0, 0.1).size() == 1);
  CHECK_THROWS_AS(uniform_time_grid(1.0, 0.0), ValidationError);
  const LatticeModel m = test::phase_a();
  CHECK_THROWS_AS(poke_state(m, 0), ValidationError);
  CHECK_THROWS_AS(poke_state(m, 41), ValidationError);
  CHECK(poke_state(m, 40)(39) == Complex(1.0));
  CHECK_THROWS_AS(evolve(m, poke_state(m, 1), {0.5, 1.0}), ValidationError);
}

TEST_CASE("observables of a hand-built field") {
  WaveField f;
  f.model = make_model(Family::GT, 1, 1, 1, 1, 0, 0, 2);
  f.times = {0.0};
  f.amplitudes = CMatrix::Zero(1, 8);
  f.amplitudes(0, 0) = Complex(0, 1);  // cell 1
  f.amplitudes(0, 5) = Complex(std::sqrt(3.0));  // cell 2
  CHECK(energy_trace(f).energy[0] == doctest::Approx(4.0));
  CHECK(packet_center(f)[0] == doctest::Approx((1.0 * 1 + 2.0 * 3) / 4));
  CHECK(left_fraction(f, 4)[0] == doctest::Approx(0.25));
  const RMatrix theta = synthesize_signal(f, 2.0);
  CHECK(theta(0, 5) == doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("synthesized signal oscillates at the carrier") {
  WaveField f;
  f.model = make_model(Family::HatanoNelson, 1, 1, 0, 0, 0, 0, 1);
  f.times = {0.0, 0.1, 0.2};
  f.amplitudes = CMatrix::Constant(3, 1, Complex(1.0));
  const RMatrix theta = synthesize_signal(f, 5.0);
  for (Index i = 0; i < 3; ++i) CHECK(theta(i, 0) == doctest::Approx(std::cos(5.0 * f.times[size_t(i)])));
}

TEST_CASE("STFT resolves on-bin tones with their amplitudes") {
  const double fs = 500.0;
  std::vector<double> x(size_t(fs * 6));
  for (size_t n = 0; n < x.size(); ++n) {
    const double t = double(n) / fs;
    x[n] = 0.7 * std::cos(kTwoPi * 12.0 * t) + 0.2 * std::sin(kTwoPi * 40.5 * t);
  }
  const Spectrogram sg = stft(x, {fs, 2.0, 0.5});
  REQUIRE(sg.frequencies.size() == 501);
  CHECK(sg.frequencies[1] == doctest::Approx(0.5));
  CHECK(sg.times.size() == 9);
  CHECK(sg.times.front() == doctest::Approx(1.0));
  for (Index c = 0; c < sg.magnitudes.cols(); ++c) {
    CHECK(sg.magnitudes(24, c) == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(sg.magnitudes(81, c) == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(sg.magnitudes(60, c) < 1e-9);
  }
}

TEST_CASE("STFT rejects impossible windows") {
  std::vector<double> x(100, 1.0);
  CHECK_THROWS_AS(stft(x, {500.0, 2.0, 0.1}), ValidationError);
  CHECK_THROWS_AS(stft(x, {500.0, 0.1, 0.0}), ValidationError);
}
