#include "nhse/analysis.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace nhse;

TEST_CASE("OBC coefficients evolve as exp(-i E t)") {
  const LatticeModel m = test::phase_a();
  const Spectrum s = obc_spectrum(m);
  const auto times = uniform_time_grid(2.0, 0.5);
  const WaveField f = evolve(m, poke_state(m, 20), times);
  const ModeDecomposition d = obc_decomposition(f, s);
  for (size_t i = 0; i < times.size(); ++i)
    for (Index j = 0; j < s.size(); ++j) {
      const Complex expected = d.coefficients(0, j) * std::exp(Complex(0, -1) * s.eigenvalues(j) * times[i]);
      CHECK(std::abs(d.coefficients(Index(i), j) - expected) < 1e-8 * std::max(1.0, std::abs(expected)));
    }
}

TEST_CASE("decomposition reconstructs the field") {
  for (const LatticeModel& m : {test::phase_a(), test::phase_b(), test::phase_c()}) {
    const Spectrum s = obc_spectrum(m);
    const WaveField f = evolve(m, test::random_state(m.n_sites()), uniform_time_grid(3.0, 0.3));
    const CMatrix back = reconstruct(obc_decomposition(f, s), s);
    CHECK((back - f.amplitudes).cwiseAbs().maxCoeff() / f.amplitudes.cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("decomposition checks dimensions") {
  const LatticeModel m = test::phase_a();
  const WaveField f = evolve(m, poke_state(m, 1), {0.0});
  CHECK_THROWS_AS(obc_decomposition(f, obc_spectrum(test::phase_a(5))), ValidationError);
}

namespace {

// A non-Bloch eigenmode of H(beta0) laid out on the chain: psi(x, a) = R_a beta0^x.
WaveField synthetic_mode(const LatticeModel& m, Complex beta0, Index mode) {
  const Spectrum sb = non_bloch_spectrum(m, beta0);
  WaveField f;
  f.model = m;
  f.times = {0.0};
  f.amplitudes.resize(1, m.n_sites());
  const int s = m.sites_per_cell();
  for (int x = 0; x < m.n_cells; ++x)
    for (int a = 0; a < s; ++a) f.amplitudes(0, x * s + a) = sb.right(a, mode) * std::pow(beta0, double(x + 1));
  return f;
}

}  // namespace

TEST_CASE("Laplace projection of a synthetic mode is N times a Kronecker delta") {
  const LatticeModel m = test::phase_a(40);
  const Gbz gbz = gbz_compute(m, GbzMethod::ObcFit, 160);
  const GbzPoint& p0 = gbz.points[gbz.points.size() / 3];
  Gbz single = gbz;
  single.points = {p0};
  for (Index mode = 0; mode < 4; ++mode) {
    const GbzProjection proj = laplace_projection(synthetic_mode(m, p0.beta, mode), single);
    for (Index j = 0; j < 4; ++j) {
      const Complex expected = j == mode ? Complex(m.n_cells) : Complex(0.0);
      CHECK(std::abs(proj.coefficients[0](0, j) - expected) < 1e-8 * m.n_cells);
    }
  }
}

TEST_CASE("projection matches the brute-force sum") {
  const LatticeModel m = test::phase_b();
  const Gbz gbz = gbz_compute(m, GbzMethod::ObcFit, 80);
  const WaveField f = evolve(m, poke_state(m, 20), {0.0, 1.0});
  for (LaplaceKernel kernel : {LaplaceKernel::Laplace, LaplaceKernel::Matched}) {
    const GbzProjection proj = laplace_projection(f, gbz, {kernel, false});
    for (size_t p = 0; p < gbz.points.size(); p += 23) {
      const Complex b = gbz.points[p].beta;
      const Spectrum sb = non_bloch_spectrum(m, b);
      double norm = 0.0;
      for (int x = 1; x <= m.n_cells; ++x) norm += std::pow(std::abs(b), 2.0 * x);
      for (Index j = 0; j < 4; ++j) {
        Complex c = 0.0;
        for (int x = 1; x <= m.n_cells; ++x)
          for (int a = 0; a < 4; ++a) {
            const Complex w = kernel == LaplaceKernel::Laplace ? std::pow(b, -double(x))
                                                               : std::conj(std::pow(b, double(x))) / std::sqrt(norm);
            c += std::conj(sb.left(a, j)) * f.amplitudes(1, (x - 1) * 4 + a) * w;
          }
        CHECK(std::abs(proj.coefficients[1](Index(p), j) - c) < 1e-10 * std::max(1.0, std::abs(c)));
      }
    }
  }
}

TEST_CASE("normalized projection peaks at one") {
  const LatticeModel m = test::phase_c();
  const Gbz gbz = gbz_compute(m, GbzMethod::ObcFit, 80);
  const WaveField f = evolve(m, poke_state(m, 20), {0.0, 2.0, 4.0});
  const GbzProjection proj = laplace_projection(f, gbz, {LaplaceKernel::Laplace, true});
  for (const CMatrix& c : proj.coefficients) CHECK(c.cwiseAbs().maxCoeff() == doctest::Approx(1.0));
  const double mean = weighted_mean_modulus(proj, 2);
  CHECK(mean >= gbz.min_modulus() - 1e-12);
  CHECK(mean <= gbz.max_modulus() + 1e-12);
}

TEST_CASE("band pair modes") {
  CHECK(band_pair_modes(4, 0) == std::vector<Index>{1, 2});
  CHECK(band_pair_modes(4, 1) == std::vector<Index>{0, 3});
  CHECK(band_pair_modes(2, 0) == std::vector<Index>{0, 1});
  CHECK_THROWS_AS(band_pair_modes(4, 2), ValidationError);
}

TEST_CASE("phase labels of the canonical models") {
  CHECK(classify_phase(test::phase_a()).label == Phase::A);
  CHECK(classify_phase(test::phase_b()).label == Phase::B);
  CHECK(classify_phase(test::phase_c()).label == Phase::C);
  CHECK(classify_phase(make_model(Family::GT, 1, 2, 2.5, 2.5, 0, 0, 25)).label == Phase::HermitianLine);
}

TEST_CASE("Mx primes the label") {
  for (const LatticeModel& m : {test::phase_a(), test::phase_b(), test::phase_c()}) {
    const PhaseLabel l = classify_phase(m);
    const PhaseLabel r = classify_phase(apply_symmetry(m, SymmetryOp::Mx));
    CHECK(r.label == primed_swap(l.label));
    CHECK(r.direction.direction == reversed(l.direction.direction));
  }
}

TEST_CASE("classification does not depend on damping") {
  for (const LatticeModel& m : {test::phase_a(), test::phase_b(), test::phase_c()}) {
    CHECK(classify_phase(m.with_gamma(0.0)).label == classify_phase(m.with_gamma(5.0)).label);
  }
}

TEST_CASE("phase names round trip") {
  for (Phase p : {Phase::A, Phase::Aprime, Phase::B, Phase::Bprime, Phase::C, Phase::Cprime, Phase::HermitianLine,
                  Phase::Boundary}) {
    CHECK(parse_phase(to_string(p)) == p);
    CHECK(primed_swap(primed_swap(p)) == p);
  }
  CHECK(to_string(Phase::Aprime) == "A'");
}

TEST_CASE("phase diagram is mirror symmetric with primed exchange") {
  ScanOptions opt;
  const PhaseDiagram pd = scan_phase_diagram(1.0, 2.0, {1.0, 4.0}, {1.0, 4.0}, 4, 10, opt);
  REQUIRE(pd.cells.size() == 16);
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 4; ++j) CHECK(pd.at(i, j).label == primed_swap(pd.at(j, i).label));
  for (size_t i = 0; i < 4; ++i) CHECK(pd.at(i, i).label == Phase::HermitianLine);
}

TEST_CASE("scan results do not depend on the thread count") {
  ScanOptions one, many;
  one.threads = 1;
  many.threads = 3;
  const PhaseDiagram a = scan_phase_diagram(1.0, 2.0, {2.0, 4.0}, {1.0, 3.0}, 3, 8, one);
  const PhaseDiagram b = scan_phase_diagram(1.0, 2.0, {2.0, 4.0}, {1.0, 3.0}, 3, 8, many);
  for (size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].label == b.cells[i].label);
    CHECK(a.cells[i].max_abs_im == b.cells[i].max_abs_im);
  }
}

TEST_CASE("Hatano-Nelson direction diagram") {
  const DirectionDiagram dd = scan_direction_diagram({0.5, 2.0}, {0.5, 2.0}, 4, 20, 1);
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 4; ++j) {
      const double t1 = dd.t1_grid[i], t2 = dd.t2_grid[j];
      const Direction d = dd.cells[i * 4 + j].direction;
      if (t1 > t2) CHECK(d == Direction::Left);
      else if (t1 < t2) CHECK(d == Direction::Right);
      else CHECK(d == Direction::None);
    }
}

TEST_CASE("growth rate of an exact exponential") {
  EnergyTrace e;
  for (int i = 0; i <= 100; ++i) {
    e.times.push_back(0.1 * i);
    e.energy.push_back(3.0 * std::exp(0.37 * 0.1 * i));
  }
  CHECK(growth_rate(e) == doctest::Approx(0.37).epsilon(1e-10));
}

TEST_CASE("one-sided differences") {
  const std::vector<double> x = {0, 1, 2, 3, 4};
  const std::vector<double> lin = {1, 3, 5, 7, 9};
  const auto d = one_sided_differences(x, lin);
  CHECK(std::isnan(d.backward[0]));
  CHECK(std::isnan(d.forward[4]));
  CHECK(d.backward[2] == doctest::Approx(2.0));
  CHECK(max_relative_fd_mismatch(d) == doctest::Approx(0.0));

  const std::vector<double> kinked = {-2, -1, 0, 0, 0};
  const std::vector<double> im = {0.5, 0.3, 0.1, 0.0, 0.0};
  const Kink k = detect_kink(x, kinked, im);
  CHECK(k.found);
  CHECK(k.boundary == 3);
  CHECK(k.index == 2);
  CHECK(k.ratio > 1e6);
}

TEST_CASE("path definitions") {
  const LatticeModel a = path1().model_at(0.5, 10);
  CHECK(a.t3 == doctest::Approx(3.5));
  CHECK(a.t4 == doctest::Approx(1.5));
  const LatticeModel b = path2().model_at(2.0, 10);
  CHECK(b.t3 == doctest::Approx(4.0));
  CHECK(b.t4 == doctest::Approx(3.0));
}

TEST_CASE("matched-kernel projection drifts toward smaller |beta| as the packet reaches the left edge") {
  for (const LatticeModel& m : {test::phase_a(), test::phase_b(), test::phase_c()}) {
    const Gbz gbz = gbz_compute(m, GbzMethod::ObcFit, 160);
    const WaveField f = evolve(m, poke_state(m, 20), uniform_time_grid(20.0, 2.0));
    const GbzProjection proj = laplace_projection(f, gbz, {LaplaceKernel::Matched, true});
    double late = 0.0;
    for (Index t = 5; t < 11; ++t) late += weighted_mean_modulus(proj, t) / 6.0;
    CHECK(late < weighted_mean_modulus(proj, 0));
  }
}
