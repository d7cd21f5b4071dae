#include "nhse/config.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace nhse;

TEST_CASE("config text round trips") {
  RunConfig c = preset("fig4e");
  c.evolve.propagator = Propagator::Integrator;
  c.project.kernel = LaplaceKernel::Matched;
  c.phase_diagram.tol_im = 1e-7;
  c.sweep.path = path2();
  c.seed = 42;
  const std::string text = to_config_text(c);
  const RunConfig back = parse_config_text(text);
  CHECK(to_config_text(back) == text);
  CHECK(back.model.t3 == 22.6);
  CHECK(back.evolve.propagator == Propagator::Integrator);
  CHECK(back.project.kernel == LaplaceKernel::Matched);
  CHECK(back.seed == 42u);
}

TEST_CASE("model text round trips") {
  for (int trial = 0; trial < 10; ++trial) {
    LatticeModel m = test::random_gt(7, 0.1, 20.0, test::uniform(0, 3));
    m.omega0 = test::uniform(0, 100);
    const LatticeModel back = model_from_text(model_to_text(m));
    CHECK(back.t1 == m.t1);
    CHECK(back.t2 == m.t2);
    CHECK(back.t3 == m.t3);
    CHECK(back.t4 == m.t4);
    CHECK(back.gamma == m.gamma);
    CHECK(back.omega0 == m.omega0);
    CHECK(back.n_cells == 7);
  }
  LatticeModel s = make_model(Family::NHSSH, 1.0, 2.0, 0, 0, 0, 0, 4, BoundaryCondition::Periodic);
  s.delta = 0.125;
  const LatticeModel back = model_from_text(model_to_text(s));
  CHECK(back.family == Family::NHSSH);
  CHECK(back.bc == BoundaryCondition::Periodic);
  REQUIRE(back.delta);
  CHECK(*back.delta == 0.125);
}

TEST_CASE("comments, blank lines and overrides") {
  const std::string text =
      "# header\n"
      "\n"
      "[model]   # trailing\n"
      "  t3 = 5.5   \n"
      "[evolve]\n"
      "horizon = 3\n";
  const RunConfig c = parse_config_text(text, "x", preset("fig4a"));
  CHECK(c.model.t1 == 2.1);
  CHECK(c.model.t3 == 5.5);
  CHECK(c.model.omega0 == 86.5);
  CHECK(c.evolve.horizon == 3.0);
}

TEST_CASE("malformed configs are rejected with their line") {
  struct Case {
    const char* text;
    int line;
  };
  const Case cases[] = {
      {"[model]\nt1 = 1\nbogus = 2\n", 3},
      {"[model]\nt1 = 1\n[nope]\n", 3},
      {"t1 = 1\n", 1},
      {"[model]\nt1 1\n", 2},
      {"[model]\nt1 = abc\n", 2},
      {"[model]\nn_cells = 2.5\n", 2},
      {"[gbz]\ncross_validate = maybe\n", 2},
      {"[model\n", 1},
      {"[model]\nt1 =\n", 2},
      {"[evolve]\npropagator = magic\n", 2},
  };
  for (const Case& c : cases) {
    try {
      parse_config_text(c.text, "cfg");
      FAIL("accepted: " << c.text);
    } catch (const ConfigError& e) {
      CHECK(e.line() == c.line);
      CHECK(std::string(e.what()).rfind("cfg:" + std::to_string(c.line) + ":", 0) == 0);
    }
  }
}

TEST_CASE("invalid physics in a config is a config error") {
  CHECK_THROWS_AS(parse_config_text("[model]\nt1 = -1\n"), ConfigError);
}

TEST_CASE("presets carry the published parameter sets") {
  const RunConfig a = preset("fig4a");
  CHECK(a.model.t1 == 2.1);
  CHECK(a.model.t2 == 14.9);
  CHECK(a.model.t3 == 11.2);
  CHECK(a.model.t4 == 3.7);
  CHECK(a.model.omega0 == 86.5);
  CHECK(a.model.gamma == 2.8);
  CHECK(a.model.n_cells == 10);

  const RunConfig e = preset("fig4e");
  CHECK(e.model.t1 == 3.2);
  CHECK(e.model.t2 == 6.7);
  CHECK(e.model.t3 == 22.6);
  CHECK(e.model.t4 == 8.4);
  CHECK(e.model.omega0 == 80.9);
  CHECK(e.model.gamma == 4.4);

  const RunConfig i = preset("fig4i");
  CHECK(i.model.t3 == 12.6);
  CHECK(i.model.t4 == 8.9);
  CHECK(i.model.omega0 == 89.8);
  CHECK(i.model.gamma == 2.5);

  const RunConfig d = preset("fig3d");
  CHECK(d.model.t1 == 1.0);
  CHECK(d.model.t2 == 2.0);
  CHECK(d.phase_diagram.resolution == 10);
  CHECK(d.phase_diagram.t3_min == 0.5);
  CHECK(d.phase_diagram.t4_max == 5.0);

  const RunConfig h = preset("fig5h");
  CHECK(h.sweep.path.t3_slope == -1.0);
  CHECK(h.sweep.path.t4_slope == 1.0);
  CHECK(h.sweep.samples == 13);
  const RunConfig p = preset("fig5i");
  CHECK(p.sweep.path.t3_slope == 0.0);
  CHECK(p.sweep.path.m_max == 2.5);
  CHECK(p.sweep.samples == 26);

  for (const auto& name : preset_names()) CHECK_NOTHROW(preset(name));
  CHECK_THROWS_AS(preset("fig9z"), ValidationError);
}
