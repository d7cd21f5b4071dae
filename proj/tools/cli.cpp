#include "nhse/cli.hpp"

#include "nhse/io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

namespace nhse::cli {

namespace {

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

bool want_csv(const CommandContext& ctx) { return ctx.format != OutputFormat::Svg; }
bool want_svg(const CommandContext& ctx) { return ctx.format != OutputFormat::Csv; }

class Writer {
 public:
  explicit Writer(const CommandContext& ctx, CommandResult& result) : ctx_(ctx), result_(result) {
    std::filesystem::create_directories(ctx.out_dir);
  }

  template <typename Fn>
  void text(const std::string& name, Fn&& fn) {
    const std::string path = (ctx_.out_dir / name).string();
    io::with_output_file(path, std::forward<Fn>(fn));
    result_.files.push_back(path);
  }

  template <typename Fn>
  void binary(const std::string& name, Fn&& fn) {
    const std::string path = (ctx_.out_dir / name).string();
    io::with_output_file(path, std::forward<Fn>(fn), true);
    result_.files.push_back(path);
  }

 private:
  const CommandContext& ctx_;
  CommandResult& result_;
};

io::ScatterSeries complex_series(const std::string& name, const std::vector<Complex>& z,
                                 const std::string& color) {
  io::ScatterSeries s{name, {}, {}, color};
  for (const Complex& v : z) {
    s.x.push_back(v.real());
    s.y.push_back(v.imag());
  }
  return s;
}

std::vector<Complex> as_vector(const CVector& v) { return {v.data(), v.data() + v.size()}; }

// |Re E_a - Re E_b| of the two modes with largest Im E, in Hz.
double beat_frequency(const CVector& ev) {
  if (ev.size() < 2) return 0.0;
  std::vector<Index> idx(size_t(ev.size()));
  for (Index i = 0; i < ev.size(); ++i) idx[size_t(i)] = i;
  std::partial_sort(idx.begin(), idx.begin() + 2, idx.end(),
                    [&](Index a, Index b) { return ev(a).imag() > ev(b).imag(); });
  return std::abs(ev(idx[0]).real() - ev(idx[1]).real()) / kTwoPi;
}

GapTolerances tolerances(const PhaseDiagramConfig& pd) { return {pd.tol_im, pd.tol_gap}; }

WaveField run_evolution(const RunConfig& config) {
  const auto times = uniform_time_grid(config.evolve.horizon, config.evolve.dt);
  EvolveOptions opt;
  opt.propagator = config.evolve.propagator;
  return evolve(config.model, poke_state(config.model, config.evolve.poke_site), times, opt);
}

}  // namespace

CommandResult cmd_spectrum(const RunConfig& config, const CommandContext& ctx) {
  CommandResult result;
  Writer w(ctx, result);
  const LatticeModel& m = config.model;
  const Spectrum obc = obc_spectrum(m.with_bc(BoundaryCondition::Open));
  const Spectrum pbc = pbc_spectrum(m.with_bc(BoundaryCondition::Periodic), 256);
  const PhaseLabel label = classify_phase(m, tolerances(config.phase_diagram));

  if (want_csv(ctx)) {
    w.text("spectrum_obc.csv", [&](std::ostream& o) { io::write_spectrum_csv(o, obc.eigenvalues); });
    w.text("spectrum_pbc.csv", [&](std::ostream& o) { io::write_spectrum_csv(o, pbc.eigenvalues); });
  }
  if (want_svg(ctx)) {
    io::ScatterSpec spec;
    spec.title = "Complex spectrum";
    spec.x_label = "Re E (rad/s)";
    spec.y_label = "Im E (rad/s)";
    spec.series = {complex_series("PBC", as_vector(pbc.eigenvalues), "#9e9e9e"),
                   complex_series("OBC", as_vector(obc.eigenvalues), "#d62728")};
    w.text("spectrum.svg", [&](std::ostream& o) { io::write_scatter_svg(o, spec); });
  }
  result.summary = "spectrum: sites=" + std::to_string(m.n_sites()) +
                   " max|Im E|=" + fmt("%.6g", obc.max_abs_im()) + " rad/s" +
                   " beat=" + fmt("%.4g", beat_frequency(obc.eigenvalues)) + " Hz" +
                   " phase=" + std::string(to_string(label.label)) +
                   " direction=" + std::string(to_string(label.direction.direction));
  return result;
}

CommandResult cmd_gbz(const RunConfig& config, const CommandContext& ctx) {
  CommandResult result;
  Writer w(ctx, result);
  const LatticeModel& m = config.model;
  const Gbz fit = gbz_compute(m, GbzMethod::ObcFit, config.gbz.n_sites);
  std::optional<Gbz> cp;
  double deviation = std::numeric_limits<double>::quiet_NaN();
  if (config.gbz.cross_validate) {
    cp = gbz_compute(m, GbzMethod::CharPoly, config.gbz.n_sites);
    deviation = gbz_cross_validate(fit, *cp);
  }
  std::string touching = "none";
  if (fit.n_band_pairs() >= 2) {
    try {
      const TouchingPoint tp = gbz_touching_point(fit);
      touching = fmt("%.6g", tp.beta.real()) + fmt("%+.3gi", tp.beta.imag());
    } catch (const NoTouchingError&) {
    }
  }

  if (want_csv(ctx)) {
    w.text("gbz_obcfit.csv", [&](std::ostream& o) { io::write_gbz_csv(o, fit); });
    if (cp) w.text("gbz_charpoly.csv", [&](std::ostream& o) { io::write_gbz_csv(o, *cp); });
  }
  if (want_svg(ctx)) {
    static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd"};
    io::ScatterSpec spec;
    spec.title = "Generalized Brillouin zone";
    spec.x_label = "Re beta";
    spec.y_label = "Im beta";
    spec.unit_circle = true;
    for (int p = 0; p < fit.n_band_pairs(); ++p)
      spec.series.push_back(
          complex_series("band pair " + std::to_string(p), fit.betas(p), colors[p % 4]));
    w.text("gbz.svg", [&](std::ostream& o) { io::write_scatter_svg(o, spec); });
  }
  result.summary = "gbz: points=" + std::to_string(fit.points.size()) +
                   " |beta| in [" + fmt("%.6g", fit.min_modulus()) + ", " + fmt("%.6g", fit.max_modulus()) +
                   "] direction=" + std::string(to_string(skin_direction(fit).direction)) +
                   " touching=" + touching +
                   (cp ? " deviation=" + fmt("%.3g", deviation) : std::string());
  return result;
}

CommandResult cmd_evolve(const RunConfig& config, const CommandContext& ctx) {
  CommandResult result;
  Writer w(ctx, result);
  const WaveField field = run_evolution(config);
  const EnergyTrace energy = energy_trace(field);
  const int quarter = std::max(1, field.model.n_sites() / 4);
  const auto left = left_fraction(field, quarter);

  const int site = config.stft.site;
  if (site < 1 || site > field.model.n_sites())
    throw ValidationError("stft.site " + std::to_string(site) + " outside 1.." +
                          std::to_string(field.model.n_sites()));
  const RMatrix theta = synthesize_signal(field, field.model.omega0);
  std::vector<double> signal(theta.rows());
  for (Index i = 0; i < theta.rows(); ++i) signal[size_t(i)] = theta(i, site - 1);

  std::optional<Spectrogram> sg;
  const double fs = 1.0 / config.evolve.dt;
  if (std::lround(config.stft.window * fs) <= long(signal.size()))
    sg = stft(signal, {fs, config.stft.window, config.stft.hop});

  if (want_csv(ctx)) {
    w.text("wavefield.csv", [&](std::ostream& o) { io::write_wavefield_csv(o, field); });
    w.binary("wavefield.bin", [&](std::ostream& o) { io::write_wavefield_binary(o, field); });
    w.text("energy.csv", [&](std::ostream& o) { io::write_energy_csv(o, energy); });
    w.text("signal.csv", [&](std::ostream& o) { io::write_signal_csv(o, field.times, signal); });
    if (sg) w.text("spectrogram.csv", [&](std::ostream& o) { io::write_spectrogram_csv(o, *sg); });
  }
  if (want_svg(ctx)) {
    io::HeatmapSpec map;
    map.title = "|psi(t, x)|^2";
    map.x_label = "site";
    map.y_label = "time (s)";
    for (Index s = 0; s < field.n_sites(); ++s) map.x.push_back(double(s + 1));
    const Index stride = std::max<Index>(1, field.n_times() / 400);
    std::vector<double> ts;
    for (Index i = 0; i < field.n_times(); i += stride) ts.push_back(field.times[size_t(i)]);
    map.values.resize(Index(ts.size()), field.n_sites());
    for (Index r = 0; r < Index(ts.size()); ++r)
      map.values.row(r) = field.amplitudes.row(r * stride).cwiseAbs2();
    map.y = ts;
    map.log_scale = true;
    w.text("wavefield.svg", [&](std::ostream& o) { io::write_heatmap_svg(o, map); });
    if (sg) {
      io::HeatmapSpec spec;
      spec.title = "Spectrogram of site " + std::to_string(site);
      spec.x_label = "time (s)";
      spec.y_label = "frequency (Hz)";
      spec.x = sg->times;
      spec.y = sg->frequencies;
      spec.values = sg->magnitudes;
      spec.log_scale = true;
      w.text("spectrogram.svg", [&](std::ostream& o) { io::write_heatmap_svg(o, spec); });
    }
  }
  std::string dominant = "n/a";
  if (sg && sg->magnitudes.cols() > 0) {
    Index k;
    sg->magnitudes.col(sg->magnitudes.cols() - 1).maxCoeff(&k);
    dominant = fmt("%.4g", sg->frequencies[size_t(k)]) + " Hz";
  }
  result.summary = "evolve: samples=" + std::to_string(field.n_times()) +
                   " P(T)=" + fmt("%.6g", energy.energy.back()) +
                   " left-quarter fraction=" + fmt("%.4f", left.back()) +
                   " dominant=" + dominant;
  return result;
}

CommandResult cmd_project(const RunConfig& config, const CommandContext& ctx) {
  CommandResult result;
  Writer w(ctx, result);
  const WaveField full = run_evolution(config);
  const Index stride =
      std::max<Index>(1, Index(std::llround(config.project.sample_every / config.evolve.dt)));
  WaveField field;
  field.model = full.model;
  std::vector<Index> keep;
  for (Index i = 0; i < full.n_times(); i += stride) keep.push_back(i);
  field.amplitudes.resize(Index(keep.size()), full.n_sites());
  for (size_t r = 0; r < keep.size(); ++r) {
    field.times.push_back(full.times[size_t(keep[r])]);
    field.amplitudes.row(Index(r)) = full.amplitudes.row(keep[r]);
  }

  const Gbz gbz = gbz_compute(config.model, GbzMethod::ObcFit, config.project.gbz_sites);
  const GbzProjection proj =
      laplace_projection(field, gbz, {config.project.kernel, config.project.normalize});
  const ModeDecomposition dec = obc_decomposition(field, obc_spectrum(config.model));

  if (want_csv(ctx)) {
    w.text("projection.csv", [&](std::ostream& o) { io::write_projection_csv(o, proj); });
    w.text("projection_points.csv", [&](std::ostream& o) { io::write_gbz_csv(o, gbz); });
    w.text("projection_mean_modulus.csv", [&](std::ostream& o) {
      o << "time,mean_abs_beta\n";
      for (size_t i = 0; i < proj.times.size(); ++i)
        o << io::format_double(proj.times[i]) << ','
          << io::format_double(weighted_mean_modulus(proj, Index(i))) << '\n';
    });
    w.text("decomposition.csv", [&](std::ostream& o) { io::write_decomposition_csv(o, dec); });
  }
  if (want_svg(ctx)) {
    io::HeatmapSpec spec;
    spec.title = "|C(t, beta)| over GBZ points";
    spec.x_label = "GBZ point";
    spec.y_label = "time (s)";
    for (size_t p = 0; p < proj.points.size(); ++p) spec.x.push_back(double(p));
    spec.y = proj.times;
    spec.values = proj.magnitude;
    w.text("projection.svg", [&](std::ostream& o) { io::write_heatmap_svg(o, spec); });

    io::HeatmapSpec d;
    d.title = "|D_j(t)|";
    d.x_label = "mode";
    d.y_label = "time (s)";
    for (Index j = 0; j < dec.coefficients.cols(); ++j) d.x.push_back(double(j));
    d.y = dec.times;
    d.values = dec.coefficients.cwiseAbs();
    d.log_scale = true;
    w.text("decomposition.svg", [&](std::ostream& o) { io::write_heatmap_svg(o, d); });
  }
  Index j;
  dec.coefficients.row(dec.coefficients.rows() - 1).cwiseAbs().maxCoeff(&j);
  const Complex ej = dec.eigenvalues(j);
  result.summary = "project: times=" + std::to_string(proj.times.size()) +
                   " points=" + std::to_string(proj.points.size()) +
                   " mean|beta| " + fmt("%.4f", weighted_mean_modulus(proj, 0)) + " -> " +
                   fmt("%.4f", weighted_mean_modulus(proj, Index(proj.times.size()) - 1)) +
                   " late dominant mode E=" + fmt("%.4f", ej.real()) + fmt("%+.4fi", ej.imag());
  return result;
}

CommandResult cmd_phase_diagram(const RunConfig& config, const CommandContext& ctx) {
  CommandResult result;
  Writer w(ctx, result);
  const PhaseDiagramConfig& pd = config.phase_diagram;
  ScanOptions opt;
  opt.threads = ctx.threads;
  opt.tol = tolerances(pd);
  const PhaseDiagram diagram =
      scan_phase_diagram(config.model.t1, config.model.t2, {pd.t3_min, pd.t3_max},
                         {pd.t4_min, pd.t4_max}, pd.resolution, pd.n_cells, opt);
  if (want_csv(ctx))
    w.text("phase_diagram.csv", [&](std::ostream& o) { io::write_phase_diagram_csv(o, diagram); });
  if (want_svg(ctx))
    w.text("phase_diagram.svg", [&](std::ostream& o) { io::write_phase_diagram_svg(o, diagram); });

  std::map<std::string, int> counts;
  for (const PhaseLabel& c : diagram.cells) ++counts[std::string(to_string(c.label))];
  std::string tally;
  for (const auto& [label, n] : counts) tally += " " + label + "=" + std::to_string(n);
  result.summary = "phase-diagram: " + std::to_string(pd.resolution) + "x" +
                   std::to_string(pd.resolution) + tally;
  return result;
}

CommandResult cmd_sweep(const RunConfig& config, const CommandContext& ctx) {
  CommandResult result;
  Writer w(ctx, result);
  const SweepConfig& sc = config.sweep;
  const auto times = uniform_time_grid(sc.horizon, sc.dt);
  const CVector psi0 = poke_state(sc.path.model_at(0.0, sc.n_cells, sc.gamma), sc.poke_site);
  SweepOptions opt;
  opt.n_cells = sc.n_cells;
  opt.gamma = sc.gamma;
  opt.threads = ctx.threads;
  const SweepResult r = transition_sweep(sc.path, sc.samples, times, psi0, opt);

  if (want_csv(ctx)) {
    w.text("sweep.csv", [&](std::ostream& o) { io::write_sweep_csv(o, r); });
    w.text("sweep_traces.csv", [&](std::ostream& o) { io::write_sweep_traces_csv(o, r); });
  }
  if (want_svg(ctx)) {
    io::ScatterSpec spec;
    spec.title = "Growth rate along the path";
    spec.x_label = "m";
    spec.y_label = "rate (1/s)";
    spec.lines = true;
    spec.series = {{"fitted lambda", r.m, r.growth_rates, "#1f77b4"},
                   {"2 max Im E", r.m, r.twice_max_im, "#d62728"}};
    w.text("sweep.svg", [&](std::ostream& o) { io::write_scatter_svg(o, spec); });
  }
  const double mismatch = max_relative_fd_mismatch(one_sided_differences(r.m, r.growth_rates));
  const Kink kink = detect_kink(r.m, r.growth_rates, r.twice_max_im);
  result.summary = "sweep: samples=" + std::to_string(r.m.size()) +
                   " max fd mismatch=" + fmt("%.3g", mismatch) +
                   (kink.found ? " kink at m=" + fmt("%.4g", r.m[kink.index]) + " ratio=" + fmt("%.3g", kink.ratio)
                               : std::string(" kink=none"));
  return result;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Non-Hermitian skin effect toolkit"};
  app.require_subcommand(1);
  std::string config_path, preset_name, out_dir = ".", format = "both";
  int threads = 0;
  bool dump_config = false;
  app.add_option("--config", config_path, "Configuration file (sectioned key = value)");
  app.add_option("--preset", preset_name, "Named parameter set; --config keys override it")
      ->check(CLI::IsMember(preset_names()));
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--threads", threads, "Worker threads for grid scans (0: all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "svg", "both"}));
  app.add_flag("--dump-config", dump_config, "Print the effective configuration and exit");

  using Command = CommandResult (*)(const RunConfig&, const CommandContext&);
  const std::vector<std::pair<std::string, Command>> commands = {
      {"spectrum", cmd_spectrum},  {"gbz", cmd_gbz},
      {"evolve", cmd_evolve},      {"project", cmd_project},
      {"phase-diagram", cmd_phase_diagram}, {"sweep", cmd_sweep}};
  const std::map<std::string, std::string> help = {
      {"spectrum", "OBC and PBC spectra, phase label"},
      {"gbz", "Generalized Brillouin zone by both methods"},
      {"evolve", "Poke evolution, energy, signal and spectrogram"},
      {"project", "GBZ projection and OBC mode decomposition of an evolution"},
      {"phase-diagram", "Phase labels over a (t3, t4) grid"},
      {"sweep", "Growth rates along a parameter path"}};
  for (const auto& [name, fn] : commands) app.add_subcommand(name, help.at(name));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    RunConfig config = preset_name.empty() ? RunConfig{} : preset(preset_name);
    if (!config_path.empty()) config = load_config_file(config_path, config);
    validate(config.model);
    if (dump_config) {
      out << to_config_text(config);
      return kExitOk;
    }
    CommandContext ctx;
    ctx.out_dir = out_dir;
    ctx.format = format == "csv" ? OutputFormat::Csv : format == "svg" ? OutputFormat::Svg : OutputFormat::Both;
    ctx.threads = threads;
    for (const auto& [name, fn] : commands) {
      if (app.got_subcommand(name)) {
        out << fn(config, ctx).summary << '\n';
        return kExitOk;
      }
    }
    return kExitFailure;
  } catch (const ValidationError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const HorizonTruncation& e) {
    err << "numerical error: " << e.what() << " (last valid time " << e.last_valid_time() << " s)\n";
    return kExitNumeric;
  } catch (const Error& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace nhse::cli
