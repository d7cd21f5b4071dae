#include "nhse/config.hpp"

#include "nhse/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace nhse {

namespace {

std::string trim(std::string s) {
  const auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return char(std::tolower(c)); });
  return s;
}

double to_double(const std::string& v) { return io::parse_double(v); }

int to_int(const std::string& v) {
  const double d = io::parse_double(v);
  if (d != std::floor(d) || std::abs(d) > 2e9) throw ValidationError("expected an integer, got '" + v + "'");
  return int(d);
}

bool to_bool(const std::string& v) {
  const std::string l = lower(v);
  if (l == "true" || l == "yes" || l == "1" || l == "on") return true;
  if (l == "false" || l == "no" || l == "0" || l == "off") return false;
  throw ValidationError("expected a boolean, got '" + v + "'");
}

Propagator to_propagator(const std::string& v) {
  const std::string l = lower(v);
  if (l == "auto") return Propagator::Auto;
  if (l == "spectral") return Propagator::Spectral;
  if (l == "integrator") return Propagator::Integrator;
  throw ValidationError("unknown propagator '" + v + "'");
}

LaplaceKernel to_kernel(const std::string& v) {
  const std::string l = lower(v);
  if (l == "laplace") return LaplaceKernel::Laplace;
  if (l == "matched") return LaplaceKernel::Matched;
  throw ValidationError("unknown projection kernel '" + v + "'");
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, std::map<std::string, Setter>>& schema() {
  static const std::map<std::string, std::map<std::string, Setter>> s = {
      {"model",
       {{"family", [](RunConfig& c, const std::string& v) { c.model.family = parse_family(v); }},
        {"t1", [](RunConfig& c, const std::string& v) { c.model.t1 = to_double(v); }},
        {"t2", [](RunConfig& c, const std::string& v) { c.model.t2 = to_double(v); }},
        {"t3", [](RunConfig& c, const std::string& v) { c.model.t3 = to_double(v); }},
        {"t4", [](RunConfig& c, const std::string& v) { c.model.t4 = to_double(v); }},
        {"omega0", [](RunConfig& c, const std::string& v) { c.model.omega0 = to_double(v); }},
        {"gamma", [](RunConfig& c, const std::string& v) { c.model.gamma = to_double(v); }},
        {"n_cells", [](RunConfig& c, const std::string& v) { c.model.n_cells = to_int(v); }},
        {"bc", [](RunConfig& c, const std::string& v) { c.model.bc = parse_boundary(v); }},
        {"delta", [](RunConfig& c, const std::string& v) { c.model.delta = to_double(v); }}}},
      {"evolve",
       {{"horizon", [](RunConfig& c, const std::string& v) { c.evolve.horizon = to_double(v); }},
        {"dt", [](RunConfig& c, const std::string& v) { c.evolve.dt = to_double(v); }},
        {"poke_site", [](RunConfig& c, const std::string& v) { c.evolve.poke_site = to_int(v); }},
        {"propagator", [](RunConfig& c, const std::string& v) { c.evolve.propagator = to_propagator(v); }}}},
      {"stft",
       {{"window", [](RunConfig& c, const std::string& v) { c.stft.window = to_double(v); }},
        {"hop", [](RunConfig& c, const std::string& v) { c.stft.hop = to_double(v); }},
        {"site", [](RunConfig& c, const std::string& v) { c.stft.site = to_int(v); }}}},
      {"gbz",
       {{"n_sites", [](RunConfig& c, const std::string& v) { c.gbz.n_sites = to_int(v); }},
        {"cross_validate", [](RunConfig& c, const std::string& v) { c.gbz.cross_validate = to_bool(v); }}}},
      {"project",
       {{"gbz_sites", [](RunConfig& c, const std::string& v) { c.project.gbz_sites = to_int(v); }},
        {"kernel", [](RunConfig& c, const std::string& v) { c.project.kernel = to_kernel(v); }},
        {"normalize", [](RunConfig& c, const std::string& v) { c.project.normalize = to_bool(v); }},
        {"sample_every", [](RunConfig& c, const std::string& v) { c.project.sample_every = to_double(v); }}}},
      {"phase_diagram",
       {{"t3_min", [](RunConfig& c, const std::string& v) { c.phase_diagram.t3_min = to_double(v); }},
        {"t3_max", [](RunConfig& c, const std::string& v) { c.phase_diagram.t3_max = to_double(v); }},
        {"t4_min", [](RunConfig& c, const std::string& v) { c.phase_diagram.t4_min = to_double(v); }},
        {"t4_max", [](RunConfig& c, const std::string& v) { c.phase_diagram.t4_max = to_double(v); }},
        {"resolution", [](RunConfig& c, const std::string& v) { c.phase_diagram.resolution = to_int(v); }},
        {"n_cells", [](RunConfig& c, const std::string& v) { c.phase_diagram.n_cells = to_int(v); }},
        {"tol_im", [](RunConfig& c, const std::string& v) { c.phase_diagram.tol_im = to_double(v); }},
        {"tol_gap", [](RunConfig& c, const std::string& v) { c.phase_diagram.tol_gap = to_double(v); }}}},
      {"sweep",
       {{"t1", [](RunConfig& c, const std::string& v) { c.sweep.path.t1 = to_double(v); }},
        {"t2", [](RunConfig& c, const std::string& v) { c.sweep.path.t2 = to_double(v); }},
        {"t3_0", [](RunConfig& c, const std::string& v) { c.sweep.path.t3_0 = to_double(v); }},
        {"t3_slope", [](RunConfig& c, const std::string& v) { c.sweep.path.t3_slope = to_double(v); }},
        {"t4_0", [](RunConfig& c, const std::string& v) { c.sweep.path.t4_0 = to_double(v); }},
        {"t4_slope", [](RunConfig& c, const std::string& v) { c.sweep.path.t4_slope = to_double(v); }},
        {"m_max", [](RunConfig& c, const std::string& v) { c.sweep.path.m_max = to_double(v); }},
        {"samples", [](RunConfig& c, const std::string& v) { c.sweep.samples = to_int(v); }},
        {"horizon", [](RunConfig& c, const std::string& v) { c.sweep.horizon = to_double(v); }},
        {"dt", [](RunConfig& c, const std::string& v) { c.sweep.dt = to_double(v); }},
        {"poke_site", [](RunConfig& c, const std::string& v) { c.sweep.poke_site = to_int(v); }},
        {"n_cells", [](RunConfig& c, const std::string& v) { c.sweep.n_cells = to_int(v); }},
        {"gamma", [](RunConfig& c, const std::string& v) { c.sweep.gamma = to_double(v); }}}},
      {"run", {{"seed", [](RunConfig& c, const std::string& v) { c.seed = unsigned(to_int(v)); }}}},
  };
  return s;
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::string& source, RunConfig base) {
  RunConfig c = std::move(base);
  std::string line, section;
  int lineno = 0;
  bool saw_model = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(source, lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!schema().count(section)) throw ConfigError(source, lineno, "unknown section [" + section + "]");
      if (section == "model") saw_model = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(source, lineno, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) throw ConfigError(source, lineno, "key '" + key + "' outside any section");
    const auto& keys = schema().at(section);
    const auto it = keys.find(key);
    if (it == keys.end()) throw ConfigError(source, lineno, "unknown key '" + key + "' in [" + section + "]");
    if (value.empty()) throw ConfigError(source, lineno, "empty value for '" + key + "'");
    try {
      it->second(c, value);
    } catch (const ValidationError& e) {
      throw ConfigError(source, lineno, e.what());
    }
  }
  if (saw_model) {
    try {
      validate(c.model);
    } catch (const ValidationError& e) {
      throw ConfigError(source, lineno, std::string("invalid model: ") + e.what());
    }
  }
  return c;
}

RunConfig parse_config_text(const std::string& text, const std::string& source, RunConfig base) {
  std::istringstream in(text);
  return parse_config(in, source, std::move(base));
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open file");
  return parse_config(in, path, std::move(base));
}

std::string model_to_text(const LatticeModel& m) {
  using io::format_double;
  std::ostringstream o;
  o << "[model]\n"
    << "family = " << to_string(m.family) << '\n'
    << "t1 = " << format_double(m.t1) << "  # rad/s\n"
    << "t2 = " << format_double(m.t2) << "  # rad/s\n"
    << "t3 = " << format_double(m.t3) << "  # rad/s\n"
    << "t4 = " << format_double(m.t4) << "  # rad/s\n"
    << "omega0 = " << format_double(m.omega0) << "  # rad/s\n"
    << "gamma = " << format_double(m.gamma) << "  # rad/s\n"
    << "n_cells = " << m.n_cells << '\n'
    << "bc = " << to_string(m.bc) << '\n';
  if (m.delta) o << "delta = " << format_double(*m.delta) << "  # rad/s\n";
  return o.str();
}

LatticeModel model_from_text(const std::string& text) { return parse_config_text(text, "<model>").model; }

std::string to_config_text(const RunConfig& c) {
  using io::format_double;
  auto prop = [](Propagator p) {
    return p == Propagator::Auto ? "auto" : p == Propagator::Spectral ? "spectral" : "integrator";
  };
  std::ostringstream o;
  o << model_to_text(c.model) << '\n'
    << "[evolve]\nhorizon = " << format_double(c.evolve.horizon) << "  # s\ndt = " << format_double(c.evolve.dt)
    << "  # s\npoke_site = " << c.evolve.poke_site << "\npropagator = " << prop(c.evolve.propagator) << "\n\n"
    << "[stft]\nwindow = " << format_double(c.stft.window) << "  # s\nhop = " << format_double(c.stft.hop)
    << "  # s\nsite = " << c.stft.site << "\n\n"
    << "[gbz]\nn_sites = " << c.gbz.n_sites << "\ncross_validate = " << (c.gbz.cross_validate ? "true" : "false")
    << "\n\n"
    << "[project]\ngbz_sites = " << c.project.gbz_sites
    << "\nkernel = " << (c.project.kernel == LaplaceKernel::Laplace ? "laplace" : "matched")
    << "\nnormalize = " << (c.project.normalize ? "true" : "false")
    << "\nsample_every = " << format_double(c.project.sample_every) << "  # s\n\n"
    << "[phase_diagram]\nt3_min = " << format_double(c.phase_diagram.t3_min)
    << "\nt3_max = " << format_double(c.phase_diagram.t3_max)
    << "\nt4_min = " << format_double(c.phase_diagram.t4_min)
    << "\nt4_max = " << format_double(c.phase_diagram.t4_max) << "\nresolution = " << c.phase_diagram.resolution
    << "\nn_cells = " << c.phase_diagram.n_cells << "\ntol_im = " << format_double(c.phase_diagram.tol_im)
    << "\ntol_gap = " << format_double(c.phase_diagram.tol_gap) << "\n\n"
    << "[sweep]\nt1 = " << format_double(c.sweep.path.t1) << "\nt2 = " << format_double(c.sweep.path.t2)
    << "\nt3_0 = " << format_double(c.sweep.path.t3_0) << "\nt3_slope = " << format_double(c.sweep.path.t3_slope)
    << "\nt4_0 = " << format_double(c.sweep.path.t4_0) << "\nt4_slope = " << format_double(c.sweep.path.t4_slope)
    << "\nm_max = " << format_double(c.sweep.path.m_max) << "\nsamples = " << c.sweep.samples
    << "\nhorizon = " << format_double(c.sweep.horizon) << "  # s\ndt = " << format_double(c.sweep.dt)
    << "  # s\npoke_site = " << c.sweep.poke_site << "\nn_cells = " << c.sweep.n_cells
    << "\ngamma = " << format_double(c.sweep.gamma) << "  # rad/s\n\n"
    << "[run]\nseed = " << c.seed << '\n';
  return o.str();
}

std::vector<std::string> preset_names() { return {"fig4a", "fig4e", "fig4i", "fig3d", "fig5h", "fig5i"}; }

RunConfig preset(const std::string& name) {
  RunConfig c;
  auto fig4 = [&](double t1, double t2, double t3, double t4, double omega0, double gamma) {
    c.model = make_model(Family::GT, t1, t2, t3, t4, omega0, gamma, 10);
  };
  if (name == "fig4a") {
    fig4(2.1, 14.9, 11.2, 3.7, 86.5, 2.8);
  } else if (name == "fig4e") {
    fig4(3.2, 6.7, 22.6, 8.4, 80.9, 4.4);
  } else if (name == "fig4i") {
    fig4(2.1, 14.9, 12.6, 8.9, 89.8, 2.5);
  } else if (name == "fig3d") {
    c.model = make_model(Family::GT, 1.0, 2.0, 4.0, 1.0, 0.0, 0.0, 25);
    c.phase_diagram = PhaseDiagramConfig{};
  } else if (name == "fig5h" || name == "fig5i") {
    c.sweep.path = name == "fig5h" ? path1() : path2();
    c.sweep.samples = name == "fig5h" ? 13 : 26;
    c.model = c.sweep.path.model_at(0.0, c.sweep.n_cells);
  } else {
    throw ValidationError("unknown preset '" + name + "'");
  }
  return c;
}

}  // namespace nhse
