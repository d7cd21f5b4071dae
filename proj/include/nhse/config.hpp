#pragma once

#include "nhse/analysis.hpp"
#include "nhse/dynamics.hpp"
#include "nhse/errors.hpp"
#include "nhse/gbz.hpp"
#include "nhse/model.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace nhse {

/// Malformed configuration text; what() is prefixed with "<source>:<line>: ".
class ConfigError : public ValidationError {
 public:
  ConfigError(const std::string& source, int line, const std::string& message)
      : ValidationError(source + ":" + std::to_string(line) + ": " + message), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

struct EvolveConfig {
  double horizon = kDefaultHorizon;  // s
  double dt = 1.0 / kSampleRate;     // s
  int poke_site = 20;                // 1-based global site
  Propagator propagator = Propagator::Auto;
};

struct StftConfig {
  double window = 2.0;  // s
  double hop = 0.1;     // s
  int site = 1;         // 1-based site whose signal is analysed
};

struct GbzConfig {
  int n_sites = 160;
  bool cross_validate = true;
};

struct ProjectConfig {
  int gbz_sites = 160;
  LaplaceKernel kernel = LaplaceKernel::Laplace;
  bool normalize = true;
  double sample_every = 0.1;  // s between exported time slices
};

struct PhaseDiagramConfig {
  double t3_min = 0.5, t3_max = 5.0;  // rad/s
  double t4_min = 0.5, t4_max = 5.0;  // rad/s
  int resolution = 10;
  int n_cells = 25;
  double tol_im = -1.0;   // rad/s; negative selects 1e-6 x spectral radius
  double tol_gap = -1.0;  // rad/s; negative selects 1e-3 x spectral radius
};

struct SweepConfig {
  PathSpec path = path1();
  int samples = 13;
  double horizon = 100.0;  // s
  double dt = 0.05;        // s
  int poke_site = 20;
  int n_cells = 10;
  double gamma = 0.0;      // rad/s
};

struct RunConfig {
  LatticeModel model;
  EvolveConfig evolve;
  StftConfig stft;
  GbzConfig gbz;
  ProjectConfig project;
  PhaseDiagramConfig phase_diagram;
  SweepConfig sweep;
  unsigned seed = 1;
};

/// Keys present in the text override the corresponding fields of `base`.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>", RunConfig base = {});
RunConfig parse_config_text(const std::string& text, const std::string& source = "<config>",
                            RunConfig base = {});
RunConfig load_config_file(const std::string& path, RunConfig base = {});
/// Text form accepted by parse_config (all sections, all keys).
std::string to_config_text(const RunConfig& config);

std::string model_to_text(const LatticeModel& model);
LatticeModel model_from_text(const std::string& text);

/// Named parameter sets: fig4a, fig4e, fig4i, fig3d, fig5h, fig5i.
RunConfig preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace nhse
