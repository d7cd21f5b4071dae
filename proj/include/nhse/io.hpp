#pragma once

#include "nhse/analysis.hpp"
#include "nhse/dynamics.hpp"
#include "nhse/gbz.hpp"
#include "nhse/spectral.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace nhse::io {

/// 17 significant digits, so that every double survives a text round trip.
std::string format_double(double v);
double parse_double(std::string_view text);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  size_t column(std::string_view name) const;
  double number(size_t row, size_t col) const { return parse_double(rows[row][col]); }
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

// Writers take a stream; *_file helpers open the path and throw on failure.
void write_spectrum_csv(std::ostream& out, const CVector& eigenvalues);  // index,Re_E,Im_E
CVector read_spectrum_csv(std::istream& in);

void write_complex_matrix_csv(std::ostream& out, const CMatrix& m);  // row,col,Re,Im
CMatrix read_complex_matrix_csv(std::istream& in);

void write_gbz_csv(std::ostream& out, const Gbz& gbz);  // band_pair,Re_beta,Im_beta,Re_E,Im_E
std::vector<GbzPoint> read_gbz_csv(std::istream& in);

void write_wavefield_csv(std::ostream& out, const WaveField& field);  // time,site,Re_psi,Im_psi
/// Reads times and amplitudes; the model is left default-constructed.
WaveField read_wavefield_csv(std::istream& in);

/// Columnar little-endian dump: magic "NHSEWF1\0", uint64 n_times, uint64 n_sites,
/// then n_times times, then Re and Im columns (site-major, n_times values each).
void write_wavefield_binary(std::ostream& out, const WaveField& field);
WaveField read_wavefield_binary(std::istream& in);

void write_energy_csv(std::ostream& out, const EnergyTrace& trace);  // time,P
void write_signal_csv(std::ostream& out, const std::vector<double>& times,
                      const std::vector<double>& signal);  // time,theta
void write_spectrogram_csv(std::ostream& out, const Spectrogram& sg);  // time,frequency_hz,magnitude

void write_phase_diagram_csv(std::ostream& out, const PhaseDiagram& pd);  // t3,t4,label,max_im
PhaseDiagram read_phase_diagram_csv(std::istream& in);

void write_direction_diagram_csv(std::ostream& out, const DirectionDiagram& dd);  // t1,t2,direction,mean_log_beta

/// time,index,Re,Im with index = mode (decomposition).
void write_decomposition_csv(std::ostream& out, const ModeDecomposition& d);
/// time,index,Re,Im with index = point * modes + mode (projection coefficients).
void write_projection_csv(std::ostream& out, const GbzProjection& p);
/// time,index,Re,Im of one coefficient matrix (time x index).
CMatrix read_coefficients_csv(std::istream& in, std::vector<double>* times = nullptr);

void write_sweep_csv(std::ostream& out, const SweepResult& r);         // m,lambda,twice_max_im,truncated
void write_sweep_traces_csv(std::ostream& out, const SweepResult& r);  // m,time,P

// --- SVG ---------------------------------------------------------------------

struct HeatmapSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;  // column coordinates
  std::vector<double> y;  // row coordinates
  RMatrix values;         // rows follow y, columns follow x
  bool log_scale = false;
};

void write_heatmap_svg(std::ostream& out, const HeatmapSpec& spec);

struct ScatterSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::string color;
};

struct ScatterSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<ScatterSeries> series;
  bool unit_circle = false;
  bool lines = false;
};

void write_scatter_svg(std::ostream& out, const ScatterSpec& spec);
void write_phase_diagram_svg(std::ostream& out, const PhaseDiagram& pd);

/// Opens `path` for writing and calls fn(stream); throws std::runtime_error on I/O failure.
template <typename Fn>
void with_output_file(const std::string& path, Fn&& fn, bool binary = false);

}  // namespace nhse::io

#include <fstream>
#include <stdexcept>

template <typename Fn>
void nhse::io::with_output_file(const std::string& path, Fn&& fn, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  fn(out);
  if (!out) throw std::runtime_error("write to " + path + " failed");
}
