#include "nhse/io.hpp"

#include "nhse/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace nhse::io {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  if (text == "nan" || text == "-nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ValidationError("not a number: '" + std::string(text) + "'");
  return v;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

void expect_header(const CsvTable& t, std::initializer_list<const char*> names) {
  size_t i = 0;
  for (const char* n : names) {
    if (i >= t.header.size() || t.header[i] != n)
      throw ValidationError(std::string("unexpected CSV header, wanted column '") + n + "'");
    ++i;
  }
}

}  // namespace

size_t CsvTable::column(std::string_view name) const {
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw ValidationError("CSV column '" + std::string(name) + "' missing");
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty CSV");
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto row = split(line);
    if (row.size() != t.header.size()) throw ValidationError("CSV row width differs from header");
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  return read_csv(in);
}

void write_spectrum_csv(std::ostream& out, const CVector& ev) {
  out << "index,Re_E,Im_E\n";
  for (Index i = 0; i < ev.size(); ++i)
    out << i << ',' << format_double(ev(i).real()) << ',' << format_double(ev(i).imag()) << '\n';
}

CVector read_spectrum_csv(std::istream& in) {
  const CsvTable t = read_csv(in);
  expect_header(t, {"index", "Re_E", "Im_E"});
  CVector ev(Index(t.rows.size()));
  for (size_t r = 0; r < t.rows.size(); ++r) ev(Index(r)) = Complex(t.number(r, 1), t.number(r, 2));
  return ev;
}

void write_complex_matrix_csv(std::ostream& out, const CMatrix& m) {
  out << "row,col,Re,Im\n";
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      out << i << ',' << j << ',' << format_double(m(i, j).real()) << ',' << format_double(m(i, j).imag()) << '\n';
}

CMatrix read_complex_matrix_csv(std::istream& in) {
  const CsvTable t = read_csv(in);
  expect_header(t, {"row", "col", "Re", "Im"});
  Index rows = 0, cols = 0;
  for (size_t r = 0; r < t.rows.size(); ++r) {
    rows = std::max(rows, Index(t.number(r, 0)) + 1);
    cols = std::max(cols, Index(t.number(r, 1)) + 1);
  }
  CMatrix m = CMatrix::Zero(rows, cols);
  for (size_t r = 0; r < t.rows.size(); ++r)
    m(Index(t.number(r, 0)), Index(t.number(r, 1))) = Complex(t.number(r, 2), t.number(r, 3));
  return m;
}

void write_gbz_csv(std::ostream& out, const Gbz& g) {
  out << "band_pair,Re_beta,Im_beta,Re_E,Im_E\n";
  for (const auto& p : g.points)
    out << p.band_pair << ',' << format_double(p.beta.real()) << ',' << format_double(p.beta.imag()) << ','
        << format_double(p.energy.real()) << ',' << format_double(p.energy.imag()) << '\n';
}

std::vector<GbzPoint> read_gbz_csv(std::istream& in) {
  const CsvTable t = read_csv(in);
  expect_header(t, {"band_pair", "Re_beta", "Im_beta", "Re_E", "Im_E"});
  std::vector<GbzPoint> pts;
  for (size_t r = 0; r < t.rows.size(); ++r) {
    GbzPoint p;
    p.band_pair = int(t.number(r, 0));
    p.beta = Complex(t.number(r, 1), t.number(r, 2));
    p.energy = Complex(t.number(r, 3), t.number(r, 4));
    pts.push_back(p);
  }
  return pts;
}

void write_wavefield_csv(std::ostream& out, const WaveField& f) {
  out << "time,site,Re_psi,Im_psi\n";
  for (Index i = 0; i < f.n_times(); ++i) {
    const std::string t = format_double(f.times[size_t(i)]);
    for (Index x = 0; x < f.n_sites(); ++x)
      out << t << ',' << x + 1 << ',' << format_double(f.amplitudes(i, x).real()) << ','
          << format_double(f.amplitudes(i, x).imag()) << '\n';
  }
}

WaveField read_wavefield_csv(std::istream& in) {
  const CsvTable t = read_csv(in);
  expect_header(t, {"time", "site", "Re_psi", "Im_psi"});
  WaveField f;
  Index sites = 0;
  for (size_t r = 0; r < t.rows.size(); ++r) {
    const double time = t.number(r, 0);
    if (f.times.empty() || f.times.back() != time) f.times.push_back(time);
    sites = std::max(sites, Index(t.number(r, 1)));
  }
  f.amplitudes = CMatrix::Zero(Index(f.times.size()), sites);
  size_t ti = 0;
  for (size_t r = 0; r < t.rows.size(); ++r) {
    if (t.number(r, 0) != f.times[ti]) ++ti;
    f.amplitudes(Index(ti), Index(t.number(r, 1)) - 1) = Complex(t.number(r, 2), t.number(r, 3));
  }
  return f;
}

namespace {

constexpr char kMagic[8] = {'N', 'H', 'S', 'E', 'W', 'F', '1', '\0'};

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(out, bits);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw ValidationError("truncated wavefield dump");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) {
  const std::uint64_t bits = get_u64(in);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

void write_wavefield_binary(std::ostream& out, const WaveField& f) {
  out.write(kMagic, 8);
  put_u64(out, std::uint64_t(f.n_times()));
  put_u64(out, std::uint64_t(f.n_sites()));
  for (double t : f.times) put_f64(out, t);
  for (Index x = 0; x < f.n_sites(); ++x)
    for (Index i = 0; i < f.n_times(); ++i) put_f64(out, f.amplitudes(i, x).real());
  for (Index x = 0; x < f.n_sites(); ++x)
    for (Index i = 0; i < f.n_times(); ++i) put_f64(out, f.amplitudes(i, x).imag());
}

WaveField read_wavefield_binary(std::istream& in) {
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) throw ValidationError("not a wavefield dump");
  const auto nt = Index(get_u64(in));
  const auto ns = Index(get_u64(in));
  WaveField f;
  f.times.resize(size_t(nt));
  for (auto& t : f.times) t = get_f64(in);
  f.amplitudes.resize(nt, ns);
  RMatrix re(nt, ns);
  for (Index x = 0; x < ns; ++x)
    for (Index i = 0; i < nt; ++i) re(i, x) = get_f64(in);
  for (Index x = 0; x < ns; ++x)
    for (Index i = 0; i < nt; ++i) f.amplitudes(i, x) = Complex(re(i, x), get_f64(in));
  return f;
}

void write_energy_csv(std::ostream& out, const EnergyTrace& e) {
  out << "time,P\n";
  for (size_t i = 0; i < e.times.size(); ++i) out << format_double(e.times[i]) << ',' << format_double(e.energy[i]) << '\n';
}

void write_signal_csv(std::ostream& out, const std::vector<double>& times, const std::vector<double>& signal) {
  out << "time,theta\n";
  for (size_t i = 0; i < times.size(); ++i) out << format_double(times[i]) << ',' << format_double(signal[i]) << '\n';
}

void write_spectrogram_csv(std::ostream& out, const Spectrogram& sg) {
  out << "time,frequency_hz,magnitude\n";
  for (size_t j = 0; j < sg.times.size(); ++j)
    for (size_t k = 0; k < sg.frequencies.size(); ++k)
      out << format_double(sg.times[j]) << ',' << format_double(sg.frequencies[k]) << ','
          << format_double(sg.magnitudes(Index(k), Index(j))) << '\n';
}

void write_phase_diagram_csv(std::ostream& out, const PhaseDiagram& pd) {
  out << "t3,t4,label,max_im\n";
  for (size_t i = 0; i < pd.t3_grid.size(); ++i)
    for (size_t j = 0; j < pd.t4_grid.size(); ++j)
      out << format_double(pd.t3_grid[i]) << ',' << format_double(pd.t4_grid[j]) << ','
          << to_string(pd.at(i, j).label) << ',' << format_double(pd.at(i, j).max_abs_im) << '\n';
}

PhaseDiagram read_phase_diagram_csv(std::istream& in) {
  const CsvTable t = read_csv(in);
  expect_header(t, {"t3", "t4", "label", "max_im"});
  PhaseDiagram pd;
  std::map<double, size_t> i3, i4;
  for (size_t r = 0; r < t.rows.size(); ++r) {
    i3.emplace(t.number(r, 0), 0);
    i4.emplace(t.number(r, 1), 0);
  }
  for (auto& [v, idx] : i3) {
    idx = pd.t3_grid.size();
    pd.t3_grid.push_back(v);
  }
  for (auto& [v, idx] : i4) {
    idx = pd.t4_grid.size();
    pd.t4_grid.push_back(v);
  }
  pd.cells.resize(pd.t3_grid.size() * pd.t4_grid.size());
  for (size_t r = 0; r < t.rows.size(); ++r) {
    PhaseLabel& c = pd.at(i3[t.number(r, 0)], i4[t.number(r, 1)]);
    c.label = parse_phase(t.rows[r][2]);
    c.max_abs_im = t.number(r, 3);
  }
  return pd;
}

void write_direction_diagram_csv(std::ostream& out, const DirectionDiagram& dd) {
  out << "t1,t2,direction,mean_log_beta\n";
  const size_t n2 = dd.t2_grid.size();
  for (size_t k = 0; k < dd.cells.size(); ++k)
    out << format_double(dd.t1_grid[k / n2]) << ',' << format_double(dd.t2_grid[k % n2]) << ','
        << to_string(dd.cells[k].direction) << ',' << format_double(dd.cells[k].mean_log_modulus) << '\n';
}

void write_decomposition_csv(std::ostream& out, const ModeDecomposition& d) {
  out << "time,index,Re,Im\n";
  for (Index i = 0; i < d.coefficients.rows(); ++i) {
    const std::string t = format_double(d.times[size_t(i)]);
    for (Index j = 0; j < d.coefficients.cols(); ++j)
      out << t << ',' << j << ',' << format_double(d.coefficients(i, j).real()) << ','
          << format_double(d.coefficients(i, j).imag()) << '\n';
  }
}

void write_projection_csv(std::ostream& out, const GbzProjection& p) {
  out << "time,index,Re,Im\n";
  for (size_t i = 0; i < p.times.size(); ++i) {
    const std::string t = format_double(p.times[i]);
    const CMatrix& c = p.coefficients[i];
    for (Index q = 0; q < c.rows(); ++q)
      for (Index j = 0; j < c.cols(); ++j)
        out << t << ',' << q * c.cols() + j << ',' << format_double(c(q, j).real()) << ','
            << format_double(c(q, j).imag()) << '\n';
  }
}

CMatrix read_coefficients_csv(std::istream& in, std::vector<double>* times) {
  const CsvTable t = read_csv(in);
  expect_header(t, {"time", "index", "Re", "Im"});
  std::vector<double> ts;
  Index cols = 0;
  for (size_t r = 0; r < t.rows.size(); ++r) {
    const double time = t.number(r, 0);
    if (ts.empty() || ts.back() != time) ts.push_back(time);
    cols = std::max(cols, Index(t.number(r, 1)) + 1);
  }
  CMatrix m = CMatrix::Zero(Index(ts.size()), cols);
  size_t ti = 0;
  for (size_t r = 0; r < t.rows.size(); ++r) {
    if (t.number(r, 0) != ts[ti]) ++ti;
    m(Index(ti), Index(t.number(r, 1))) = Complex(t.number(r, 2), t.number(r, 3));
  }
  if (times) *times = std::move(ts);
  return m;
}

void write_sweep_csv(std::ostream& out, const SweepResult& r) {
  out << "m,lambda,twice_max_im,truncated\n";
  for (size_t i = 0; i < r.m.size(); ++i)
    out << format_double(r.m[i]) << ',' << format_double(r.growth_rates[i]) << ','
        << format_double(r.twice_max_im[i]) << ',' << (r.truncated[i] ? 1 : 0) << '\n';
}

void write_sweep_traces_csv(std::ostream& out, const SweepResult& r) {
  out << "m,time,P\n";
  for (size_t i = 0; i < r.m.size(); ++i) {
    const std::string m = format_double(r.m[i]);
    for (size_t k = 0; k < r.traces[i].times.size(); ++k)
      out << m << ',' << format_double(r.traces[i].times[k]) << ',' << format_double(r.traces[i].energy[k]) << '\n';
  }
}

// --- SVG ---------------------------------------------------------------------

namespace {

constexpr double kWidth = 640, kHeight = 480, kLeft = 70, kRight = 110, kTop = 40, kBottom = 60;

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '&': o += "&amp;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// Piecewise-linear approximation of the viridis colormap.
std::string viridis(double t) {
  static const double stops[5][3] = {
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0) * 4.0;
  const int i = std::min(int(t), 3);
  const double f = t - i;
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", int(stops[i][0] + f * (stops[i + 1][0] - stops[i][0])),
                int(stops[i][1] + f * (stops[i + 1][1] - stops[i][1])),
                int(stops[i][2] + f * (stops[i + 1][2] - stops[i][2])));
  return buf;
}

void open_svg(std::ostream& out, const std::string& title, const std::string& xl, const std::string& yl) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
      << "</text>\n";
  out << "<text x=\"" << (kLeft + (kWidth - kRight)) / 2 << "\" y=\"" << kHeight - 15
      << "\" text-anchor=\"middle\">" << escape(xl) << "</text>\n";
  out << "<text transform=\"translate(18," << (kTop + (kHeight - kBottom)) / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(yl) << "</text>\n";
}

void axes(std::ostream& out, double x0, double x1, double y0, double y1) {
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = kLeft + pw * i / 4, fy = kTop + ph - ph * i / 4;
    out << "<text x=\"" << fx << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">"
        << num(x0 + (x1 - x0) * i / 4) << "</text>\n";
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << fy + 4 << "\" text-anchor=\"end\">"
        << num(y0 + (y1 - y0) * i / 4) << "</text>\n";
  }
}

}  // namespace

void write_heatmap_svg(std::ostream& out, const HeatmapSpec& s) {
  const Index ny = s.values.rows(), nx = s.values.cols();
  if (nx == 0 || ny == 0) throw ValidationError("heatmap: empty data");
  auto tr = [&](double v) { return s.log_scale ? std::log10(std::max(v, 1e-300)) : v; };
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (Index i = 0; i < ny; ++i)
    for (Index j = 0; j < nx; ++j) {
      const double v = tr(s.values(i, j));
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  if (!(hi > lo)) hi = lo + 1.0;
  open_svg(out, s.title, s.x_label, s.y_label);
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  const double cw = pw / double(nx), ch = ph / double(ny);
  for (Index i = 0; i < ny; ++i)
    for (Index j = 0; j < nx; ++j)
      out << "<rect x=\"" << num(kLeft + cw * double(j)) << "\" y=\"" << num(kTop + ph - ch * double(i + 1))
          << "\" width=\"" << num(cw + 0.5) << "\" height=\"" << num(ch + 0.5) << "\" fill=\""
          << viridis((tr(s.values(i, j)) - lo) / (hi - lo)) << "\"/>\n";
  const double x0 = s.x.empty() ? 0.0 : s.x.front(), x1 = s.x.empty() ? double(nx) : s.x.back();
  const double y0 = s.y.empty() ? 0.0 : s.y.front(), y1 = s.y.empty() ? double(ny) : s.y.back();
  axes(out, x0, x1, y0, y1);
  // colour bar
  const double bx = kWidth - kRight + 20;
  for (int k = 0; k < 50; ++k)
    out << "<rect x=\"" << bx << "\" y=\"" << num(kTop + ph - ph * (k + 1) / 50.0) << "\" width=\"16\" height=\""
        << num(ph / 50.0 + 0.5) << "\" fill=\"" << viridis(k / 49.0) << "\"/>\n";
  out << "<text x=\"" << bx + 20 << "\" y=\"" << kTop + 10 << "\">" << num(hi) << "</text>\n";
  out << "<text x=\"" << bx + 20 << "\" y=\"" << kTop + ph << "\">" << num(lo) << "</text>\n";
  if (s.log_scale) out << "<text x=\"" << bx << "\" y=\"" << kTop - 6 << "\">log10</text>\n";
  out << "</svg>\n";
}

void write_scatter_svg(std::ostream& out, const ScatterSpec& s) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& ser : s.series)
    for (size_t i = 0; i < ser.x.size(); ++i) {
      x0 = std::min(x0, ser.x[i]);
      x1 = std::max(x1, ser.x[i]);
      y0 = std::min(y0, ser.y[i]);
      y1 = std::max(y1, ser.y[i]);
    }
  if (s.unit_circle) {
    x0 = std::min(x0, -1.0);
    x1 = std::max(x1, 1.0);
    y0 = std::min(y0, -1.0);
    y1 = std::max(y1, 1.0);
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!(x1 > x0)) x1 = x0 + 1;
  if (!(y1 > y0)) y1 = y0 + 1;
  const double padx = 0.05 * (x1 - x0), pady = 0.05 * (y1 - y0);
  x0 -= padx, x1 += padx, y0 -= pady, y1 += pady;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + pw * (x - x0) / (x1 - x0); };
  auto py = [&](double y) { return kTop + ph - ph * (y - y0) / (y1 - y0); };
  open_svg(out, s.title, s.x_label, s.y_label);
  axes(out, x0, x1, y0, y1);
  if (s.unit_circle) {
    out << "<polyline fill=\"none\" stroke=\"#999\" stroke-dasharray=\"4 3\" points=\"";
    for (int k = 0; k <= 128; ++k)
      out << num(px(std::cos(kTwoPi * k / 128))) << ',' << num(py(std::sin(kTwoPi * k / 128))) << ' ';
    out << "\"/>\n";
  }
  int legend = 0;
  for (const auto& ser : s.series) {
    const std::string color = ser.color.empty() ? "#1f77b4" : ser.color;
    if (s.lines) {
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
      for (size_t i = 0; i < ser.x.size(); ++i) out << num(px(ser.x[i])) << ',' << num(py(ser.y[i])) << ' ';
      out << "\"/>\n";
    } else {
      for (size_t i = 0; i < ser.x.size(); ++i)
        out << "<circle cx=\"" << num(px(ser.x[i])) << "\" cy=\"" << num(py(ser.y[i])) << "\" r=\"2\" fill=\""
            << color << "\"/>\n";
    }
    if (!ser.name.empty()) {
      const double ly = kTop + 14 + 16 * legend++;
      out << "<rect x=\"" << kWidth - kRight + 10 << "\" y=\"" << ly - 9 << "\" width=\"10\" height=\"10\" fill=\""
          << color << "\"/><text x=\"" << kWidth - kRight + 24 << "\" y=\"" << ly << "\">" << escape(ser.name)
          << "</text>\n";
    }
  }
  out << "</svg>\n";
}

void write_phase_diagram_svg(std::ostream& out, const PhaseDiagram& pd) {
  static const std::map<Phase, std::string> colors = {
      {Phase::A, "#d62728"},      {Phase::Aprime, "#ff9896"}, {Phase::B, "#1f77b4"},
      {Phase::Bprime, "#aec7e8"}, {Phase::C, "#2ca02c"},      {Phase::Cprime, "#98df8a"},
      {Phase::HermitianLine, "#ffd700"}, {Phase::Boundary, "#7f7f7f"}};
  const size_t n3 = pd.t3_grid.size(), n4 = pd.t4_grid.size();
  if (n3 == 0 || n4 == 0) throw ValidationError("phase diagram is empty");
  open_svg(out, "Dynamic phase diagram", "t3 (rad/s)", "t4 (rad/s)");
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  const double cw = pw / double(n3), ch = ph / double(n4);
  for (size_t i = 0; i < n3; ++i)
    for (size_t j = 0; j < n4; ++j)
      out << "<rect x=\"" << num(kLeft + cw * double(i)) << "\" y=\"" << num(kTop + ph - ch * double(j + 1))
          << "\" width=\"" << num(cw + 0.5) << "\" height=\"" << num(ch + 0.5) << "\" fill=\""
          << colors.at(pd.at(i, j).label) << "\"><title>" << escape(std::string(to_string(pd.at(i, j).label)))
          << " max|Im E| = " << num(pd.at(i, j).max_abs_im) << "</title></rect>\n";
  axes(out, pd.t3_grid.front(), pd.t3_grid.back(), pd.t4_grid.front(), pd.t4_grid.back());
  int k = 0;
  for (const auto& [p, c] : colors) {
    const double ly = kTop + 14 + 16 * k++;
    out << "<rect x=\"" << kWidth - kRight + 10 << "\" y=\"" << ly - 9 << "\" width=\"10\" height=\"10\" fill=\"" << c
        << "\"/><text x=\"" << kWidth - kRight + 24 << "\" y=\"" << ly << "\">"
        << escape(std::string(to_string(p))) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace nhse::io
