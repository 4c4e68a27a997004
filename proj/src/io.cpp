#include "spectv/io.hpp"

#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace spectv::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const fs::path& path, size_t line_or_byte, const std::string& what,
                             bool byte = false) {
  std::ostringstream os;
  os << path.string() << (byte ? ": byte " : ": line ") << line_or_byte << ": " << what;
  throw std::runtime_error(os.str());
}

std::ofstream open_out(const fs::path& path, bool binary = false) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_f64_block(std::ofstream& out, const Eigen::ArrayXd& a) {
  out.write(reinterpret_cast<const char*>(a.data()), std::streamsize(sizeof(double)) * a.size());
}

Eigen::ArrayXd read_f64_block(std::ifstream& in, Eigen::Index n, const fs::path& path) {
  Eigen::ArrayXd a(n);
  in.read(reinterpret_cast<char*>(a.data()), std::streamsize(sizeof(double)) * n);
  if (!in) throw std::runtime_error("truncated raw data in " + path.string());
  return a;
}

json grid_to_json(const GridSpec& g) {
  return json{{"shape", g.shape}, {"spacing", g.spacing}};
}

GridSpec grid_from_json(const json& j) {
  return GridSpec(j.at("shape").get<std::vector<Eigen::Index>>(),
                  j.at("spacing").get<std::vector<double>>());
}

json load_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  json j;
  in >> j;
  return j;
}

}  // namespace

Signal read_csv_1d(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  double h = 1.0;
  std::vector<double> values;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto pos = line.find("h=");
      if (pos != std::string::npos) {
        try {
          h = std::stod(line.substr(pos + 2));
        } catch (const std::exception&) {
          parse_fail(path, lineno, "malformed spacing header");
        }
        if (!(h > 0)) parse_fail(path, lineno, "spacing must be positive");
      }
      continue;
    }
    try {
      size_t used = 0;
      values.push_back(std::stod(line, &used));
      while (used < line.size() && std::isspace(static_cast<unsigned char>(line[used]))) ++used;
      if (used != line.size()) parse_fail(path, lineno, "trailing characters after value");
    } catch (const std::invalid_argument&) {
      parse_fail(path, lineno, "not a number: '" + line + "'");
    }
  }
  if (values.size() < 2) parse_fail(path, lineno, "need at least 2 samples");
  return Signal(GridSpec::line(Eigen::Index(values.size()), h),
                Eigen::Map<Eigen::ArrayXd>(values.data(), Eigen::Index(values.size())));
}

void write_csv_1d(const Signal& s, const fs::path& path) {
  if (s.grid.dims() != 1) throw std::invalid_argument("write_csv_1d: 1D signals only");
  auto out = open_out(path);
  out << "# h=" << fmt(s.grid.spacing[0]) << "\n";
  for (Eigen::Index i = 0; i < s.size(); ++i) out << fmt(s.values[i]) << "\n";
}

Signal read_pgm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path.string());

  auto next_token = [&]() -> std::string {
    std::string tok;
    char c;
    while (in.get(c)) {
      if (c == '#') {
        while (in.get(c) && c != '\n') {
        }
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!tok.empty()) return tok;
        continue;
      }
      tok += c;
    }
    if (tok.empty()) {
      const auto pos = in.tellg();
      parse_fail(path, pos < 0 ? 0 : size_t(pos), "unexpected end of file", true);
    }
    return tok;
  };

  const std::string magic = next_token();
  if (magic != "P2" && magic != "P5")
    parse_fail(path, 0, "not a PGM file (expected P2 or P5, got '" + magic + "')", true);

  long w = 0, hgt = 0, maxval = 0;
  try {
    w = std::stol(next_token());
    hgt = std::stol(next_token());
    maxval = std::stol(next_token());
  } catch (const std::exception&) {
    parse_fail(path, size_t(in.tellg()), "malformed PGM header", true);
  }
  if (w < 2 || hgt < 2) parse_fail(path, size_t(in.tellg()), "image must be at least 2x2", true);
  if (maxval < 1 || maxval > 65535)
    parse_fail(path, size_t(in.tellg()), "maxval out of range", true);

  Eigen::ArrayXd values(w * hgt);
  if (magic == "P2") {
    for (long i = 0; i < w * hgt; ++i) {
      long v = 0;
      try {
        v = std::stol(next_token());
      } catch (const std::exception&) {
        parse_fail(path, size_t(in.tellg()), "malformed pixel value", true);
      }
      values[i] = double(v) / double(maxval);
    }
  } else {
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> buf(size_t(w * hgt) * size_t(bytes));
    in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(buf.size()));
    if (!in) parse_fail(path, size_t(in.gcount()), "truncated P5 pixel data", true);
    for (long i = 0; i < w * hgt; ++i) {
      unsigned v = bytes == 1 ? buf[size_t(i)]
                              : (unsigned(buf[size_t(2 * i)]) << 8) | buf[size_t(2 * i + 1)];
      values[i] = double(v) / double(maxval);
    }
  }
  return Signal(GridSpec::plane(hgt, w), std::move(values));
}

void write_pgm(const Signal& s, const fs::path& path) {
  if (s.grid.dims() != 2) throw std::invalid_argument("write_pgm: 2D signals only");
  const double lo = s.values.minCoeff();
  const double hi = s.values.maxCoeff();
  const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;
  auto out = open_out(path);
  out << "P2\n" << s.grid.shape[1] << " " << s.grid.shape[0] << "\n255\n";
  for (Eigen::Index i = 0; i < s.grid.shape[0]; ++i) {
    for (Eigen::Index j = 0; j < s.grid.shape[1]; ++j) {
      const int v = int(std::lround((s.values[i * s.grid.shape[1] + j] - lo) * scale));
      out << v << (j + 1 < s.grid.shape[1] ? ' ' : '\n');
    }
  }
}

Signal read_raw(const fs::path& path) {
  fs::path sidecar = path;
  sidecar.replace_extension(".json");
  json meta = load_json(sidecar);
  GridSpec g = grid_from_json(meta);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  return Signal(g, read_f64_block(in, g.size(), path));
}

void write_raw(const Signal& s, const fs::path& path) {
  fs::path sidecar = path;
  sidecar.replace_extension(".json");
  json meta = grid_to_json(s.grid);
  meta["mean"] = mean(s);
  open_out(sidecar) << meta.dump(2) << "\n";
  auto out = open_out(path, true);
  write_f64_block(out, s.values);
}

Signal read_signal(const fs::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv") return read_csv_1d(path);
  if (ext == ".pgm") return read_pgm(path);
  if (ext == ".raw") return read_raw(path);
  throw std::invalid_argument("read_signal: unsupported extension '" + ext + "'");
}

void write_signal(const Signal& s, const fs::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".csv") return write_csv_1d(s, path);
  if (ext == ".pgm") return write_pgm(s, path);
  if (ext == ".raw") return write_raw(s, path);
  throw std::invalid_argument("write_signal: unsupported extension '" + ext + "'");
}

void write_svg_plot(const fs::path& path, const std::string& title, const std::string& xlabel,
                    const std::string& ylabel, const std::vector<PlotSeries>& series,
                    const std::vector<double>& vertical_markers) {
  if (series.empty()) throw std::invalid_argument("write_svg_plot: no series");
  for (const auto& s : series) {
    if (s.x.empty() || s.x.size() != s.y.size())
      throw std::invalid_argument("write_svg_plot: empty or mismatched series '" + s.label + "'");
  }

  double xmin = series[0].x[0], xmax = xmin, ymin = series[0].y[0], ymax = ymin;
  for (const auto& s : series)
    for (size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  if (xmax == xmin) {
    xmin -= 1;
    xmax += 1;
  }
  if (ymax == ymin) {
    ymin -= 1;
    ymax += 1;
  }

  const double W = 640, H = 420, ml = 70, mr = 20, mt = 40, mb = 55;
  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"};

  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title
      << "</text>\n";
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\""
      << H - mt - mb << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int k = 0; k <= 4; ++k) {
    const double xv = xmin + k * (xmax - xmin) / 4;
    const double yv = ymin + k * (ymax - ymin) / 4;
    out << "<text x=\"" << fmt6(px(xv)) << "\" y=\"" << H - mb + 18
        << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt6(xv) << "</text>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << fmt6(py(yv) + 4)
        << "\" text-anchor=\"end\" font-size=\"11\">" << fmt6(yv) << "</text>\n";
  }
  out << "<text x=\"" << W / 2 << "\" y=\"" << H - 12
      << "\" text-anchor=\"middle\" font-size=\"13\">" << xlabel << "</text>\n";
  out << "<text x=\"18\" y=\"" << H / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 " << H / 2
      << ")\">" << ylabel << "</text>\n";

  for (double m : vertical_markers) {
    if (m < xmin || m > xmax) continue;
    out << "<line x1=\"" << fmt6(px(m)) << "\" y1=\"" << mt << "\" x2=\"" << fmt6(px(m))
        << "\" y2=\"" << H - mb << "\" stroke=\"#777\" stroke-dasharray=\"5,4\"/>\n";
  }

  for (size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = colors[si % 5];
    if (s.x.size() == 1) {
      out << "<circle cx=\"" << fmt6(px(s.x[0])) << "\" cy=\"" << fmt6(py(s.y[0]))
          << "\" r=\"4\" fill=\"" << color << "\"/>\n";
    } else {
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (size_t i = 0; i < s.x.size(); ++i)
        out << fmt6(px(s.x[i])) << "," << fmt6(py(s.y[i])) << (i + 1 < s.x.size() ? " " : "");
      out << "\"/>\n";
    }
    out << "<text x=\"" << W - mr - 8 << "\" y=\"" << mt + 18 + 16 * double(si)
        << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << color << "\">" << s.label
        << "</text>\n";
  }
  out << "</svg>\n";
}

void write_spectrum_csv(const Spectrum& sp, const fs::path& path) {
  auto out = open_out(path);
  out << "t,s1,s2\n";
  for (size_t k = 0; k < sp.times.size(); ++k)
    out << fmt(sp.times[k]) << "," << fmt(sp.s1[k]) << "," << fmt(sp.s2[k]) << "\n";
}

void write_curve_csv(const MeasureCurve& curve, const fs::path& path) {
  auto out = open_out(path);
  out << "d,O,L";
  if (!curve.extra.empty()) out << "," << curve.extra_name;
  out << ",overlapping\n";
  for (size_t k = 0; k < curve.abscissa.size(); ++k) {
    out << fmt(curve.abscissa[k]) << "," << fmt(curve.o_values[k]) << ","
        << fmt(curve.l_values[k]);
    if (!curve.extra.empty()) out << "," << fmt(curve.extra[k]);
    out << "," << (curve.overlapping.empty() ? 0 : int(curve.overlapping[k])) << "\n";
  }
}

void write_report_text(const MeasureReport& r, const fs::path& path) {
  auto out = open_out(path);
  out << "J_u = " << fmt(r.j_u) << "\nJ_v = " << fmt(r.j_v) << "\nJ_uv = " << fmt(r.j_uv)
      << "\nsip_uv = " << fmt(r.sip_uv) << "\nsip_vu = " << fmt(r.sip_vu)
      << "\nhsip_uv = " << fmt(r.hsip_uv) << "\nhsip_vu = " << fmt(r.hsip_vu)
      << "\nangle_uv = " << fmt(r.angle_uv) << "\nangle_sym_a = " << fmt(r.angle_sym_a)
      << "\nangle_sym_g = " << fmt(r.angle_sym_g) << "\nbregman_uv = " << fmt(r.bregman_uv)
      << "\nO = " << fmt(r.orth_O) << "\nE = " << fmt(r.lis_E) << "\nL = " << fmt(r.lis_L)
      << "\nclamp_events = " << r.clamp_events << "\nconverged = " << (r.converged ? 1 : 0)
      << "\n";
}

void write_report_csv_row(const MeasureReport& r, const fs::path& path, bool with_header) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, with_header ? std::ios::out : std::ios::app);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  if (with_header)
    out << "J_u,J_v,J_uv,sip_uv,sip_vu,hsip_uv,hsip_vu,angle_uv,angle_sym_a,angle_sym_g,"
           "bregman_uv,O,E,L,clamp_events,converged\n";
  out << fmt(r.j_u) << "," << fmt(r.j_v) << "," << fmt(r.j_uv) << "," << fmt(r.sip_uv) << ","
      << fmt(r.sip_vu) << "," << fmt(r.hsip_uv) << "," << fmt(r.hsip_vu) << ","
      << fmt(r.angle_uv) << "," << fmt(r.angle_sym_a) << "," << fmt(r.angle_sym_g) << ","
      << fmt(r.bregman_uv) << "," << fmt(r.orth_O) << "," << fmt(r.lis_E) << "," << fmt(r.lis_L)
      << "," << r.clamp_events << "," << (r.converged ? 1 : 0) << "\n";
}

void save_trajectory(const FlowTrajectory& traj, const fs::path& dir) {
  fs::create_directories(dir);
  json meta = grid_to_json(traj.states.front().grid);
  meta["dt"] = traj.params.dt;
  meta["horizon"] = traj.params.horizon;
  meta["stop_eps"] = traj.params.stop_eps;
  meta["max_steps"] = traj.params.max_steps;
  meta["variant"] = traj.params.tv.variant == TvVariant::isotropic ? "isotropic" : "anisotropic";
  meta["prox_tol"] = traj.params.tv.prox_tol;
  meta["prox_max_iter"] = traj.params.tv.prox_max_iter;
  meta["mean"] = traj.mean;
  meta["n_states"] = traj.states.size();
  meta["step_converged"] = traj.step_converged;
  open_out(dir / "trajectory.json") << meta.dump(2) << "\n";

  auto states = open_out(dir / "states.f64", true);
  for (const auto& s : traj.states) write_f64_block(states, s.values);
  auto subs = open_out(dir / "subgradients.f64", true);
  for (const auto& p : traj.subgradients) write_f64_block(subs, p.values);
}

FlowTrajectory load_trajectory(const fs::path& dir) {
  json meta = load_json(dir / "trajectory.json");
  GridSpec g = grid_from_json(meta);

  FlowTrajectory traj;
  traj.params.dt = meta.at("dt").get<double>();
  traj.params.horizon = meta.at("horizon").get<double>();
  traj.params.stop_eps = meta.at("stop_eps").get<double>();
  traj.params.max_steps = meta.at("max_steps").get<int>();
  traj.params.tv.variant = meta.at("variant").get<std::string>() == "isotropic"
                               ? TvVariant::isotropic
                               : TvVariant::anisotropic;
  traj.params.tv.prox_tol = meta.at("prox_tol").get<double>();
  traj.params.tv.prox_max_iter = meta.at("prox_max_iter").get<int>();
  traj.mean = meta.at("mean").get<double>();
  traj.step_converged = meta.at("step_converged").get<std::vector<bool>>();

  const auto n_states = meta.at("n_states").get<size_t>();
  std::ifstream states(dir / "states.f64", std::ios::binary);
  std::ifstream subs(dir / "subgradients.f64", std::ios::binary);
  if (!states || !subs) throw std::runtime_error("missing raw data in " + dir.string());
  for (size_t k = 0; k < n_states; ++k) {
    traj.times.push_back(double(k) * traj.params.dt);
    traj.states.emplace_back(g, read_f64_block(states, g.size(), dir / "states.f64"));
    traj.subgradients.emplace_back(g, read_f64_block(subs, g.size(), dir / "subgradients.f64"));
  }
  return traj;
}

void save_decomposition(const SpectralDecomposition& dec, const fs::path& dir) {
  fs::create_directories(dir);
  json meta = grid_to_json(dec.residual.grid);
  meta["dt"] = dec.dt;
  meta["mean"] = dec.mean;
  meta["times"] = dec.times;
  meta["residual"] = "residual.f64";
  open_out(dir / "bands.json") << meta.dump(2) << "\n";

  auto bands = open_out(dir / "bands.f64", true);
  for (const auto& b : dec.bands) write_f64_block(bands, b.values);
  auto res = open_out(dir / "residual.f64", true);
  write_f64_block(res, dec.residual.values);
}

SpectralDecomposition load_decomposition(const fs::path& dir) {
  json meta = load_json(dir / "bands.json");
  GridSpec g = grid_from_json(meta);

  SpectralDecomposition dec;
  dec.dt = meta.at("dt").get<double>();
  dec.mean = meta.at("mean").get<double>();
  dec.times = meta.at("times").get<std::vector<double>>();

  std::ifstream bands(dir / "bands.f64", std::ios::binary);
  if (!bands) throw std::runtime_error("missing bands.f64 in " + dir.string());
  for (size_t k = 0; k < dec.times.size(); ++k)
    dec.bands.emplace_back(g, read_f64_block(bands, g.size(), dir / "bands.f64"));

  std::ifstream res(dir / meta.at("residual").get<std::string>(), std::ios::binary);
  if (!res) throw std::runtime_error("missing residual data in " + dir.string());
  dec.residual = Signal(g, read_f64_block(res, g.size(), dir / "residual.f64"));
  return dec;
}

void write_manifest(const fs::path& path,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
  json j = json::object();
  for (const auto& [k, v] : entries) j[k] = v;
  open_out(path) << j.dump(2) << "\n";
}

}  // namespace spectv::io
