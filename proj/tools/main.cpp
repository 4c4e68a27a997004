// Command-line front end: flow evolution, spectral transform, scale filters,
// geometry measures, eigenfunction construction and the separation experiments.

#include "spectv/decomp.hpp"
#include "spectv/io.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <map>

namespace {

using namespace spectv;
namespace fs = std::filesystem;

struct CommonOpts {
  std::string variant = "auto";
  double prox_tol = 1e-6;
  int prox_max_iter = 5000;
  bool strict = false;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--variant", c.variant, "TV variant: auto, isotropic, anisotropic")
      ->check(CLI::IsMember({"auto", "isotropic", "anisotropic"}));
  cmd->add_option("--prox-tol", c.prox_tol, "dual iteration stopping tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--prox-max-iter", c.prox_max_iter)->check(CLI::PositiveNumber);
  cmd->add_flag("--strict", c.strict, "exit 2 when any numerical quality flag trips");
}

TvConfig make_tv(const CommonOpts& c, int dims) {
  TvConfig cfg = tv_config_for(dims);
  if (c.variant == "isotropic") cfg.variant = TvVariant::isotropic;
  if (c.variant == "anisotropic") cfg.variant = TvVariant::anisotropic;
  cfg.prox_tol = c.prox_tol;
  cfg.prox_max_iter = c.prox_max_iter;
  return cfg;
}

std::string variant_name(TvVariant v) {
  return v == TvVariant::isotropic ? "isotropic" : "anisotropic";
}

/// "a:step:b" or a single number.
std::vector<double> parse_range(const std::string& s) {
  std::vector<double> out;
  const auto p1 = s.find(':');
  if (p1 == std::string::npos) {
    out.push_back(std::stod(s));
    return out;
  }
  const auto p2 = s.find(':', p1 + 1);
  if (p2 == std::string::npos) throw CLI::ValidationError("range", "expected start:step:stop");
  const double a = std::stod(s.substr(0, p1));
  const double step = std::stod(s.substr(p1 + 1, p2 - p1 - 1));
  const double b = std::stod(s.substr(p2 + 1));
  if (!(step > 0)) throw CLI::ValidationError("range", "step must be positive");
  for (double x = a; x <= b + 1e-12 * std::max(1.0, std::abs(b)); x += step) out.push_back(x);
  return out;
}

/// Positional key=value overrides, e.g. `eigen --box1d n=256 w=20 h=1`.
std::map<std::string, double> parse_kv(const std::vector<std::string>& tokens) {
  std::map<std::string, double> kv;
  for (const auto& t : tokens) {
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0)
      throw CLI::ValidationError("params", "expected key=value, got '" + t + "'");
    kv[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
  }
  return kv;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

int quality_gate(bool strict, bool any_flag) {
  if (any_flag) {
    std::cerr << (strict ? "error" : "warning") << ": numerical quality flags raised\n";
    if (strict) return 2;
  }
  return 0;
}

int cmd_flow(const std::string& input, const std::string& outdir, double dt, double T,
             double stop_eps, const CommonOpts& common) {
  Signal f = io::read_signal(input);
  FlowParams fp;
  fp.tv = make_tv(common, f.grid.dims());
  fp.dt = dt;
  fp.horizon = T;
  fp.stop_eps = stop_eps;
  fp.validate();

  FlowTrajectory traj = run_flow(f, fp);
  io::save_trajectory(traj, outdir);
  io::write_manifest(fs::path(outdir) / "manifest.json",
                     {{"command", "flow"},
                      {"input", input},
                      {"dt", num(fp.dt)},
                      {"horizon", num(fp.horizon)},
                      {"stop_eps", num(fp.stop_eps)},
                      {"variant", variant_name(fp.tv.variant)},
                      {"prox_tol", num(fp.tv.prox_tol)},
                      {"prox_max_iter", num(fp.tv.prox_max_iter)}});
  std::cout << "steps = " << traj.steps() << "\nextinction_time = " << extinction_time(traj)
            << "\nconverged = " << (traj.all_converged() ? 1 : 0) << "\n";
  return quality_gate(common.strict, !traj.all_converged());
}

int cmd_transform(const std::string& traj_dir, const std::string& outdir, bool strict) {
  FlowTrajectory traj = io::load_trajectory(traj_dir);
  SpectralDecomposition dec = transform(traj);
  Spectrum sp = spectrum(traj, dec);

  io::save_decomposition(dec, outdir);
  io::write_spectrum_csv(sp, fs::path(outdir) / "spectrum.csv");
  io::PlotSeries s1{"S1", sp.times, sp.s1};
  io::PlotSeries s2{"S2", sp.times, sp.s2};
  io::write_svg_plot(fs::path(outdir) / "spectrum.svg", "Scale spectrum", "t", "S(t)", {s1, s2});

  Signal recon = reconstruct(dec);
  Signal f0 = traj.states.front();
  const double err =
      l2_norm(Signal(f0.grid, recon.values - f0.values - traj.mean)) /
      std::max(l2_norm(f0), 1e-300);
  io::write_manifest(fs::path(outdir) / "manifest.json",
                     {{"command", "transform"},
                      {"trajectory", traj_dir},
                      {"bands", num(double(dec.bands.size()))},
                      {"reconstruction_error", num(err)},
                      {"s2_clamped", num(double(sp.s2_clamped))}});
  std::cout << "bands = " << dec.bands.size() << "\nreconstruction_error = " << err << "\n";
  return quality_gate(strict, !traj.all_converged());
}

int cmd_filter(const std::string& bands_dir, const std::string& output, const std::string& kind,
               double t1, double t2) {
  SpectralDecomposition dec = io::load_decomposition(bands_dir);
  FilterSpec spec;
  if (kind == "lowpass")
    spec = FilterSpec::lowpass(t1);
  else if (kind == "highpass")
    spec = FilterSpec::highpass(t1);
  else if (kind == "bandpass")
    spec = FilterSpec::bandpass(t1, t2);
  else
    spec = FilterSpec::bandstop(t1, t2);
  io::write_signal(apply_filter(dec, spec), output);
  std::cout << "wrote " << output << "\n";
  return 0;
}

int cmd_measures(const std::string& in_u, const std::string& in_v, const std::string& csv_out,
                 double tau, const CommonOpts& common) {
  Signal u = io::read_signal(in_u);
  Signal v = io::read_signal(in_v);
  FunctionalHandle F = make_tv_handle(make_tv(common, u.grid.dims()), tau);
  MeasureReport r = full_report(u, v, F);

  std::cout << "O = " << r.orth_O << "\nL = " << r.lis_L << "\nangle = " << r.angle_uv
            << "\nbregman = " << r.bregman_uv << "\nJ_u = " << r.j_u << "\nJ_v = " << r.j_v
            << "\nJ_uv = " << r.j_uv << "\n";
  if (!csv_out.empty()) io::write_report_csv_row(r, csv_out, !fs::exists(csv_out));
  return quality_gate(common.strict, !r.converged || r.clamp_events > 0);
}

int cmd_eigen(bool box1d, const std::vector<std::string>& params, const std::string& output,
              bool strict) {
  auto kv = parse_kv(params);
  auto get = [&](const std::string& k, double dflt) {
    auto it = kv.find(k);
    return it == kv.end() ? dflt : it->second;
  };

  Eigenpair pair =
      box1d ? make_box_1d(Eigen::Index(get("n", 256)), Eigen::Index(get("w", 20)), get("h", 1.0),
                          Eigen::Index(get("offset", 0)), get("spacing", 1.0))
            : make_disc_2d(Eigen::Index(get("n", 128)), get("r", 12),
                           {get("cy", get("n", 128) / 2.0), get("cx", get("n", 128) / 2.0)},
                           get("h", 1.0), get("spacing", 1.0));
  std::cout << "lambda = " << pair.lambda << "\nresidual = " << pair.residual << "\n";
  if (!output.empty()) io::write_signal(pair.signal, output);
  return quality_gate(strict, pair.residual > 1e-2);
}

int cmd_experiment_boxes1d(const std::string& outdir, Eigen::Index n, Eigen::Index w1, double h1,
                           Eigen::Index w2, double h2, const std::string& d_range,
                           const CommonOpts& common) {
  FlowParams fp;
  fp.dt = 0.1;
  fp.tv = make_tv(common, 1);
  auto d_values = parse_range(d_range);

  MeasureCurve curve = experiment_1d_distance(n, w1, h1, w2, h2, d_values, fp);
  io::write_curve_csv(curve, fs::path(outdir) / "boxes1d.csv");
  io::PlotSeries so{"O", curve.abscissa, curve.o_values};
  io::PlotSeries sl{"L", curve.abscissa, curve.l_values};
  io::write_svg_plot(fs::path(outdir) / "boxes1d.svg", "Box separation vs distance", "d",
                     "measure", {so, sl});
  io::write_manifest(fs::path(outdir) / "manifest.json",
                     {{"command", "experiment boxes1d"},
                      {"n", num(double(n))},
                      {"w1", num(double(w1))},
                      {"h1", num(h1)},
                      {"w2", num(double(w2))},
                      {"h2", num(h2)},
                      {"d", d_range},
                      {"variant", variant_name(fp.tv.variant)},
                      {"prox_tol", num(fp.tv.prox_tol)}});
  std::cout << "wrote " << (fs::path(outdir) / "boxes1d.csv").string() << "\n";
  return 0;
}

int cmd_experiment_discs2d(const std::string& outdir, Eigen::Index n, double r, double h,
                           const std::string& dor_range, const CommonOpts& common) {
  FlowParams fp;
  fp.dt = 0.1;
  fp.tv = make_tv(common, 2);
  auto dor_values = parse_range(dor_range);

  MeasureCurve curve = experiment_two_discs(n, r, h, dor_values, fp);
  io::write_curve_csv(curve, fs::path(outdir) / "discs2d.csv");
  io::PlotSeries so{"O", curve.abscissa, curve.o_values};
  io::PlotSeries sl{"L", curve.abscissa, curve.l_values};
  io::write_svg_plot(fs::path(outdir) / "discs2d.svg", "Disc separation vs distance", "d/r",
                     "measure", {so, sl}, {2.0, 3.14159265358979});
  io::write_manifest(fs::path(outdir) / "manifest.json",
                     {{"command", "experiment discs2d"},
                      {"n", num(double(n))},
                      {"r", num(r)},
                      {"h", num(h)},
                      {"d_over_r", dor_range},
                      {"variant", variant_name(fp.tv.variant)},
                      {"prox_tol", num(fp.tv.prox_tol)}});
  std::cout << "wrote " << (fs::path(outdir) / "discs2d.csv").string() << "\n";
  return 0;
}

int cmd_experiment_blobs(const std::string& outdir, double dt, const CommonOpts& common) {
  FlowParams fp;
  fp.dt = dt;  // 0 lets the experiment pick from the eigenvalues
  fp.tv = make_tv(common, 2);

  BlobReport rep = experiment_blobs(BlobGeometry{}, fp);
  const fs::path dir(outdir);
  io::write_pgm(rep.f_separated, dir / "f_separated.pgm");
  io::write_pgm(rep.f_overlapping, dir / "f_overlapping.pgm");
  io::write_pgm(rep.hpf_separated, dir / "hpf_separated.pgm");
  io::write_pgm(rep.lpf_separated, dir / "lpf_separated.pgm");
  io::write_pgm(rep.hpf_overlapping, dir / "hpf_overlapping.pgm");
  io::write_pgm(rep.lpf_overlapping, dir / "lpf_overlapping.pgm");
  io::write_spectrum_csv(rep.spectrum_separated, dir / "spectrum_separated.csv");
  io::write_spectrum_csv(rep.spectrum_overlapping, dir / "spectrum_overlapping.csv");
  io::PlotSeries sf{"S1(f)", rep.spectrum_separated.times, rep.spectrum_separated.s1};
  io::PlotSeries ss{"S1(u)+S1(v)", rep.spectrum_sum_separated.times, rep.spectrum_sum_separated.s1};
  io::write_svg_plot(dir / "spectra_separated.svg", "Spectra, separated blobs", "t", "S1",
                     {sf, ss}, {rep.t_cut});
  io::write_manifest(dir / "manifest.json",
                     {{"command", "experiment blobs"},
                      {"t_cut", num(rep.t_cut)},
                      {"O_separated", num(rep.o_separated)},
                      {"L_separated", num(rep.l_separated)},
                      {"O_overlapping", num(rep.o_overlapping)},
                      {"L_overlapping", num(rep.l_overlapping)},
                      {"spectrum_additivity_separated", num(rep.spectrum_additivity_separated)},
                      {"spectrum_additivity_overlapping", num(rep.spectrum_additivity_overlapping)},
                      {"variant", variant_name(fp.tv.variant)},
                      {"prox_tol", num(fp.tv.prox_tol)}});
  std::cout << "O_separated = " << rep.o_separated << "\nL_separated = " << rep.l_separated
            << "\nO_overlapping = " << rep.o_overlapping
            << "\nL_overlapping = " << rep.l_overlapping << "\nt_cut = " << rep.t_cut << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral total-variation decomposition toolkit"};
  app.require_subcommand(1);

  CommonOpts common;

  // flow
  std::string in_path, out_dir;
  double dt = 0.1, horizon = 0, stop_eps = 1e-4;
  auto* flow_cmd = app.add_subcommand("flow", "run the TV gradient flow and persist it");
  flow_cmd->add_option("input", in_path)->required();
  flow_cmd->add_option("-o,--output", out_dir)->required();
  flow_cmd->add_option("--dt", dt)->check(CLI::PositiveNumber);
  flow_cmd->add_option("--T", horizon, "horizon; 0 runs to extinction");
  flow_cmd->add_option("--stop-eps", stop_eps);
  add_common(flow_cmd, common);

  // transform
  std::string traj_dir, trans_out;
  auto* trans_cmd = app.add_subcommand("transform", "trajectory to band stack and spectra");
  trans_cmd->add_option("trajectory", traj_dir)->required();
  trans_cmd->add_option("-o,--output", trans_out)->required();
  trans_cmd->add_flag("--strict", common.strict);

  // filter
  std::string bands_dir, filt_out, kind = "lowpass";
  double t1 = 0, t2 = 0;
  auto* filt_cmd = app.add_subcommand("filter", "apply a scale filter to a band stack");
  filt_cmd->add_option("bands", bands_dir)->required();
  filt_cmd->add_option("-o,--output", filt_out)->required();
  filt_cmd->add_option("--kind", kind)
      ->check(CLI::IsMember({"lowpass", "highpass", "bandpass", "bandstop"}));
  filt_cmd->add_option("--t1", t1)->required();
  filt_cmd->add_option("--t2", t2);

  // measures
  std::string in_u, in_v, csv_out;
  double tau = 0;
  auto* meas_cmd = app.add_subcommand("measures", "orthogonality and independence of two inputs");
  meas_cmd->add_option("u", in_u)->required();
  meas_cmd->add_option("v", in_v)->required();
  meas_cmd->add_option("-o,--csv", csv_out, "append a CSV row here");
  meas_cmd->add_option("--tau", tau, "subgradient extraction step; 0 picks a default");
  add_common(meas_cmd, common);

  // eigen
  bool box1d = false, disc2d = false;
  std::vector<std::string> eigen_params;
  std::string eigen_out;
  auto* eigen_cmd = app.add_subcommand("eigen", "construct and verify an eigenfunction");
  eigen_cmd->add_flag("--box1d", box1d);
  eigen_cmd->add_flag("--disc2d", disc2d);
  eigen_cmd->add_option("params", eigen_params, "key=value: n w h offset / n r cy cx h");
  eigen_cmd->add_option("-o,--output", eigen_out);
  eigen_cmd->add_flag("--strict", common.strict);

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "reproduce a separation experiment");
  exp_cmd->require_subcommand(1);

  std::string exp_out = "out";
  Eigen::Index bn = 256, bw1 = 10, bw2 = 10;
  double bh1 = 1, bh2 = 1;
  std::string d_range = "0:8:128";
  auto* boxes_cmd = exp_cmd->add_subcommand("boxes1d", "two boxes, distance sweep");
  boxes_cmd->add_option("-o,--output", exp_out);
  boxes_cmd->add_option("--n", bn);
  boxes_cmd->add_option("--w1", bw1);
  boxes_cmd->add_option("--h1", bh1);
  boxes_cmd->add_option("--w2", bw2);
  boxes_cmd->add_option("--h2", bh2);
  boxes_cmd->add_option("--d", d_range, "distances, start:step:stop");
  add_common(boxes_cmd, common);

  Eigen::Index dn = 128;
  double dr = 12, dh = 1;
  std::string dor_range = "0:0.5:4";
  auto* discs_cmd = exp_cmd->add_subcommand("discs2d", "two discs, d/r sweep");
  discs_cmd->add_option("-o,--output", exp_out);
  discs_cmd->add_option("--n", dn);
  discs_cmd->add_option("--r", dr);
  discs_cmd->add_option("--height", dh);
  discs_cmd->add_option("--d-over-r", dor_range, "start:step:stop");
  add_common(discs_cmd, common);

  double blob_dt = 0;
  auto* blobs_cmd = exp_cmd->add_subcommand("blobs", "small/large blob scale separation");
  blobs_cmd->add_option("-o,--output", exp_out);
  blobs_cmd->add_option("--dt", blob_dt, "flow step; 0 picks one from the eigenvalues");
  add_common(blobs_cmd, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 1;
  }

  try {
    if (*flow_cmd) return cmd_flow(in_path, out_dir, dt, horizon, stop_eps, common);
    if (*trans_cmd) return cmd_transform(traj_dir, trans_out, common.strict);
    if (*filt_cmd) return cmd_filter(bands_dir, filt_out, kind, t1, t2);
    if (*meas_cmd) return cmd_measures(in_u, in_v, csv_out, tau, common);
    if (*eigen_cmd) {
      if (box1d == disc2d) {
        std::cerr << "eigen: pass exactly one of --box1d, --disc2d\n";
        return 1;
      }
      return cmd_eigen(box1d, eigen_params, eigen_out, common.strict);
    }
    if (*boxes_cmd)
      return cmd_experiment_boxes1d(exp_out, bn, bw1, bh1, bw2, bh2, d_range, common);
    if (*discs_cmd) return cmd_experiment_discs2d(exp_out, dn, dr, dh, dor_range, common);
    if (*blobs_cmd) return cmd_experiment_blobs(exp_out, blob_dt, common);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
