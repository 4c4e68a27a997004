#include "spectv/decomp.hpp"

namespace spectv {

namespace {

double relative_error_zero_mean(const Signal& got, const Signal& truth) {
  Signal g = split_mean(got).first;
  Signal t = split_mean(truth).first;
  const double denom = l2_norm(t);
  const double err = l2_norm(Signal(g.grid, g.values - t.values));
  return denom > 0 ? err / denom : err;
}

}  // namespace

DecompositionResult separate(const Signal& f, double t_cut, const FlowParams& flow,
                             const Signal* truth_low, const Signal* truth_high) {
  if (!(t_cut > 0) || (flow.horizon > 0 && t_cut >= flow.horizon))
    throw std::invalid_argument("separate: t_cut must lie in (0, T)");
  FlowTrajectory traj = run_flow(f, flow);
  SpectralDecomposition dec = transform(traj);

  DecompositionResult res;
  res.t_cut = t_cut;
  res.low = apply_filter(dec, FilterSpec::lowpass(t_cut));
  res.high = apply_filter(dec, FilterSpec::highpass(t_cut));
  res.flow_converged = traj.all_converged();
  if (truth_low) res.err_low = relative_error_zero_mean(res.low, *truth_low);
  if (truth_high) res.err_high = relative_error_zero_mean(res.high, *truth_high);
  return res;
}

MeasureCurve experiment_1d_distance(Eigen::Index n, Eigen::Index w1, double h1, Eigen::Index w2,
                                    double h2, const std::vector<double>& d_values,
                                    const FlowParams& flow) {
  const FunctionalHandle F = make_tv_handle(flow.tv);
  Eigenpair v_pair = make_box_1d(n, w2, h2, 0);

  MeasureCurve curve;
  curve.extra_name = "subgrad_additivity_defect";
  curve.metadata = {{"n", double(n)}, {"w1", double(w1)}, {"h1", h1},
                    {"w2", double(w2)}, {"h2", h2}};

  const Eigen::Index c2 = (n - w2) / 2;
  for (double d : d_values) {
    const auto offset = static_cast<Eigen::Index>(std::llround(d));
    Eigenpair u_pair = make_box_1d(n, w1, h1, offset);
    const Eigen::Index c1 = (n - w1) / 2 + offset;
    const bool overlap = c1 < c2 + w2 && c2 < c1 + w1;

    Subgradient pu, pv, puv;
    MeasureReport r = full_report(u_pair.signal, v_pair.signal, F, &pu, &pv, &puv);
    Signal diff(pu.value.grid, puv.value.values - pu.value.values - pv.value.values);
    const double pn = l2_norm(puv.value);

    curve.abscissa.push_back(d);
    curve.o_values.push_back(r.orth_O);
    curve.l_values.push_back(r.lis_L);
    curve.extra.push_back(pn > 0 ? l2_norm(diff) / pn : 0.0);
    curve.overlapping.push_back(overlap);
  }
  return curve;
}

MeasureCurve experiment_two_discs(Eigen::Index n, double r, double h,
                                  const std::vector<double>& d_over_r_values,
                                  const FlowParams& flow) {
  const FunctionalHandle F = make_tv_handle(flow.tv);

  MeasureCurve curve;
  curve.extra_name = "subgrad_additivity_defect";
  curve.metadata = {{"n", double(n)}, {"r", r}, {"h", h}};

  const double c = double(n) / 2.0;
  for (double dor : d_over_r_values) {
    const double d = dor * r;
    Eigenpair u_pair = make_disc_2d(n, r, {c, c - d / 2.0}, h);
    Eigenpair v_pair = make_disc_2d(n, r, {c, c + d / 2.0}, h);

    Subgradient pu, pv, puv;
    MeasureReport rep = full_report(u_pair.signal, v_pair.signal, F, &pu, &pv, &puv);
    Signal diff(pu.value.grid, puv.value.values - pu.value.values - pv.value.values);
    const double pn = l2_norm(puv.value);

    curve.abscissa.push_back(dor);
    curve.o_values.push_back(rep.orth_O);
    curve.l_values.push_back(rep.lis_L);
    curve.extra.push_back(pn > 0 ? l2_norm(diff) / pn : 0.0);
    curve.overlapping.push_back(d < 2.0 * r);
  }
  return curve;
}

namespace {

double spectra_l1_defect(const Spectrum& sf, const Spectrum& su, const Spectrum& sv) {
  const size_t m = std::min({sf.s1.size(), su.s1.size(), sv.s1.size()});
  double num = 0, den = 0;
  for (size_t k = 0; k < m; ++k) {
    num += std::abs(sf.s1[k] - su.s1[k] - sv.s1[k]);
    den += std::abs(sf.s1[k]);
  }
  return den > 0 ? num / den : 0.0;
}

}  // namespace

BlobReport experiment_blobs(const BlobGeometry& geo, const FlowParams& flow) {
  Eigenpair u_sep = make_disc_2d(geo.n, geo.r_small, geo.c_small_separated, geo.h_small);
  Eigenpair u_ovl = make_disc_2d(geo.n, geo.r_small, geo.c_small_overlapping, geo.h_small);
  Eigenpair v = make_disc_2d(geo.n, geo.r_big, geo.c_big, geo.h_big);

  const FunctionalHandle F = make_tv_handle(flow.tv);
  MeasureReport rep_sep = full_report(u_sep.signal, v.signal, F);
  MeasureReport rep_ovl = full_report(u_ovl.signal, v.signal, F);

  BlobReport out;
  out.geometry = geo;
  out.o_separated = rep_sep.orth_O;
  out.l_separated = rep_sep.lis_L;
  out.o_overlapping = rep_ovl.orth_O;
  out.l_overlapping = rep_ovl.lis_L;
  out.t_cut = geometric_cutoff(u_sep.lambda, v.lambda);

  FlowParams fp = flow;
  const double t_slow = 1.0 / std::min(u_sep.lambda, v.lambda);
  if (!(fp.dt > 0)) fp.dt = (1.0 / std::max(u_sep.lambda, v.lambda)) / 40.0;
  fp.horizon = std::max(fp.horizon, 1.5 * t_slow);
  fp.stop_eps = 0;  // fixed horizon keeps every spectrum on the same time grid
  fp.validate();

  auto analyze = [&](const Signal& s) {
    FlowTrajectory traj = run_flow(s, fp);
    SpectralDecomposition dec = transform(traj);
    return std::pair<Spectrum, SpectralDecomposition>(spectrum(traj, dec), std::move(dec));
  };

  out.f_separated = Signal(v.signal.grid, u_sep.signal.values + v.signal.values);
  out.f_overlapping = Signal(v.signal.grid, u_ovl.signal.values + v.signal.values);

  auto [s_f1, dec_f1] = analyze(out.f_separated);
  auto [s_f2, dec_f2] = analyze(out.f_overlapping);
  auto [s_u1, dec_u1] = analyze(u_sep.signal);
  auto [s_u2, dec_u2] = analyze(u_ovl.signal);
  auto [s_v, dec_v] = analyze(v.signal);

  out.spectrum_separated = s_f1;
  out.spectrum_overlapping = s_f2;
  out.spectrum_sum_separated = s_u1;
  for (size_t k = 0; k < out.spectrum_sum_separated.s1.size() && k < s_v.s1.size(); ++k)
    out.spectrum_sum_separated.s1[k] += s_v.s1[k];

  out.spectrum_additivity_separated = spectra_l1_defect(s_f1, s_u1, s_v);
  out.spectrum_additivity_overlapping = spectra_l1_defect(s_f2, s_u2, s_v);

  out.hpf_separated = apply_filter(dec_f1, FilterSpec::highpass(out.t_cut));
  out.lpf_separated = apply_filter(dec_f1, FilterSpec::lowpass(out.t_cut));
  out.hpf_overlapping = apply_filter(dec_f2, FilterSpec::highpass(out.t_cut));
  out.lpf_overlapping = apply_filter(dec_f2, FilterSpec::lowpass(out.t_cut));
  return out;
}

}  // namespace spectv
