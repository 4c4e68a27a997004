#include "spectv/spectral.hpp"

namespace spectv {

SpectralDecomposition transform(const FlowTrajectory& traj) {
  const auto N = static_cast<Eigen::Index>(traj.states.size()) - 1;
  if (N < 2) throw std::invalid_argument("transform: trajectory needs at least 3 states");
  const double dt = traj.params.dt;

  SpectralDecomposition dec;
  dec.dt = dt;
  dec.mean = traj.mean;
  dec.times.reserve(N - 1);
  dec.bands.reserve(N - 1);
  for (Eigen::Index k = 1; k < N; ++k) {
    const double t = traj.times[k];
    Eigen::ArrayXd second =
        traj.states[k + 1].values - 2.0 * traj.states[k].values + traj.states[k - 1].values;
    dec.times.push_back(t);
    dec.bands.emplace_back(traj.states[k].grid, t / (dt * dt) * second);
  }
  // u(T) + T p(T): makes the finite-horizon reconstruction exact.
  dec.residual = Signal(traj.states[N].grid,
                        traj.states[N].values + traj.times[N] * traj.subgradients[N].values);
  return dec;
}

Signal reconstruct(const SpectralDecomposition& dec) {
  Eigen::ArrayXd acc = dec.residual.values;
  for (const auto& band : dec.bands) acc += band.values * dec.dt;
  return Signal(dec.residual.grid, acc + dec.mean);
}

Signal apply_filter(const SpectralDecomposition& dec, const FilterSpec& spec) {
  const size_t n = dec.bands.size();
  std::vector<double> h(n, 0.0);
  bool passes_tail = false;
  double tail_weight = 1.0;
  switch (spec.kind) {
    case FilterKind::lowpass:
      for (size_t k = 0; k < n; ++k) h[k] = dec.times[k] >= spec.t1 ? 1.0 : 0.0;
      passes_tail = true;
      break;
    case FilterKind::highpass:
      for (size_t k = 0; k < n; ++k) h[k] = dec.times[k] < spec.t1 ? 1.0 : 0.0;
      break;
    case FilterKind::bandpass:
      if (!(spec.t1 < spec.t2))
        throw std::invalid_argument("apply_filter: band filters need t1 < t2");
      for (size_t k = 0; k < n; ++k)
        h[k] = (dec.times[k] >= spec.t1 && dec.times[k] < spec.t2) ? 1.0 : 0.0;
      break;
    case FilterKind::bandstop:
      if (!(spec.t1 < spec.t2))
        throw std::invalid_argument("apply_filter: band filters need t1 < t2");
      for (size_t k = 0; k < n; ++k)
        h[k] = (dec.times[k] >= spec.t1 && dec.times[k] < spec.t2) ? 0.0 : 1.0;
      passes_tail = true;
      break;
    case FilterKind::custom:
      if (spec.custom_h.size() != n)
        throw std::invalid_argument("apply_filter: custom_h length must match band count");
      h = spec.custom_h;
      passes_tail = true;
      tail_weight = h.empty() ? 1.0 : h.back();
      break;
  }

  Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(dec.residual.values.size());
  for (size_t k = 0; k < n; ++k)
    if (h[k] != 0.0) acc += h[k] * dec.bands[k].values * dec.dt;
  if (passes_tail) acc += tail_weight * (dec.residual.values + dec.mean);
  return Signal(dec.residual.grid, acc);
}

Spectrum spectrum(const FlowTrajectory& traj, const SpectralDecomposition& dec) {
  if (traj.states.size() != dec.bands.size() + 2)
    throw std::invalid_argument("spectrum: trajectory and decomposition do not match");
  const double dt = dec.dt;
  const double vol = traj.states.front().grid.cell_volume();

  Spectrum sp;
  sp.times = dec.times;
  sp.s1.reserve(dec.bands.size());
  sp.s2.reserve(dec.bands.size());

  std::vector<double> J(traj.states.size());
  for (size_t k = 0; k < traj.states.size(); ++k)
    J[k] = tv_value(traj.states[k], traj.params.tv);

  for (size_t k = 1; k + 1 < traj.states.size(); ++k) {
    sp.s1.push_back(dec.bands[k - 1].values.abs().sum() * vol);
    double dd = (J[k + 1] - 2.0 * J[k] + J[k - 1]) / (dt * dt);
    if (dd < 0) {
      dd = 0;
      ++sp.s2_clamped;
    }
    sp.s2.push_back(dec.times[k - 1] * std::sqrt(dd));
  }
  return sp;
}

double check_phi_orthogonality(const FlowTrajectory& traj, const SpectralDecomposition& dec,
                               double u_rel_thresh, double phi_rel_thresh) {
  if (traj.states.size() != dec.bands.size() + 2)
    throw std::invalid_argument("check_phi_orthogonality: mismatched pair");
  const double norm_u0 = l2_norm(traj.states.front());
  double phi_max = 0;
  std::vector<double> phi_norms(dec.bands.size());
  for (size_t k = 0; k < dec.bands.size(); ++k) {
    phi_norms[k] = l2_norm(dec.bands[k]);
    phi_max = std::max(phi_max, phi_norms[k]);
  }
  double worst = 0;
  for (size_t k = 0; k < dec.bands.size(); ++k) {
    const Signal& u = traj.states[k + 1];
    const double nu = l2_norm(u);
    if (nu <= u_rel_thresh * norm_u0 || phi_norms[k] <= phi_rel_thresh * phi_max) continue;
    const double overlap =
        std::abs(inner_product(dec.bands[k], u)) / (phi_norms[k] * nu + 1e-300);
    worst = std::max(worst, overlap);
  }
  return worst;
}

}  // namespace spectv
