#include "spectv/flow.hpp"

namespace spectv {

FlowTrajectory run_flow(const Signal& f, const FlowParams& params) {
  params.validate();

  FlowTrajectory traj;
  traj.params = params;

  auto [u0, m] = split_mean(f);
  traj.mean = m;
  const double norm0 = l2_norm(u0);

  traj.times.push_back(0.0);
  traj.states.push_back(u0);

  const Eigen::Index n_target =
      params.horizon > 0
          ? static_cast<Eigen::Index>(std::llround(params.horizon / params.dt))
          : static_cast<Eigen::Index>(params.max_steps);

  VectorField xi;  // dual field warm-started across steps
  int extra_after_stop = -1;
  for (Eigen::Index k = 0; k < n_target; ++k) {
    ProxResult step = prox_tv(traj.states.back(), params.dt, params.tv, &xi);
    Signal p(f.grid, (traj.states.back().values - step.u.values) / params.dt);
    traj.times.push_back(double(k + 1) * params.dt);
    traj.states.push_back(std::move(step.u));
    traj.subgradients.push_back(std::move(p));
    traj.step_converged.push_back(step.converged);

    if (extra_after_stop < 0 &&
        l2_norm(traj.states.back()) < params.stop_eps * std::max(norm0, 1e-300))
      extra_after_stop = 2;  // capture the final kink of J(u(t))
    if (extra_after_stop >= 0 && extra_after_stop-- == 0 && k + 1 >= 2) break;
  }

  // p_0 is never used by the transform; copy p_1 to keep the record rectangular.
  traj.subgradients.insert(traj.subgradients.begin(), traj.subgradients.front());
  traj.step_converged.insert(traj.step_converged.begin(), traj.step_converged.front());
  return traj;
}

double extinction_time(const FlowTrajectory& traj) {
  if (traj.times.empty()) throw std::invalid_argument("extinction_time: empty trajectory");
  const double norm0 = l2_norm(traj.states.front());
  for (size_t k = 0; k < traj.states.size(); ++k)
    if (l2_norm(traj.states[k]) < traj.params.stop_eps * std::max(norm0, 1e-300))
      return traj.times[k];
  return traj.times.back();
}

}  // namespace spectv
