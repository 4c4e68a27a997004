#pragma once

#include "spectv/tv.hpp"

namespace spectv {

struct FlowParams {
  double dt = 0;        ///< uniform time step, > 0
  double horizon = 0;   ///< total time T; 0 means run to extinction (capped)
  TvConfig tv;
  double stop_eps = 1e-4;   ///< early stop when ||u|| < stop_eps * ||u_0||
  int max_steps = 200000;   ///< cap for the auto-horizon mode

  void validate() const {
    if (!(dt > 0)) throw std::invalid_argument("FlowParams: dt must be positive");
    if (horizon > 0 && horizon < 2 * dt)
      throw std::invalid_argument("FlowParams: horizon must be >= 2*dt");
    if (max_steps < 2) throw std::invalid_argument("FlowParams: max_steps must be >= 2");
  }
};

/// Time step resolving the scale 1/lambda with ~2% resolution.
inline double default_dt(double lambda_est) {
  if (!(lambda_est > 0)) throw std::invalid_argument("default_dt: lambda must be positive");
  return 1.0 / (lambda_est * 50.0);
}

/// Record of the gradient flow du/dt = -p(t), p in dJ(u): uniform times t_k,
/// states u_k and subgradients p_k = (u_{k-1} - u_k)/dt (p_0 copies p_1).
/// The mean of the initial condition is stripped before the flow and kept here.
struct FlowTrajectory {
  FlowParams params;
  std::vector<double> times;
  std::vector<Signal> states;
  std::vector<Signal> subgradients;
  std::vector<bool> step_converged;
  double mean = 0;

  Eigen::Index steps() const { return static_cast<Eigen::Index>(times.size()) - 1; }
  bool all_converged() const {
    for (bool c : step_converged)
      if (!c) return false;
    return true;
  }
};

/// Implicit Euler integration: u_{k+1} = prox_tv(u_k, dt), so every p_{k+1}
/// is an exact subgradient at u_{k+1}.
FlowTrajectory run_flow(const Signal& f, const FlowParams& params);

/// Smallest recorded t_k with ||u_k|| < stop_eps * ||u_0||, or the final time
/// if the flow never got there.
double extinction_time(const FlowTrajectory& traj);

}  // namespace spectv
