#pragma once

#include "spectv/flow.hpp"

namespace spectv {

/// Band stack phi_k at interior times t_1..t_{N-1}, plus the finite-horizon
/// remainder u(T) + T p(T). Bands, residual and mean integrate back to f.
struct SpectralDecomposition {
  std::vector<double> times;
  std::vector<Signal> bands;
  Signal residual;
  double mean = 0;
  double dt = 0;
};

struct Spectrum {
  std::vector<double> times;
  std::vector<double> s1;
  std::vector<double> s2;
  int s2_clamped = 0;  ///< count of negative second differences clamped to zero
};

enum class FilterKind { lowpass, highpass, bandpass, bandstop, custom };

struct FilterSpec {
  FilterKind kind = FilterKind::custom;
  double t1 = 0;
  double t2 = 0;
  std::vector<double> custom_h;

  static FilterSpec lowpass(double tc) { return {FilterKind::lowpass, tc, 0, {}}; }
  static FilterSpec highpass(double tc) { return {FilterKind::highpass, tc, 0, {}}; }
  static FilterSpec bandpass(double t1, double t2) { return {FilterKind::bandpass, t1, t2, {}}; }
  static FilterSpec bandstop(double t1, double t2) { return {FilterKind::bandstop, t1, t2, {}}; }
  static FilterSpec custom(std::vector<double> h) {
    return {FilterKind::custom, 0, 0, std::move(h)};
  }
};

/// phi_k = t_k (u_{k+1} - 2 u_k + u_{k-1}) / dt^2 for interior k.
SpectralDecomposition transform(const FlowTrajectory& traj);

/// sum_k phi_k dt + residual + mean; reproduces the flow's input.
Signal reconstruct(const SpectralDecomposition& dec);

/// sum_k H(t_k) phi_k dt. The residual and mean ride with whatever passes the
/// large-t end: lowpass and bandstop get them, custom gets them scaled by the
/// last H sample. LPF + HPF and BPF + BSF are exact complements.
Signal apply_filter(const SpectralDecomposition& dec, const FilterSpec& spec);

/// S1 = L1 amplitude of phi; S2 = t sqrt(max(0, d2/dt2 J(u(t)))) with the
/// central second difference of tv_value along the trajectory.
Spectrum spectrum(const FlowTrajectory& traj, const SpectralDecomposition& dec);

/// Worst-case |<phi_k, u_k>| / (||phi_k|| ||u_k||) over steps where
/// ||u_k|| > u_rel_thresh ||u_0|| and ||phi_k|| > phi_rel_thresh max_j ||phi_j||.
/// The discrete kinks at total extinction are parallel to u by construction,
/// hence the default u threshold.
double check_phi_orthogonality(const FlowTrajectory& traj, const SpectralDecomposition& dec,
                               double u_rel_thresh = 0.03, double phi_rel_thresh = 1e-6);

}  // namespace spectv
