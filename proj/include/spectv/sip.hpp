#pragma once

#include "spectv/tv.hpp"

#include <functional>

namespace spectv {

/// A one-homogeneous convex functional presented as its value map J and a
/// canonical (single-valued) subgradient selection.
struct FunctionalHandle {
  std::function<double(const Signal&)> value;
  std::function<Subgradient(const Signal&)> subgrad;
};

/// TV handle. tau <= 0 selects the extraction step 1e-3 * max|v| * h_min; the
/// geometry identities below need a smaller step than the generic
/// subgradient() default to stay inside their tolerances.
FunctionalHandle make_tv_handle(TvConfig cfg, double tau = 0.0);

/// Closed-form subgradient of the Lq norm, p(u) = |u|^{q-2} u ||u||_q^{1-q}.
/// Cross-check oracle for the semi-inner-product formulas.
Subgradient lq_subgradient(const Signal& u, double q);

/// Lq-norm functional with the analytic subgradient above.
FunctionalHandle make_lq_handle(double q);

/// [u,v] = <u, p(v)> J(v) at the canonical p(v). Returns 0 when J(v) = 0.
double sip(const Signal& u, const Signal& v, const FunctionalHandle& F);

/// Degree-1/2 pairing, <u, p(v)>.
double hsip(const Signal& u, const Signal& v, const FunctionalHandle& F);

/// acos of [u,v]/(J(u)J(v)), argument clamped to [-1,1]; clamp events are
/// counted into *clamp_events when given. Throws if J(u) or J(v) vanishes.
double angle(const Signal& u, const Signal& v, const FunctionalHandle& F,
             int* clamp_events = nullptr);
double angle_sym_a(const Signal& u, const Signal& v, const FunctionalHandle& F,
                   int* clamp_events = nullptr);
double angle_sym_g(const Signal& u, const Signal& v, const FunctionalHandle& F,
                   int* clamp_events = nullptr);

/// Bregman distance J(u) - <p(v), u> (one-homogeneous form).
double bregman(const Signal& u, const Signal& v, const FunctionalHandle& F);

/// O(u,v) = 1 - sqrt(|[u,v][v,u]|) / (J(u)J(v)), clamped into [0,1].
double orth_measure(const Signal& u, const Signal& v, const FunctionalHandle& F,
                    int* clamp_events = nullptr);

/// E(u,v) = <u+v, p(u)+p(v)-p(u+v)>.
double lis_defect(const Signal& u, const Signal& v, const FunctionalHandle& F);

/// L(u,v) = 1 - |E(u,v)| / J(u+v).
double lis_measure(const Signal& u, const Signal& v, const FunctionalHandle& F);

/// All scalar geometry outputs from one canonical subgradient evaluation each
/// at u, v and u+v.
struct MeasureReport {
  double j_u = 0, j_v = 0, j_uv = 0;
  double sip_uv = 0, sip_vu = 0;
  double hsip_uv = 0, hsip_vu = 0;
  double angle_uv = 0, angle_sym_a = 0, angle_sym_g = 0;
  double bregman_uv = 0;
  double orth_O = 0;
  double lis_E = 0, lis_L = 0;
  int clamp_events = 0;
  bool converged = true;
};

MeasureReport full_report(const Signal& u, const Signal& v, const FunctionalHandle& F);

/// As above, but hands back the three canonical subgradients it evaluated.
MeasureReport full_report(const Signal& u, const Signal& v, const FunctionalHandle& F,
                          Subgradient* pu_out, Subgradient* pv_out, Subgradient* puv_out);

}  // namespace spectv
