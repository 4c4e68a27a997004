#include "spectv/sip.hpp"

#include <cmath>

namespace spectv {

namespace {

double clamped_acos(double x, int* clamp_events) {
  if (x > 1.0 || x < -1.0) {
    // round-off excursions are expected; only count material ones
    if (clamp_events && std::abs(x) > 1.0 + 1e-9) ++(*clamp_events);
    x = std::clamp(x, -1.0, 1.0);
  }
  return std::acos(x);
}

void require_nonnull(double j, const char* who) {
  if (!(j > 0)) throw std::domain_error(std::string(who) + ": argument is in the null space of J");
}

}  // namespace

FunctionalHandle make_tv_handle(TvConfig cfg, double tau) {
  FunctionalHandle F;
  F.value = [cfg](const Signal& u) { return tv_value(u, cfg); };
  F.subgrad = [cfg, tau](const Signal& v) {
    double t = tau;
    if (t <= 0) t = 1e-3 * std::max(v.values.abs().maxCoeff(), 1e-300) * v.grid.min_spacing();
    return subgradient(v, t, cfg);
  };
  return F;
}

Subgradient lq_subgradient(const Signal& u, double q) {
  if (!(q > 1) || !std::isfinite(q))
    throw std::invalid_argument("lq_subgradient: need 1 < q < inf");
  const double vol = u.grid.cell_volume();
  const double norm_q = std::pow((u.values.abs().pow(q)).sum() * vol, 1.0 / q);
  if (!(norm_q > 0)) throw std::domain_error("lq_subgradient: zero signal");
  // |u|^{q-2} u = sgn(u) |u|^{q-1}, well defined at zeros for q > 1
  Eigen::ArrayXd p = u.values.sign() * u.values.abs().pow(q - 1.0) * std::pow(norm_q, 1.0 - q);
  Subgradient out;
  out.value = Signal(u.grid, std::move(p));
  out.tau = 0;
  out.functional_value = norm_q;
  out.converged = true;
  return out;
}

FunctionalHandle make_lq_handle(double q) {
  FunctionalHandle F;
  F.value = [q](const Signal& u) {
    return std::pow((u.values.abs().pow(q)).sum() * u.grid.cell_volume(), 1.0 / q);
  };
  F.subgrad = [q](const Signal& v) { return lq_subgradient(v, q); };
  return F;
}

double sip(const Signal& u, const Signal& v, const FunctionalHandle& F) {
  const double jv = F.value(v);
  if (!(jv > 0)) return 0.0;
  return inner_product(u, F.subgrad(v).value) * jv;
}

double hsip(const Signal& u, const Signal& v, const FunctionalHandle& F) {
  return inner_product(u, F.subgrad(v).value);
}

double angle(const Signal& u, const Signal& v, const FunctionalHandle& F, int* clamp_events) {
  const double ju = F.value(u);
  const double jv = F.value(v);
  require_nonnull(ju, "angle");
  require_nonnull(jv, "angle");
  // [u,v]/(J(u)J(v)) with the J(v) factors cancelled
  return clamped_acos(hsip(u, v, F) / ju, clamp_events);
}

double angle_sym_a(const Signal& u, const Signal& v, const FunctionalHandle& F,
                   int* clamp_events) {
  const double ju = F.value(u);
  const double jv = F.value(v);
  require_nonnull(ju, "angle_sym_a");
  require_nonnull(jv, "angle_sym_a");
  const double s = 0.5 * (sip(u, v, F) + sip(v, u, F));
  return clamped_acos(s / (ju * jv), clamp_events);
}

double angle_sym_g(const Signal& u, const Signal& v, const FunctionalHandle& F,
                   int* clamp_events) {
  const double ju = F.value(u);
  const double jv = F.value(v);
  require_nonnull(ju, "angle_sym_g");
  require_nonnull(jv, "angle_sym_g");
  const double a = sip(u, v, F);
  const double b = sip(v, u, F);
  const double s = (a * b >= 0 ? 1.0 : -1.0) * std::sqrt(std::abs(a * b));
  return clamped_acos(s / (ju * jv), clamp_events);
}

double bregman(const Signal& u, const Signal& v, const FunctionalHandle& F) {
  return F.value(u) - inner_product(F.subgrad(v).value, u);
}

double orth_measure(const Signal& u, const Signal& v, const FunctionalHandle& F,
                    int* clamp_events) {
  const double ju = F.value(u);
  const double jv = F.value(v);
  require_nonnull(ju, "orth_measure");
  require_nonnull(jv, "orth_measure");
  const double o = 1.0 - std::sqrt(std::abs(sip(u, v, F) * sip(v, u, F))) / (ju * jv);
  if (o < 0.0 || o > 1.0) {
    if (clamp_events && (o < -1e-9 || o > 1.0 + 1e-9)) ++(*clamp_events);
    return std::clamp(o, 0.0, 1.0);
  }
  return o;
}

double lis_defect(const Signal& u, const Signal& v, const FunctionalHandle& F) {
  require_same_grid(u, v);
  Signal sum(u.grid, u.values + v.values);
  return hsip(sum, u, F) + hsip(sum, v, F) - F.value(sum);
}

double lis_measure(const Signal& u, const Signal& v, const FunctionalHandle& F) {
  require_same_grid(u, v);
  Signal sum(u.grid, u.values + v.values);
  const double juv = F.value(sum);
  require_nonnull(juv, "lis_measure");
  return 1.0 - std::abs(lis_defect(u, v, F)) / juv;
}

MeasureReport full_report(const Signal& u, const Signal& v, const FunctionalHandle& F) {
  return full_report(u, v, F, nullptr, nullptr, nullptr);
}

MeasureReport full_report(const Signal& u, const Signal& v, const FunctionalHandle& F,
                          Subgradient* pu_out, Subgradient* pv_out, Subgradient* puv_out) {
  require_same_grid(u, v);
  Signal sum(u.grid, u.values + v.values);

  MeasureReport r;
  r.j_u = F.value(u);
  r.j_v = F.value(v);
  r.j_uv = F.value(sum);
  require_nonnull(r.j_u, "full_report");
  require_nonnull(r.j_v, "full_report");
  require_nonnull(r.j_uv, "full_report");

  const Subgradient pu = F.subgrad(u);
  const Subgradient pv = F.subgrad(v);
  const Subgradient puv = F.subgrad(sum);
  r.converged = pu.converged && pv.converged && puv.converged;

  r.hsip_uv = inner_product(u, pv.value);
  r.hsip_vu = inner_product(v, pu.value);
  r.sip_uv = r.hsip_uv * r.j_v;
  r.sip_vu = r.hsip_vu * r.j_u;

  r.angle_uv = clamped_acos(r.hsip_uv / r.j_u, &r.clamp_events);
  r.angle_sym_a =
      clamped_acos(0.5 * (r.sip_uv + r.sip_vu) / (r.j_u * r.j_v), &r.clamp_events);
  const double prod = r.sip_uv * r.sip_vu;
  r.angle_sym_g = clamped_acos(
      (prod >= 0 ? 1.0 : -1.0) * std::sqrt(std::abs(prod)) / (r.j_u * r.j_v), &r.clamp_events);

  r.bregman_uv = r.j_u - r.hsip_uv;

  const double o = 1.0 - std::sqrt(std::abs(prod)) / (r.j_u * r.j_v);
  if (o < -1e-9 || o > 1.0 + 1e-9) ++r.clamp_events;
  r.orth_O = std::clamp(o, 0.0, 1.0);

  r.lis_E = inner_product(sum, pu.value) + inner_product(sum, pv.value) - r.j_uv;
  r.lis_L = 1.0 - std::abs(r.lis_E) / r.j_uv;

  if (pu_out) *pu_out = pu;
  if (pv_out) *pv_out = pv;
  if (puv_out) *puv_out = puv;
  return r;
}

}  // namespace spectv
