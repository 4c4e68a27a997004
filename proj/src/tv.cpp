#include "spectv/tv.hpp"

namespace spectv {

namespace {

void grad_into(const Eigen::ArrayXd& u, const GridSpec& g, std::vector<Eigen::ArrayXd>& comps) {
  if (g.dims() == 1) {
    const Eigen::Index n = g.shape[0];
    const double inv_h = 1.0 / g.spacing[0];
    auto& c = comps[0];
    for (Eigen::Index i = 0; i + 1 < n; ++i) c[i] = (u[i + 1] - u[i]) * inv_h;
    c[n - 1] = 0.0;
  } else {
    const Eigen::Index n0 = g.shape[0], n1 = g.shape[1];
    const double inv_h0 = 1.0 / g.spacing[0], inv_h1 = 1.0 / g.spacing[1];
    auto& c0 = comps[0];
    auto& c1 = comps[1];
    const Eigen::Index m = (n0 - 1) * n1;
    c0.head(m) = (u.segment(n1, m) - u.head(m)) * inv_h0;
    c0.tail(n1).setZero();
    for (Eigen::Index i = 0; i < n0; ++i) {
      const Eigen::Index row = i * n1;
      c1.segment(row, n1 - 1) = (u.segment(row + 1, n1 - 1) - u.segment(row, n1 - 1)) * inv_h1;
      c1[row + n1 - 1] = 0.0;
    }
  }
}

void div_into(const std::vector<Eigen::ArrayXd>& comps, const GridSpec& g, Eigen::ArrayXd& out) {
  if (g.dims() == 1) {
    const Eigen::Index n = g.shape[0];
    const double inv_h = 1.0 / g.spacing[0];
    const auto& c = comps[0];
    // last component is ignored so that div is the exact negative adjoint of grad
    for (Eigen::Index i = 0; i < n; ++i) {
      const double right = (i + 1 < n) ? c[i] : 0.0;
      const double left = (i > 0) ? c[i - 1] : 0.0;
      out[i] = (right - left) * inv_h;
    }
  } else {
    const Eigen::Index n0 = g.shape[0], n1 = g.shape[1];
    const double inv_h0 = 1.0 / g.spacing[0], inv_h1 = 1.0 / g.spacing[1];
    const auto& c0 = comps[0];
    const auto& c1 = comps[1];
    const Eigen::Index m = (n0 - 1) * n1;
    out.setZero();
    out.head(m) += c0.head(m) * inv_h0;
    out.segment(n1, m) -= c0.head(m) * inv_h0;
    for (Eigen::Index i = 0; i < n0; ++i) {
      const Eigen::Index row = i * n1;
      out.segment(row, n1 - 1) += c1.segment(row, n1 - 1) * inv_h1;
      out.segment(row + 1, n1 - 1) -= c1.segment(row, n1 - 1) * inv_h1;
    }
  }
}

}  // namespace

VectorField grad(const Signal& u) {
  VectorField out = VectorField::zeros(u.grid);
  grad_into(u.values, u.grid, out.comps);
  return out;
}

Signal div(const VectorField& xi) {
  Signal out = Signal::zeros(xi.grid);
  div_into(xi.comps, xi.grid, out.values);
  return out;
}

double tv_value(const Signal& u, const TvConfig& cfg) {
  VectorField g = grad(u);
  const double vol = u.grid.cell_volume();
  if (u.grid.dims() == 1 || cfg.variant == TvVariant::anisotropic) {
    double s = 0;
    for (const auto& c : g.comps) s += c.abs().sum();
    return s * vol;
  }
  return (g.comps[0].square() + g.comps[1].square()).sqrt().sum() * vol;
}

ProxResult prox_tv(const Signal& f, double tau, const TvConfig& cfg, VectorField* warm_xi) {
  if (!(tau > 0)) throw std::invalid_argument("prox_tv: tau must be positive");
  const GridSpec& g = f.grid;
  const int d = g.dims();
  const double hmin = g.min_spacing();
  const double sigma = hmin * hmin / (4.0 * d);

  VectorField xi = (warm_xi && !warm_xi->comps.empty()) ? *warm_xi : VectorField::zeros(g);
  if (xi.grid != g) xi = VectorField::zeros(g);

  const Eigen::ArrayXd w = f.values / tau;
  const bool iso = (cfg.variant == TvVariant::isotropic) && d == 2;

  bool converged = false;
  int it = 0;
  // preallocated scratch; the loop below is the hot path of every flow step
  Eigen::ArrayXd s(g.size()), denom(g.size()), next(g.size());
  std::vector<Eigen::ArrayXd> gr(size_t(d), Eigen::ArrayXd::Zero(g.size()));
  for (; it < cfg.prox_max_iter; ++it) {
    div_into(xi.comps, g, s);
    s -= w;
    grad_into(s, g, gr);
    double delta = 0;
    if (iso) {
      denom = 1.0 + sigma * (gr[0].square() + gr[1].square()).sqrt();
      for (int a = 0; a < d; ++a) {
        next = (xi.comps[size_t(a)] + sigma * gr[size_t(a)]) / denom;
        delta = std::max(delta, (next - xi.comps[size_t(a)]).abs().maxCoeff());
        xi.comps[size_t(a)].swap(next);
      }
    } else {
      for (int a = 0; a < d; ++a) {
        next = (xi.comps[size_t(a)] + sigma * gr[size_t(a)]) / (1.0 + sigma * gr[size_t(a)].abs());
        delta = std::max(delta, (next - xi.comps[size_t(a)]).abs().maxCoeff());
        xi.comps[size_t(a)].swap(next);
      }
    }
    if (delta < cfg.prox_tol) {
      converged = true;
      ++it;
      break;
    }
  }

  div_into(xi.comps, g, s);
  ProxResult res;
  res.u = Signal(g, f.values - tau * s);
  res.converged = converged;
  res.iterations = it;
  if (warm_xi) *warm_xi = std::move(xi);
  return res;
}

Subgradient subgradient(const Signal& v, double tau, const TvConfig& cfg) {
  if (tau <= 0) {
    const double amp = v.values.abs().maxCoeff();
    tau = 0.01 * std::max(amp, 1e-300) * v.grid.min_spacing();
  }
  VectorField xi;
  ProxResult pr = prox_tv(v, tau, cfg, &xi);
  Subgradient p;
  // p = (v - prox) / tau; computed as div(xi) which is the same quantity
  // without the catastrophic cancellation at small tau.
  p.value = div(xi);
  p.tau = tau;
  p.functional_value = tv_value(v, cfg);
  p.converged = pr.converged;
  return p;
}

}  // namespace spectv
