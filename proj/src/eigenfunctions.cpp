#include "spectv/eigenfunctions.hpp"

namespace spectv {

double rayleigh_lambda(const Signal& f, const FunctionalHandle& F) {
  const double nrm = l2_norm(f);
  if (!(nrm > 0)) throw std::domain_error("rayleigh_lambda: zero signal");
  return F.value(f) / (nrm * nrm);
}

Eigenpair eigen_residual(const Signal& f, const FunctionalHandle& F) {
  Eigenpair pair;
  pair.signal = f;
  pair.lambda = rayleigh_lambda(f, F);
  const Subgradient p = F.subgrad(f);
  Signal diff(f.grid, p.value.values - pair.lambda * f.values);
  const double pn = l2_norm(p.value);
  pair.residual = pn > 0 ? l2_norm(diff) / pn : 0.0;
  return pair;
}

Eigenpair make_box_1d(Eigen::Index n, Eigen::Index w, double a, Eigen::Index offset, double h) {
  if (w < 2 || w > n - 2) throw std::invalid_argument("make_box_1d: need 2 <= w <= n-2");
  const Eigen::Index start = (n - w) / 2 + offset;
  if (start < 1 || start + w > n - 1)
    throw std::invalid_argument("make_box_1d: offset pushes the window onto the boundary");
  const double background = -a * double(w) / double(n - w);
  Eigen::ArrayXd v = Eigen::ArrayXd::Constant(n, background);
  v.segment(start, w) = a;
  Signal f(GridSpec::line(n, h), std::move(v));
  // the dual ramp across the flat background equilibrates slowly, so the
  // residual measurement runs the prox much further than the defaults
  return eigen_residual(f, make_tv_handle(TvConfig(TvVariant::anisotropic, 1e-10, 200000)));
}

Eigenpair make_disc_2d(Eigen::Index n, double r, std::pair<double, double> center, double height,
                       double h) {
  const auto [cy, cx] = center;
  if (!(r >= 1)) throw std::invalid_argument("make_disc_2d: radius must be >= 1 sample");
  if (cy - r < 2 || cx - r < 2 || cy + r > double(n) - 3 || cx + r > double(n) - 3)
    throw std::invalid_argument("make_disc_2d: disc needs a >= 2-sample margin");
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(n * n);
  const double r2 = r * r;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double dy = double(i) - cy, dx = double(j) - cx;
      if (dy * dy + dx * dx <= r2) v[i * n + j] = height;
    }
  v -= v.mean();
  Signal f(GridSpec::plane(n, n, h), std::move(v));
  return eigen_residual(f, make_tv_handle(TvConfig(TvVariant::isotropic)));
}

Signal eigen_flow_solution(const Eigenpair& pair, double t) {
  if (t < 0) throw std::invalid_argument("eigen_flow_solution: t must be >= 0");
  const double c = std::max(0.0, 1.0 - pair.lambda * t);
  return Signal(pair.signal.grid, c * pair.signal.values);
}

}  // namespace spectv
