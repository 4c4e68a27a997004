#pragma once

#include "spectv/core.hpp"

namespace spectv {

enum class TvVariant { isotropic, anisotropic };

/// Discretization choices for the total variation functional.
/// Boundary handling is replicate (Neumann) throughout.
struct TvConfig {
  TvVariant variant = TvVariant::anisotropic;
  double prox_tol = 1e-6;
  int prox_max_iter = 5000;

  TvConfig() = default;
  TvConfig(TvVariant v, double tol = 1e-6, int max_iter = 5000)
      : variant(v), prox_tol(tol), prox_max_iter(max_iter) {
    if (!(prox_tol > 0)) throw std::invalid_argument("TvConfig: prox_tol must be positive");
    if (prox_max_iter < 1) throw std::invalid_argument("TvConfig: prox_max_iter must be >= 1");
  }
};

/// Anisotropic TV for 1D grids (discrete boxes are exact eigenfunctions),
/// isotropic for 2D (matches the disc experiments).
inline TvConfig tv_config_for(int dims) {
  return TvConfig(dims == 1 ? TvVariant::anisotropic : TvVariant::isotropic);
}

/// One real component per grid axis, same shape as the grid.
struct VectorField {
  GridSpec grid;
  std::vector<Eigen::ArrayXd> comps;

  VectorField() = default;
  VectorField(GridSpec g, std::vector<Eigen::ArrayXd> c) : grid(std::move(g)), comps(std::move(c)) {
    if (static_cast<int>(comps.size()) != grid.dims())
      throw std::invalid_argument("VectorField: one component per axis required");
    for (const auto& a : comps) {
      if (a.size() != grid.size())
        throw std::invalid_argument("VectorField: component size mismatch");
      if (!a.isFinite().all())
        throw std::invalid_argument("VectorField: values must be finite");
    }
  }

  static VectorField zeros(const GridSpec& g) {
    std::vector<Eigen::ArrayXd> c(g.dims(), Eigen::ArrayXd::Zero(g.size()));
    return VectorField(g, std::move(c));
  }
};

/// A numerically extracted element of the subdifferential, tagged with the
/// extraction step tau and the functional value at the base point.
struct Subgradient {
  Signal value;
  double tau = 0;
  double functional_value = 0;
  bool converged = true;
};

/// Forward differences per axis divided by h; replicate boundary (last
/// difference along each axis is zero).
VectorField grad(const Signal& u);

/// Exact negative adjoint of grad under inner_product: backward differences,
/// with the last component along each axis treated as zero.
Signal div(const VectorField& xi);

double tv_value(const Signal& u, const TvConfig& cfg);

struct ProxResult {
  Signal u;
  bool converged = true;
  int iterations = 0;
};

/// argmin_u 1/2 ||u - f||^2 + tau J(u) by the dual fixed-point projection
/// iteration. If warm_xi is given it seeds the dual field and receives the
/// final one (useful when stepping a flow).
ProxResult prox_tv(const Signal& f, double tau, const TvConfig& cfg, VectorField* warm_xi = nullptr);

/// Canonical subgradient p = (v - prox_tv(v, tau)) / tau, an exact element of
/// the subdifferential at prox_tv(v, tau). tau <= 0 selects the default step
/// 0.01 * max|v| * h_min.
Subgradient subgradient(const Signal& v, double tau, const TvConfig& cfg);

}  // namespace spectv
