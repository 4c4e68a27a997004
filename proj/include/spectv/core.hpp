#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <utility>
#include <vector>

namespace spectv {

/// Regular sampling grid in one or two dimensions.
struct GridSpec {
  std::vector<Eigen::Index> shape;  ///< samples per axis (each >= 2)
  std::vector<double> spacing;      ///< grid step per axis (each > 0)

  GridSpec() = default;

  explicit GridSpec(std::vector<Eigen::Index> shape_, std::vector<double> spacing_ = {})
      : shape(std::move(shape_)), spacing(std::move(spacing_)) {
    if (shape.empty() || shape.size() > 2)
      throw std::invalid_argument("GridSpec: dims must be 1 or 2");
    for (auto s : shape)
      if (s < 2) throw std::invalid_argument("GridSpec: every shape entry must be >= 2");
    if (spacing.empty()) spacing.assign(shape.size(), 1.0);
    if (spacing.size() != shape.size())
      throw std::invalid_argument("GridSpec: spacing size must match shape size");
    for (double h : spacing)
      if (!(h > 0)) throw std::invalid_argument("GridSpec: spacing must be positive");
  }

  static GridSpec line(Eigen::Index n, double h = 1.0) { return GridSpec({n}, {h}); }
  static GridSpec plane(Eigen::Index rows, Eigen::Index cols, double h = 1.0) {
    return GridSpec({rows, cols}, {h, h});
  }

  int dims() const { return static_cast<int>(shape.size()); }

  Eigen::Index size() const {
    Eigen::Index n = 1;
    for (auto s : shape) n *= s;
    return n;
  }

  /// h^d volume element of one grid cell.
  double cell_volume() const {
    double v = 1.0;
    for (double h : spacing) v *= h;
    return v;
  }

  double min_spacing() const {
    double m = spacing[0];
    for (double h : spacing) m = std::min(m, h);
    return m;
  }

  bool operator==(const GridSpec& o) const { return shape == o.shape && spacing == o.spacing; }
  bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

/// Real-valued function sampled on a GridSpec. Values are stored flattened,
/// axis 0 slowest (row-major for 2D).
struct Signal {
  GridSpec grid;
  Eigen::ArrayXd values;

  Signal() = default;

  Signal(GridSpec g, Eigen::ArrayXd v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.size())
      throw std::invalid_argument("Signal: value count does not match grid shape");
    if (!values.isFinite().all())
      throw std::invalid_argument("Signal: values must be finite");
  }

  static Signal zeros(const GridSpec& g) { return Signal(g, Eigen::ArrayXd::Zero(g.size())); }

  Eigen::Index size() const { return values.size(); }
};

inline void require_same_grid(const Signal& u, const Signal& v) {
  if (u.grid != v.grid) throw std::invalid_argument("signals live on different grids");
}

/// L2 inner product with the h^d volume factor, sum_i u_i v_i h^d.
inline double inner_product(const Signal& u, const Signal& v) {
  require_same_grid(u, v);
  return (u.values * v.values).sum() * u.grid.cell_volume();
}

inline double l2_norm(const Signal& u) {
  return std::sqrt(u.values.square().sum() * u.grid.cell_volume());
}

inline double mean(const Signal& u) { return u.values.mean(); }

/// Splits f into its zero-mean part and its mean; the two add back to f exactly.
inline std::pair<Signal, double> split_mean(const Signal& f) {
  const double m = mean(f);
  return {Signal(f.grid, f.values - m), m};
}

}  // namespace spectv
