#pragma once

#include "spectv/eigenfunctions.hpp"
#include "spectv/spectral.hpp"

#include <map>
#include <string>

namespace spectv {

/// Two-band spectral split of a signal at cutoff scale t_cut.
struct DecompositionResult {
  Signal low;
  Signal high;
  double t_cut = 0;
  double err_low = -1;   ///< relative L2 error vs ground truth (zero-mean parts), -1 if no truth
  double err_high = -1;
  bool flow_converged = true;
};

/// One measure-vs-distance sweep: O and L per abscissa point, plus an optional
/// extra recorded series.
struct MeasureCurve {
  std::vector<double> abscissa;
  std::vector<double> o_values;
  std::vector<double> l_values;
  std::vector<double> extra;
  std::string extra_name;
  std::vector<bool> overlapping;  ///< supports overlap at this point
  std::map<std::string, double> metadata;
};

/// Runs the flow and transform on f, then splits with LPF/HPF at t_cut.
/// low + high equals the reconstruction exactly for any cutoff.
DecompositionResult separate(const Signal& f, double t_cut, const FlowParams& flow,
                             const Signal* truth_low = nullptr,
                             const Signal* truth_high = nullptr);

/// Two zero-mean 1D boxes (w1,h1) and (w2,h2); the first is displaced by each
/// d in d_values from the common center while the second stays put. Records
/// O(u,v) and L(u,v) per d.
MeasureCurve experiment_1d_distance(Eigen::Index n, Eigen::Index w1, double h1, Eigen::Index w2,
                                    double h2, const std::vector<double>& d_values,
                                    const FlowParams& flow);

/// Two identical zero-mean discs of radius r and height h at center distance
/// d = (d/r) * r, swept over d_over_r_values. Records O, L and the subgradient
/// additivity defect ||p(u+v) - p(u) - p(v)|| / ||p(u+v)||.
MeasureCurve experiment_two_discs(Eigen::Index n, double r, double h,
                                  const std::vector<double>& d_over_r_values,
                                  const FlowParams& flow);

struct BlobGeometry {
  Eigen::Index n = 128;
  double r_small = 5, h_small = 1.0;
  double r_big = 20, h_big = 0.8;
  std::pair<double, double> c_small_separated = {32, 32};
  std::pair<double, double> c_small_overlapping = {78, 78};  ///< inside the big blob
  std::pair<double, double> c_big = {84, 84};
};

/// Scale-separation demonstration: a small and a large blob, once spatially
/// separated and once overlapping. Emits the measures, the filtered images
/// and the spectra-additivity defect for both variants.
struct BlobReport {
  BlobGeometry geometry;
  double o_separated = 0, l_separated = 0;
  double o_overlapping = 0, l_overlapping = 0;
  double spectrum_additivity_separated = 0;   ///< ||S_f - (S_u + S_v)||_1 / ||S_f||_1
  double spectrum_additivity_overlapping = 0;
  double t_cut = 0;
  Signal f_separated, f_overlapping;
  Signal hpf_separated, lpf_separated;
  Signal hpf_overlapping, lpf_overlapping;
  Spectrum spectrum_separated, spectrum_overlapping, spectrum_sum_separated;
};

BlobReport experiment_blobs(const BlobGeometry& geo, const FlowParams& flow);

/// Geometric-mean cutoff 1/sqrt(lambda1*lambda2), the default separation scale.
inline double geometric_cutoff(double lambda1, double lambda2) {
  if (!(lambda1 > 0) || !(lambda2 > 0))
    throw std::invalid_argument("geometric_cutoff: eigenvalues must be positive");
  return 1.0 / std::sqrt(lambda1 * lambda2);
}

}  // namespace spectv
