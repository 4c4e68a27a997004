#pragma once

#include "spectv/sip.hpp"

namespace spectv {

/// Candidate nonlinear eigenfunction lambda f in dJ(f), with the measured
/// relative residual ||p - lambda f|| / ||p|| of that claim.
struct Eigenpair {
  Signal signal;
  double lambda = 0;
  double residual = 0;
};

/// J(f) / ||f||^2; for an indicator of a set this is perimeter over area.
double rayleigh_lambda(const Signal& f, const FunctionalHandle& F);

/// Measures how far f is from satisfying lambda f in dJ(f) with the canonical
/// subgradient.
Eigenpair eigen_residual(const Signal& f, const FunctionalHandle& F);

/// Zero-mean 1D box: value a (above the mean) on a width-w window centered in
/// the domain plus `offset` samples, value -a*w/(n-w) elsewhere. The centered
/// box is an exact eigenfunction of anisotropic TV with Neumann boundary,
/// lambda = 2/(w*a*h); off-center placements are near-eigenfunctions (the
/// two boundary margins differ). The stored lambda and residual are measured.
Eigenpair make_box_1d(Eigen::Index n, Eigen::Index w, double a, Eigen::Index offset = 0,
                      double h = 1.0);

/// Zero-mean rasterized disc of radius r (in samples) and the given height
/// above the mean, on an n x n grid. Approximate eigenfunction of isotropic
/// TV; the measured residual is reported, no exactness claim.
Eigenpair make_disc_2d(Eigen::Index n, double r, std::pair<double, double> center, double height,
                       double h = 1.0);

/// Closed-form flow solution (1 - lambda t)^+ f for an eigenpair.
Signal eigen_flow_solution(const Eigenpair& pair, double t);

}  // namespace spectv
