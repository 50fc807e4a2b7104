#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "wlab/relation.hpp"

namespace wlab {

/// Second-order jet of a graph z = u(x, y): p = u_x, q = u_y, r = u_xx,
/// s = u_xy, t = u_yy.
struct Jet2 {
  double p = 0, q = 0, r = 0, s = 0, t = 0;
};

/// Mean and Gauss curvature for the upward unit normal.
struct MeanGauss {
  double H = 0;
  double K = 0;
};

MeanGauss curvatures_of_jet(const Jet2& j);

/// H^2 - K, with roundoff in (-1e-14, 0) clamped to 0.
double umbilicity(const MeanGauss& c);

/// Principal curvatures H +- sqrt(H^2 - K), k1 >= k2.
std::array<double, 2> principal_curvatures(const Jet2& j);

/// H - g(H^2 - K).
double weingarten_residual(const Relation& rel, const Jet2& j);

/// dF/d(p, q, r, s, t). The analytic path differentiates the curvature
/// formulas directly and uses g'.
std::array<double, 5> residual_gradient(const Relation& rel, const Jet2& j);
/// Central differences with step 1e-6 (1 + |component|).
std::array<double, 5> residual_gradient_fd(const Relation& rel, const Jet2& j);

/// Spectrum of the quadratic form (r, s, t) -> (H^2 - K)(p, q, r, s, t),
/// sorted descending; the last entry is 0.
std::array<double, 3> h2k_eigenvalues(double p, double q);
/// The same closed form without the 1/(1+p^2+q^2)^2 factor, i.e. the
/// spectrum of (1+p^2+q^2)^2 (H^2 - K).
std::array<double, 3> h2k_eigenvalues_displayed(double p, double q);

double q4(double x, double y);
double q4_rewritten(double x, double y);

/// Jets with p^2 + q^2 <= slope_bound and |p|+|q|+|r|+|s|+|t| <= l1_bound.
struct ThetaBox {
  double slope_bound = 9.0 / 4.0;
  double l1_bound = 4.0;

  bool contains(const Jet2& j) const;
};

struct LambdaEstimate {
  double lambda = 0;  // infimum over samples
  Jet2 worst;
  std::size_t samples = 0;
  bool certified = false;  // lambda > 0
};

/// Minimum over sampled jets in the box of the smallest eigenvalue of
/// [[F_r, F_s/2], [F_s/2, F_t]]. The origin jet is always included.
LambdaEstimate uniform_ellipticity_lambda(const Relation& rel, const ThetaBox& box,
                                          std::size_t sample_count, std::uint64_t seed = 1);

struct DerivativeBound {
  bool ok = false;
  double sup = 0;  // sup sqrt(t) |g'(t)|
  double worst_t = 0;
};

/// sqrt(t) |g'(t)| < 1/2 on the certification grid.
DerivativeBound derivative_bound_check(const Relation& rel, const CertificationGrid& grid = {});

}  // namespace wlab
