#pragma once

#include <array>
#include <vector>

#include "wlab/patch.hpp"
#include "wlab/relation.hpp"

namespace wlab {

/// Principal curvature pair, ordered k1 >= k2.
struct CurvaturePair {
  double k1 = 0;
  double k2 = 0;

  static CurvaturePair of(double a, double b) { return a >= b ? CurvaturePair{a, b} : CurvaturePair{b, a}; }
};

/// F_a(t) = t / (1 - a t). Throws DomainError at the pole.
double f_a(double t, double a);
double f_a_derivative(double t, double a);
inline double f_a_inverse(double t, double a) { return f_a(t, -a); }

struct ParallelPair {
  CurvaturePair pair;
  /// (1 - a k)^2 for the input curvatures, in input order (k1, k2).
  std::array<double, 2> metric_factor{};
};

/// Curvatures of the parallel surface at signed distance a along the normal.
ParallelPair parallel_curvatures(const CurvaturePair& pair, double a);

/// Relation satisfied by parallel surfaces at distance a:
/// f -> F_a o f o F_{-a}. CMC and linear relations stay linear (Moebius
/// matrix product); other kinds are returned as a Hermite F form built from
/// the stored table (F form) or from samples at x_grid and f(x_grid).
Relation conjugate_relation(const Relation& rel, double a, const std::vector<double>& x_grid = {});

/// nu = <N, e3> per node of a graph patch (upward normal); NaN outside
/// the interior.
std::vector<double> angle_function(const GraphPatch& patch);

}  // namespace wlab
