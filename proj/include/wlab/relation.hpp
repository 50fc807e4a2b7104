#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "wlab/scalar_function.hpp"

namespace wlab {

/// Log-spaced sampling of [0, t_max]: the point 0 followed by `samples - 1`
/// points t_min * 10^(j * step), j = 0..samples-2, ending at t_max.
struct CertificationGrid {
  double t_max = 1e4;
  int samples = 10000;
  double t_min_positive = 1e-6;

  std::vector<double> points() const;
  /// Grid seen by the relation after the blow-up t -> lambda^2 t.
  CertificationGrid rescaled(double lambda) const;
};

enum class RelationKind { Cmc, Linear, G, F };

/// 2 alpha H + beta K = delta. `branch` selects which root of
/// beta H^2 + 2 alpha H - (delta + beta t) = 0 is used as g(t):
///   g(t) = (delta + beta t) / (alpha + branch * sqrt(alpha^2 + beta delta + beta^2 t)).
struct LinearCoeffs {
  double alpha = 0;
  double beta = 0;
  double delta = 0;
  int branch = 1;
};

/// A Weingarten curvature relation, H = g(H^2 - K) or k2 = f(k1).
/// Immutable; every query is const and thread-safe.
class Relation {
 public:
  static Relation cmc(double h0);
  /// Throws RejectedInput unless alpha^2 + beta delta > 0. The default
  /// branch is sign(alpha) (+1 when alpha = 0), which is the branch that
  /// stays finite as beta -> 0.
  static Relation linear(double alpha, double beta, double delta, std::optional<int> branch = {});
  static Relation g_form(ScalarFunction g);
  static Relation f_form(ScalarFunction f);

  RelationKind kind() const;
  double cmc_value() const;
  LinearCoeffs linear_coeffs() const;
  /// The stored g (G form) or f (F form).
  const ScalarFunction& function() const;
  /// True unless the relation stores a Hermite table.
  bool closed_form() const;

  double g(double t) const;
  double g_prime(double t) const;
  double f(double x) const;
  double f_prime(double x) const;

  /// Values of t where g may be evaluated.
  Interval g_domain() const;
  /// Values of x where f may be evaluated.
  Interval f_domain() const;
  /// Best-known I_f: exact for CMC/linear, the stored domain for F forms,
  /// limits of g(t) -+ sqrt(t) for G forms.
  Interval declared_if() const;
  /// Signed fixed point of f, i.e. g(0); empty when it cannot be located.
  std::optional<double> fixed_point() const;

  /// Orientation reversal: g -> -g, f(x) -> -f(-x).
  Relation negated() const;

 private:
  struct Cmc {
    double h0;
  };
  struct G {
    ScalarFunction g;
    Interval i_f;
  };
  struct F {
    ScalarFunction f;
    std::optional<double> fixed;
  };
  using Variant = std::variant<Cmc, LinearCoeffs, G, F>;
  explicit Relation(Variant v) : v_(std::move(v)) {}

  double f_from_g(double x, double* slope) const;
  double g_from_f(double t, double* slope) const;

  Variant v_;
};

enum class BoundedBranch { TPlusGBounded, TMinusGBounded, Neither };

const char* to_string(BoundedBranch b);

struct EllipticityReport {
  bool is_elliptic = false;
  double sup_4tgp2 = 0;
  double sup_at_t = 0;
  std::optional<double> uniform_constant_lambda;
  std::optional<std::pair<double, double>> f_slope_bounds;
  std::optional<double> umbilical_alpha;
  bool minimal_type = false;
  Interval if_domain;
  BoundedBranch bounded_branch = BoundedBranch::Neither;
  bool orientation_flipped = false;
  CertificationGrid grid;
};

/// Margin below 1 that sup 4t g'(t)^2 must keep for a uniform constant to
/// be reported.
inline constexpr double kUniformMargin = 1e-3;
inline constexpr double kMinimalTol = 1e-13;
inline constexpr double kSymmetryTol = 1e-8;
inline constexpr double kMonotoneMargin = 1e-12;

/// Flips orientation when g(0) < 0 so the umbilical constant is >= 0.
std::pair<Relation, bool> normalize_orientation(const Relation& rel);

/// Grid certification of ellipticity and the classification data that
/// decides which Bernstein-type statement applies. Throws RejectedInput
/// naming the grid point when the relation cannot be evaluated there.
EllipticityReport certify_ellipticity(const Relation& rel, const CertificationGrid& grid = {});

/// Boundedness of t -+ g(t^2), sampled on quarter decades up to 10^6 (or the
/// end of g's domain).
BoundedBranch classify_bounded_branch(const Relation& rel);

/// Samples both branches {(g - sqrt t, g + sqrt t), (g + sqrt t, g - sqrt t)}
/// into a Hermite F form. Rejects input whose branches are not strictly
/// monotone on the grid.
Relation g_to_f(const Relation& rel, const std::vector<double>& t_grid);

/// t = (x - f(x))^2 / 4, g = (x + f(x)) / 2 on the grid (plus the fixed point
/// when it lies inside the grid range), as a Hermite G form.
Relation f_to_g(const Relation& rel, const std::vector<double>& x_grid);

/// max |f(f(x)) - x| over the points and the worst x.
std::pair<double, double> involution_defect(const Relation& rel, const std::vector<double>& x_grid);

/// |g(0)| when the fixed point exists.
std::optional<double> umbilical_constant(const Relation& rel);

/// Wedge slopes (m1, m2) = (-Lambda2, -Lambda1) bounding the graph of f for
/// uniformly elliptic relations of minimal type.
std::pair<double, double> wedge_for_uniform_minimal(const Relation& rel,
                                                    const CertificationGrid& grid = {});

/// Blow-up rescaling G(t) = g(lambda^2 t) / lambda of any relation kind.
Relation rescale_relation(const Relation& rel, double lambda);

}  // namespace wlab
