#pragma once

#include <array>
#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace wlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Real interval with optionally open endpoints. Infinite endpoints are
/// always treated as open.
struct Interval {
  double lo = -kInf;
  double hi = kInf;
  bool lo_open = true;
  bool hi_open = true;

  static Interval closed(double a, double b) { return {a, b, false, false}; }
  static Interval open(double a, double b) { return {a, b, true, true}; }
  static Interval real_line() { return {}; }
  static Interval half_line(double a) { return {a, kInf, false, true}; }

  bool contains(double x) const;
  bool is_real_line() const { return lo == -kInf && hi == kInf; }
  bool operator==(const Interval&) const = default;
};

/// Named analytic families. Parameters c[0..3]:
///   Constant    c0
///   Affine      c0 + c1 x
///   SqrtAffine  c0 + c1 sqrt(c2 + c3 x)
///   Mobius      (c0 + c1 x) / (c2 + c3 x)
enum class Family { Constant, Affine, SqrtAffine, Mobius };

struct ClosedForm {
  Family family = Family::Constant;
  std::array<double, 4> c{};
};

/// Piecewise cubic Hermite data; C^1 by construction.
struct SampledHermite {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> dy;
};

std::string to_string(Family f);
Family family_from_string(const std::string& name);

/// Scalar function of one variable: a closed form or a Hermite table,
/// optionally composed with an input/output scaling
///   F(x) = out_scale * base(in_scale * x).
/// Evaluation outside the domain throws DomainError; nothing is extrapolated.
class ScalarFunction {
 public:
  ScalarFunction();

  static ScalarFunction closed(Family family, std::array<double, 4> c, Interval domain);
  static ScalarFunction constant(double c, Interval domain = Interval::real_line());
  static ScalarFunction affine(double c0, double c1, Interval domain = Interval::real_line());
  static ScalarFunction sqrt_affine(double c0, double c1, double c2, double c3, Interval domain);
  static ScalarFunction mobius(double c0, double c1, double c2, double c3, Interval domain);
  static ScalarFunction hermite(std::vector<double> x, std::vector<double> y, std::vector<double> dy);

  double operator()(double x) const;
  double derivative(double x) const;
  /// Closed forms: analytic. Hermite tables: central difference of the
  /// stored first derivative (the interpolant's first derivative).
  double second_derivative(double x) const;

  Interval domain() const;
  bool is_closed_form() const { return std::holds_alternative<ClosedForm>(rep_); }
  const ClosedForm* closed_form() const { return std::get_if<ClosedForm>(&rep_); }
  const SampledHermite* hermite_table() const { return std::get_if<SampledHermite>(&rep_); }
  double in_scale() const { return in_scale_; }
  double out_scale() const { return out_scale_; }
  Interval base_domain() const { return base_domain_; }

  /// x -> out * F(in * x), composed with any existing scaling.
  ScalarFunction scaled(double in, double out) const;

 private:
  double base_value(double z) const;
  double base_derivative(double z) const;
  double base_second(double z) const;
  double checked_arg(double x) const;

  std::variant<ClosedForm, SampledHermite> rep_;
  Interval base_domain_;
  double in_scale_ = 1.0;
  double out_scale_ = 1.0;
};

}  // namespace wlab
