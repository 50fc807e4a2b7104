#include "wlab/scalar_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wlab/error.hpp"

namespace wlab {

bool Interval::contains(double x) const {
  if (std::isnan(x)) return false;
  const bool above = lo_open ? x > lo : x >= lo;
  const bool below = hi_open ? x < hi : x <= hi;
  return above && below;
}

std::string to_string(Family f) {
  switch (f) {
    case Family::Constant: return "constant";
    case Family::Affine: return "affine";
    case Family::SqrtAffine: return "sqrt_affine";
    case Family::Mobius: return "mobius";
  }
  return "unknown";
}

Family family_from_string(const std::string& name) {
  if (name == "constant") return Family::Constant;
  if (name == "affine") return Family::Affine;
  if (name == "sqrt_affine") return Family::SqrtAffine;
  if (name == "mobius") return Family::Mobius;
  throw ParseError("unknown function family '" + name + "'");
}

namespace {

std::string describe(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

ScalarFunction::ScalarFunction() : rep_(ClosedForm{}), base_domain_(Interval::real_line()) {}

ScalarFunction ScalarFunction::closed(Family family, std::array<double, 4> c, Interval domain) {
  ScalarFunction f;
  f.rep_ = ClosedForm{family, c};
  f.base_domain_ = domain;
  return f;
}

ScalarFunction ScalarFunction::constant(double c, Interval domain) {
  return closed(Family::Constant, {c, 0, 0, 0}, domain);
}

ScalarFunction ScalarFunction::affine(double c0, double c1, Interval domain) {
  return closed(Family::Affine, {c0, c1, 0, 0}, domain);
}

ScalarFunction ScalarFunction::sqrt_affine(double c0, double c1, double c2, double c3, Interval domain) {
  return closed(Family::SqrtAffine, {c0, c1, c2, c3}, domain);
}

ScalarFunction ScalarFunction::mobius(double c0, double c1, double c2, double c3, Interval domain) {
  return closed(Family::Mobius, {c0, c1, c2, c3}, domain);
}

ScalarFunction ScalarFunction::hermite(std::vector<double> x, std::vector<double> y,
                                       std::vector<double> dy) {
  if (x.size() < 2 || y.size() != x.size() || dy.size() != x.size())
    throw RejectedInput("Hermite table needs >= 2 breakpoints and three arrays of equal length");
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1]))
      throw RejectedInput("Hermite breakpoints must be strictly increasing (index " +
                          std::to_string(i) + ")");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i]) || !std::isfinite(dy[i]))
      throw RejectedInput("Hermite table contains a non-finite entry at index " + std::to_string(i));
  }
  ScalarFunction f;
  const double a = x.front();
  const double b = x.back();
  f.rep_ = SampledHermite{std::move(x), std::move(y), std::move(dy)};
  f.base_domain_ = Interval::closed(a, b);
  return f;
}

Interval ScalarFunction::domain() const {
  // Preimage of the base domain under z = in_scale * x.
  Interval d;
  if (in_scale_ > 0) {
    d = {base_domain_.lo / in_scale_, base_domain_.hi / in_scale_, base_domain_.lo_open,
         base_domain_.hi_open};
  } else {
    d = {base_domain_.hi / in_scale_, base_domain_.lo / in_scale_, base_domain_.hi_open,
         base_domain_.lo_open};
  }
  if (d.lo == -kInf) d.lo_open = true;
  if (d.hi == kInf) d.hi_open = true;
  return d;
}

ScalarFunction ScalarFunction::scaled(double in, double out) const {
  if (in == 0.0 || !std::isfinite(in) || !std::isfinite(out))
    throw RejectedInput("scaling factors must be finite and the input scale nonzero");
  ScalarFunction f = *this;
  f.in_scale_ = in_scale_ * in;
  f.out_scale_ = out_scale_ * out;
  return f;
}

double ScalarFunction::checked_arg(double x) const {
  const double z = in_scale_ * x;
  if (!base_domain_.contains(z))
    throw DomainError("evaluation at x = " + describe(x) + " outside the function domain");
  return z;
}

double ScalarFunction::operator()(double x) const { return out_scale_ * base_value(checked_arg(x)); }

double ScalarFunction::derivative(double x) const {
  return out_scale_ * in_scale_ * base_derivative(checked_arg(x));
}

double ScalarFunction::second_derivative(double x) const {
  return out_scale_ * in_scale_ * in_scale_ * base_second(checked_arg(x));
}

namespace {

std::size_t locate(const std::vector<double>& xs, double z) {
  // Index i with xs[i] <= z <= xs[i+1].
  auto it = std::upper_bound(xs.begin(), xs.end(), z);
  std::size_t i = it == xs.begin() ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
  return std::min(i, xs.size() - 2);
}

}  // namespace

double ScalarFunction::base_value(double z) const {
  if (const auto* cf = std::get_if<ClosedForm>(&rep_)) {
    const auto& c = cf->c;
    switch (cf->family) {
      case Family::Constant: return c[0];
      case Family::Affine: return c[0] + c[1] * z;
      case Family::SqrtAffine: {
        const double arg = c[2] + c[3] * z;
        if (arg < 0) throw DomainError("negative square-root argument at z = " + describe(z));
        return c[0] + c[1] * std::sqrt(arg);
      }
      case Family::Mobius: {
        const double den = c[2] + c[3] * z;
        if (den == 0) throw DomainError("pole of Mobius function at z = " + describe(z));
        return (c[0] + c[1] * z) / den;
      }
    }
  }
  const auto& h = std::get<SampledHermite>(rep_);
  const std::size_t i = locate(h.x, z);
  const double dx = h.x[i + 1] - h.x[i];
  const double s = (z - h.x[i]) / dx;
  if (s == 0.0) return h.y[i];
  if (s == 1.0) return h.y[i + 1];
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * h.y[i] + h10 * dx * h.dy[i] + h01 * h.y[i + 1] + h11 * dx * h.dy[i + 1];
}

double ScalarFunction::base_derivative(double z) const {
  if (const auto* cf = std::get_if<ClosedForm>(&rep_)) {
    const auto& c = cf->c;
    switch (cf->family) {
      case Family::Constant: return 0.0;
      case Family::Affine: return c[1];
      case Family::SqrtAffine: {
        const double arg = c[2] + c[3] * z;
        if (arg < 0) throw DomainError("negative square-root argument at z = " + describe(z));
        if (c[1] == 0.0 || c[3] == 0.0) return 0.0;
        return 0.5 * c[1] * c[3] / std::sqrt(arg);
      }
      case Family::Mobius: {
        const double den = c[2] + c[3] * z;
        if (den == 0) throw DomainError("pole of Mobius function at z = " + describe(z));
        return (c[1] * c[2] - c[0] * c[3]) / (den * den);
      }
    }
  }
  const auto& h = std::get<SampledHermite>(rep_);
  const std::size_t i = locate(h.x, z);
  const double dx = h.x[i + 1] - h.x[i];
  const double s = (z - h.x[i]) / dx;
  if (s == 0.0) return h.dy[i];
  if (s == 1.0) return h.dy[i + 1];
  const double s2 = s * s;
  const double d00 = (6 * s2 - 6 * s) / dx;
  const double d10 = 3 * s2 - 4 * s + 1;
  const double d01 = (-6 * s2 + 6 * s) / dx;
  const double d11 = 3 * s2 - 2 * s;
  return d00 * h.y[i] + d10 * h.dy[i] + d01 * h.y[i + 1] + d11 * h.dy[i + 1];
}

double ScalarFunction::base_second(double z) const {
  if (const auto* cf = std::get_if<ClosedForm>(&rep_)) {
    const auto& c = cf->c;
    switch (cf->family) {
      case Family::Constant:
      case Family::Affine: return 0.0;
      case Family::SqrtAffine: {
        const double arg = c[2] + c[3] * z;
        if (arg < 0) throw DomainError("negative square-root argument at z = " + describe(z));
        return -0.25 * c[1] * c[3] * c[3] / (arg * std::sqrt(arg));
      }
      case Family::Mobius: {
        const double den = c[2] + c[3] * z;
        if (den == 0) throw DomainError("pole of Mobius function at z = " + describe(z));
        return -2.0 * c[3] * (c[1] * c[2] - c[0] * c[3]) / (den * den * den);
      }
    }
  }
  const auto& h = std::get<SampledHermite>(rep_);
  // Central difference of the first derivative, one-sided at the table ends.
  const double span = h.x.back() - h.x.front();
  const double step = 1e-6 * std::max(1.0, std::abs(z)) ;
  const double e = std::min(step, 0.25 * span);
  const double a = std::max(h.x.front(), z - e);
  const double b = std::min(h.x.back(), z + e);
  return (base_derivative(b) - base_derivative(a)) / (b - a);
}

}  // namespace wlab
