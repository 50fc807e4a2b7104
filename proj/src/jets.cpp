#include "wlab/jets.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "wlab/error.hpp"

namespace wlab {

MeanGauss curvatures_of_jet(const Jet2& j) {
  const double w = 1 + j.p * j.p + j.q * j.q;
  const double num = (1 + j.q * j.q) * j.r - 2 * j.p * j.q * j.s + (1 + j.p * j.p) * j.t;
  return {num / (2 * w * std::sqrt(w)), (j.r * j.t - j.s * j.s) / (w * w)};
}

double umbilicity(const MeanGauss& c) {
  const double d = c.H * c.H - c.K;
  return (d < 0 && d > -1e-14) ? 0.0 : d;
}

std::array<double, 2> principal_curvatures(const Jet2& j) {
  const auto c = curvatures_of_jet(j);
  const double root = std::sqrt(std::max(0.0, umbilicity(c)));
  return {c.H + root, c.H - root};
}

namespace {

double g_at(const Relation& rel, double t, double* gp) {
  if (t < 0) throw DomainError("H^2 - K = " + std::to_string(t) + " is negative");
  const double v = rel.g(t);
  if (gp) *gp = rel.g_prime(t);
  return v;
}

}  // namespace

double weingarten_residual(const Relation& rel, const Jet2& j) {
  const auto c = curvatures_of_jet(j);
  return c.H - g_at(rel, umbilicity(c), nullptr);
}

std::array<double, 5> residual_gradient(const Relation& rel, const Jet2& j) {
  const double p = j.p, q = j.q, r = j.r, s = j.s, t = j.t;
  const double w = 1 + p * p + q * q;
  const double w15 = w * std::sqrt(w);
  const double w25 = w15 * w;
  const double nh = (1 + q * q) * r - 2 * p * q * s + (1 + p * p) * t;
  const double det = r * t - s * s;
  const double H = nh / (2 * w15);
  const double K = det / (w * w);

  const std::array<double, 5> dH = {
      (p * t - q * s) / w15 - 1.5 * p * nh / w25,
      (q * r - p * s) / w15 - 1.5 * q * nh / w25,
      (1 + q * q) / (2 * w15),
      -p * q / w15,
      (1 + p * p) / (2 * w15),
  };
  const double w3 = w * w * w;
  const std::array<double, 5> dK = {
      -4 * p * det / w3, -4 * q * det / w3, t / (w * w), -2 * s / (w * w), r / (w * w),
  };
  double gp = 0;
  g_at(rel, umbilicity({H, K}), &gp);
  std::array<double, 5> out{};
  for (int i = 0; i < 5; ++i) out[i] = dH[i] - gp * (2 * H * dH[i] - dK[i]);
  return out;
}

std::array<double, 5> residual_gradient_fd(const Relation& rel, const Jet2& j) {
  std::array<double, 5> x = {j.p, j.q, j.r, j.s, j.t};
  std::array<double, 5> out{};
  auto eval = [&](const std::array<double, 5>& v) {
    return weingarten_residual(rel, Jet2{v[0], v[1], v[2], v[3], v[4]});
  };
  for (int i = 0; i < 5; ++i) {
    const double h = 1e-6 * (1 + std::abs(x[i]));
    auto plus = x, minus = x;
    plus[i] += h;
    minus[i] -= h;
    out[i] = (eval(plus) - eval(minus)) / (2 * h);
  }
  return out;
}

double q4(double x, double y) {
  const double a = y * y - 2 * y - 2;
  return x * x * x * x + x * x * x * (8 * y - 4) + 2 * x * x * y * (14 + 9 * y) + a * a +
         4 * x * (2 + 10 * y + 7 * y * y + 2 * y * y * y);
}

double q4_rewritten(double x, double y) {
  const double u = x + y;
  const double a = u * u - 2 * u - 2;
  return a * a + 4 * x * y * (10 + x * x + 10 * y + y * y + x * (10 + 3 * y));
}

std::array<double, 3> h2k_eigenvalues_displayed(double p, double q) {
  const double x = p * p, y = q * q;
  const double base = 6 + x * x + 6 * y + y * y + x * (6 + 4 * y);
  const double root = std::sqrt(std::max(0.0, q4(x, y)));
  const double den = 8 * (1 + x + y);
  return {(base + root) / den, (base - root) / den, 0.0};
}

std::array<double, 3> h2k_eigenvalues(double p, double q) {
  const double w = 1 + p * p + q * q;
  auto e = h2k_eigenvalues_displayed(p, q);
  return {e[0] / (w * w), e[1] / (w * w), 0.0};
}

bool ThetaBox::contains(const Jet2& j) const {
  return j.p * j.p + j.q * j.q <= slope_bound &&
         std::abs(j.p) + std::abs(j.q) + std::abs(j.r) + std::abs(j.s) + std::abs(j.t) <= l1_bound;
}

LambdaEstimate uniform_ellipticity_lambda(const Relation& rel, const ThetaBox& box,
                                          std::size_t sample_count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double slope_r = std::sqrt(box.slope_bound);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  LambdaEstimate est;
  est.lambda = kInf;
  auto visit = [&](const Jet2& j) {
    const auto g = residual_gradient(rel, j);
    const double a = g[2], b = 0.5 * g[3], c = g[4];
    const double m = 0.5 * (a + c) - std::hypot(0.5 * (a - c), b);
    if (m < est.lambda) {
      est.lambda = m;
      est.worst = j;
    }
    ++est.samples;
  };
  visit(Jet2{});
  while (est.samples < sample_count) {
    Jet2 j;
    do {
      j.p = slope_r * unit(rng);
      j.q = slope_r * unit(rng);
    } while (j.p * j.p + j.q * j.q > box.slope_bound);
    const double rest = box.l1_bound - std::abs(j.p) - std::abs(j.q);
    if (rest <= 0) continue;
    j.r = rest * unit(rng);
    j.s = rest * unit(rng);
    j.t = rest * unit(rng);
    if (!box.contains(j)) continue;
    visit(j);
  }
  est.certified = est.lambda > 0;
  return est;
}

DerivativeBound derivative_bound_check(const Relation& rel, const CertificationGrid& grid) {
  DerivativeBound out;
  for (double t : grid.points()) {
    double v;
    try {
      v = std::sqrt(t) * std::abs(rel.g_prime(t));
      if (t == 0.0) v = 0.0;
    } catch (const DomainError&) {
      continue;
    }
    if (!(v <= out.sup)) {
      out.sup = v;
      out.worst_t = t;
    }
  }
  out.ok = out.sup < 0.5;
  return out;
}

}  // namespace wlab
