#include <cmath>

#include "doctest.h"
#include "wlab/error.hpp"
#include "wlab/linop.hpp"
#include "wlab/solver.hpp"

using namespace wlab;

namespace {

// Canonical patches, each with a non-CMC relation it satisfies:
// plane 2H + K = 0, unit sphere 2H + K = 3, unit cylinder 2H + K = 1.
struct Canon {
  const char* name;
  Field2 u;
  double alpha, beta, delta;
};

const Canon kPlane{"plane", [](double, double) { return 0.0; }, 1, 1, 0};
const Canon kSphere{"sphere", [](double x, double y) { return 1 - std::sqrt(1 - x * x - y * y); }, 1, 1, 3};
const Canon kCylinder{"cylinder", [](double, double y) { return 1 - std::sqrt(1 - y * y); }, 1, 1, 1};

GraphPatch patch_of(const Canon& c, double h) {
  auto P = GraphPatch::rectangle(-0.4, -0.4, 0.4, 0.4, h, c.u);
  P.set_interior(c.u);
  return P;
}

// C^3 bump supported in the disk of radius 0.25.
double bump(double x, double y) {
  const double s = (x * x + y * y) / 0.0625;
  return s < 1 ? std::pow(1 - s, 4) : 0.0;
}

double sup_abs(const std::vector<double>& v, const std::vector<char>& valid) {
  double m = 0;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (valid[k]) m = std::max(m, std::abs(v[k]));
  return m;
}

}  // namespace

TEST_CASE("linearized coefficients") {
  const auto c = linearized_coeffs(Relation::cmc(0), 0, 0);
  CHECK(c.principal_laplacian_weight == 0.5);
  CHECK(c.t1_weight == 0);
  CHECK(c.zeroth_order_q == 0);
  const auto lw = linearized_coeffs(Relation::linear(1, 1, 1), 0.5, 0);
  const double g = 0.5, gp = Relation::linear(1, 1, 1).g_prime(0.25);
  CHECK(lw.principal_laplacian_weight == doctest::Approx((1 - 2 * g * gp) / 2));
  CHECK(lw.zeroth_order_q == doctest::Approx(2 * g * g * (1 - 2 * g * gp)));
}

TEST_CASE("L_g on a plane with a minimal relation is half the Laplacian") {
  const auto P = patch_of(kPlane, 0.02);
  const auto phi = sample_field(P, bump);
  const auto lg = apply_lg_on_grid(Relation::cmc(0), P, phi);
  const auto lap = laplace_beltrami(P, phi);
  for (int k : P.interior())
    if (!std::isnan(lg[k])) CHECK(lg[k] == doctest::Approx(0.5 * lap[k]).epsilon(1e-14).scale(1e-14));
  const auto z = apply_lg_on_grid(Relation::cmc(0), P, std::vector<double>(P.size(), 0.0));
  for (int k : P.interior()) CHECK(z[k] == 0);
}

TEST_CASE("variation formulas: error falls with h on plane, sphere and cylinder") {
  for (const Canon* c : {&kPlane, &kSphere, &kCylinder}) {
    CAPTURE(c->name);
    std::vector<double> errs;
    for (double h : {0.04, 0.02, 0.01}) {
      const auto P = patch_of(*c, h);
      const auto phi = sample_field(P, bump);
      const auto v = variation_derivatives(P, phi, 1e-5);
      const double scale = std::max(sup_abs(v.dH_formula, v.valid), sup_abs(v.dK_formula, v.valid));
      errs.push_back(std::max(v.max_err_H, v.max_err_K) / std::max(scale, 1.0));
      if (c == &kPlane)
        for (std::size_t k = 0; k < P.size(); ++k)
          if (v.valid[k]) CHECK(std::abs(v.dK_fd[k]) < 1e-8);
    }
    CAPTURE(errs[0]);
    CAPTURE(errs[1]);
    CAPTURE(errs[2]);
    CHECK(errs[1] <= 0.5 * errs[0]);
    CHECK(errs[2] <= 0.5 * errs[1]);
  }
}

TEST_CASE("first variation of the relation residual is L_g") {
  for (const Canon* c : {&kPlane, &kSphere, &kCylinder}) {
    CAPTURE(c->name);
    const auto rel = Relation::linear(c->alpha, c->beta, c->delta);
    CHECK(std::abs(weingarten_residual(rel, patch_of(*c, 0.01).jet(patch_of(*c, 0.01).nearest_node(0, 0)))) < 1e-4);
    std::vector<double> errs;
    for (double h : {0.04, 0.02, 0.01}) {
      const auto P = patch_of(*c, h);
      const auto phi = sample_field(P, bump);
      const auto v = variation_derivatives(P, phi, 1e-5, &rel);
      const auto lg = apply_lg_on_grid(rel, P, phi);
      double err = 0, scale = 0;
      for (std::size_t k = 0; k < P.size(); ++k) {
        if (!v.valid[k]) continue;
        err = std::max(err, std::abs(v.dW_fd[k] - lg[k]));
        scale = std::max(scale, std::abs(lg[k]));
      }
      errs.push_back(err / std::max(scale, 1.0));
    }
    CHECK(errs[1] <= 0.5 * errs[0]);
    CHECK(errs[2] <= 0.5 * errs[1]);
  }
}

TEST_CASE("variations that leave graph form are rejected") {
  const auto P = patch_of(kSphere, 0.02);
  const auto phi = sample_field(P, bump);
  CHECK_THROWS_AS(variation_derivatives(P, phi, 50), DomainError);
  auto bad = phi;
  bad[0] = 1;
  CHECK_THROWS_AS(variation_derivatives(P, bad, 1e-5), RejectedInput);
}

TEST_CASE("cylinder operator constants") {
  for (double H0 : {0.25, 0.5, 2.0}) {
    const auto op = cylinder_operator(Relation::cmc(H0), 1 / (2 * H0));
    CHECK(op.A == 0.5);
    CHECK(op.B == 0.5);
    CHECK(op.C == doctest::Approx(2 * H0 * H0).epsilon(1e-15));
  }
  // 2H + K = 1: the unit cylinder has H0 = 1/2.
  const auto rel = Relation::linear(1, 1, 1);
  const auto op = cylinder_operator(rel, 1);
  const double t = 0.25, g = rel.g(t);
  const double gp = (rel.g(t + 1e-6) - rel.g(t - 1e-6)) / 2e-6;
  const double A = (1 - 2 * g * gp) / 2;
  CHECK(op.A == doctest::Approx(A).epsilon(1e-8));
  CHECK(op.B == doctest::Approx(A + gp).epsilon(1e-8));
  CHECK(op.C == doctest::Approx(A).epsilon(1e-8));
  CHECK(op.C == 4 * op.A * op.H0 * op.H0);
  CHECK(op.A > 0);
  CHECK(op.B > 0);
  CHECK(op.C > 0);
  CHECK_THROWS_AS(cylinder_operator(Relation::linear(0, 1, 1), 1), RejectedInput);
  CHECK_THROWS_AS(cylinder_operator(Relation::cmc(1), 1), RejectedInput);
}

TEST_CASE("cylinder operator matches the residual variation of the cylinder") {
  // Radial variation r -> r + eps of the unit cylinder: L_g[1] = C.
  const auto rel = Relation::linear(1, 1, 1);
  const auto op = cylinder_operator(rel, 1);
  auto W = [&](double r) {
    const double H = 1 / (2 * r);
    return H - rel.g(H * H);
  };
  // The unit normal points to the axis, so phi = 1 shrinks the radius.
  const double eps = 1e-5;
  CHECK((W(1 - eps) - W(1 + eps)) / (2 * eps) == doctest::Approx(op.C).epsilon(1e-8));
}

TEST_CASE("perturbation threshold") {
  const auto op = cylinder_operator(Relation::cmc(0.5), 1);
  const double Lc = critical_square_half_side(op);
  CHECK(std::abs(Lc - M_PI / 2 * std::sqrt(2.0)) < 1e-10);
  CHECK(std::abs(perturbation_threshold(op, Lc, Lc)) < 1e-12);
  CHECK(perturbation_threshold(op, 1.01 * Lc, 1.01 * Lc) > 0);
  CHECK(perturbation_threshold(op, 0.99 * Lc, 0.99 * Lc) < 0);
  double prev = -INFINITY;
  for (double L = 0.1; L < 50; L *= 1.3) {
    const double a = perturbation_threshold(op, L, 2.0), b = perturbation_threshold(op, 2.0, L);
    CHECK(a > prev);
    CHECK(b == doctest::Approx(a));  // A = B for CMC
    prev = a;
  }
  CHECK(perturbation_threshold(op, 1e6, 1e6) == doctest::Approx(op.C));
  CHECK(perturbation_threshold(op, 1e-3, 1e-3) < -1e5);
  CHECK_THROWS_AS(perturbation_threshold(op, 0, 1), RejectedInput);
}

TEST_CASE("L_g on a cylinder patch agrees with the constant-coefficient form") {
  const auto rel = Relation::linear(1, 1, 1);
  const auto op = cylinder_operator(rel, 1);
  const double L = 0.5, r = 0.6;
  const double thr = perturbation_threshold(op, L, r);
  std::vector<double> errs;
  for (double h : {0.02, 0.01}) {
    auto u = [](double, double y) { return 1 - std::sqrt(1 - y * y); };
    const double ym = std::sin(L + 4 * h), xm = r + 4 * h;
    auto P = GraphPatch::rectangle(-xm, -ym, xm, ym, h, u);
    P.set_interior(u);
    auto phi_fn = [&](double x, double y) {
      const double s = std::asin(y);
      if (std::abs(s) >= L || std::abs(x) >= r) return 0.0;
      return std::cos(M_PI * s / (2 * L)) * std::cos(M_PI * x / (2 * r));
    };
    const auto phi = sample_field(P, phi_fn);
    const auto lg = apply_lg_on_grid(rel, P, phi);
    double err = 0;
    for (int k : P.interior()) {
      if (std::isnan(lg[k])) continue;
      if (std::abs(P.y(k)) < std::sin(L) - 2.5 * h && std::abs(P.x(k)) < r - 2.5 * h)
        err = std::max(err, std::abs(lg[k] - thr * phi[k]));
    }
    errs.push_back(err);
  }
  CHECK(errs[1] < 0.5 * errs[0]);
  CHECK(errs[1] < 0.02);
}

TEST_CASE("sign of the residual of a perturbed cylinder for small tau") {
  // Below the critical size the threshold is negative and so is W(tau) at the
  // centre of the bump; the slope W(tau)/tau approaches threshold * phi(0).
  const auto rel = Relation::linear(1, 1, 1);
  const auto op = cylinder_operator(rel, 1);
  const double L = 0.8, r = 0.9, h = 0.01;
  const double thr = perturbation_threshold(op, L, r);
  REQUIRE(thr < 0);
  auto u = [](double, double y) { return 1 - std::sqrt(1 - y * y); };
  auto phi = [&](double x, double y) {
    const double s = std::asin(y);
    if (std::abs(s) >= L || std::abs(x) >= r) return 0.0;
    return std::cos(M_PI * s / (2 * L)) * std::cos(M_PI * x / (2 * r));
  };
  for (double tau : {1e-2, 1e-3, 1e-4}) {
    // The normal (-p, -q, 1)/sqrt(W) of this graph points to the axis; the
    // offset is taken along it to first order in tau.
    auto ut = [&](double x, double y) {
      const double q = y / std::sqrt(1 - y * y);
      return u(x, y) + tau * phi(x, y) * std::sqrt(1 + q * q);
    };
    auto P = GraphPatch::rectangle(-1, -0.8, 1, 0.8, h, ut);
    P.set_interior(ut);
    const double w = weingarten_residual(rel, P.jet(P.nearest_node(0, 0)));
    CAPTURE(tau);
    CHECK(w < 0);
    CHECK(w / tau == doctest::Approx(thr).epsilon(0.05));
  }
}
