#include <cmath>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "oracles.hpp"
#include "wlab/error.hpp"
#include "wlab/solver.hpp"

using namespace wlab;

namespace {

Field2 zero() {
  return [](double, double) { return 0.0; };
}

Field2 cap(double H0, double R) {
  return [=](double x, double y) { return oracle::cap(H0, R, std::min(R, std::hypot(x, y))); };
}

double sup_interior(const GraphPatch& P, const std::vector<double>& v) {
  double m = 0;
  for (int k : P.interior()) m = std::max(m, std::abs(v[k]));
  return m;
}

}  // namespace

TEST_CASE("patch construction and stencils") {
  const auto P = GraphPatch::disk(0, 0, 1, 0.1, zero());
  CHECK(P.shape() == GraphPatch::Shape::Disk);
  for (int k : P.interior()) {
    CHECK(P.role(k) == GraphPatch::Role::Interior);
    for (const auto& a : P.arms(k)) CHECK((a.node >= 0 ? P.in_mask(a.node) : a.length > 0));
  }
  // Stencils are exact on quadratics, including cut arms.
  auto quad = [](double x, double y) { return 0.3 + x - 2 * y + 0.5 * x * x - 0.7 * x * y + 1.5 * y * y; };
  auto Q = GraphPatch::disk(0.1, -0.2, 0.93, 0.07, quad);
  Q.set_interior(quad);
  for (int k : Q.interior()) {
    const auto j = Q.jet(k);
    const double x = Q.x(k), y = Q.y(k);
    CHECK(j.p == doctest::Approx(1 + x - 0.7 * y).epsilon(1e-9));
    CHECK(j.q == doctest::Approx(-2 - 0.7 * x + 3 * y).epsilon(1e-9));
    CHECK(j.r == doctest::Approx(1).epsilon(1e-7));
    CHECK(j.s == doctest::Approx(-0.7).epsilon(1e-7));
    CHECK(j.t == doctest::Approx(3).epsilon(1e-7));
  }
}

TEST_CASE("residual field examples") {
  auto aff = [](double x, double y) { return 0.2 + 0.5 * x - 0.3 * y; };
  auto P = GraphPatch::rectangle(-1, -1, 1, 1, 0.1, aff);
  P.set_interior(aff);
  CHECK(sup_interior(P, residual_field(Relation::cmc(0), P)) < 1e-13);
  auto F = GraphPatch::rectangle(-1, -1, 1, 1, 0.1, zero());
  for (int k : F.interior()) CHECK(residual_field(Relation::cmc(1), F)[k] == -1);

  // Full stencils are second order; arms cut by the circle are first order.
  double prev_full = 0, prev_cut = 0;
  for (double h : {0.1, 0.05, 0.025}) {
    auto C = GraphPatch::disk(0, 0, 1, h, cap(0.5, 1));
    C.set_interior(cap(0.5, 1));
    const auto res = residual_field(Relation::cmc(0.5), C);
    double full = 0, cut = 0;
    for (int k : C.interior()) {
      bool whole = true;
      for (const auto& a : C.arms(k)) whole = whole && a.node >= 0 && a.length == C.h() * (&a - &C.arms(k)[0] < 4 ? 1 : std::sqrt(2.0));
      (whole ? full : cut) = std::max(whole ? full : cut, std::abs(res[k]));
    }
    if (prev_full > 0) {
      CHECK(prev_full / full > 3.5);
      CHECK(prev_cut / cut > 1.7);
    }
    prev_full = full;
    prev_cut = cut;
  }
}

TEST_CASE("newton: minimal relation with affine data") {
  auto aff = [](double x, double y) { return 1 - 0.4 * x + 0.25 * y; };
  const auto P = GraphPatch::disk(0, 0, 1, 1.0 / 16, aff);
  const auto out = newton_solve(Relation::cmc(0), P);
  CHECK(out.status == SolveStatus::Converged);
  CHECK(out.residual_sup < 1e-10);
  for (int k : out.final_patch.interior())
    CHECK(out.final_patch.value(k) == doctest::Approx(aff(P.x(k), P.y(k))).epsilon(1e-9));
}

TEST_CASE("newton: CMC cap, boundary untouched and maximum principle") {
  const double h = 1.0 / 32;
  const auto P = GraphPatch::disk(0, 0, 1, h, zero());
  const auto out = newton_solve(Relation::cmc(0.5), P);
  REQUIRE(out.status == SolveStatus::Converged);
  CHECK(out.residual_sup <= 1e-10);
  const double uc = std::sqrt(3.0) - 2;
  for (std::size_t k = 0; k < P.size(); ++k) {
    if (!P.in_mask(k)) continue;
    if (P.role(k) == GraphPatch::Role::Boundary) CHECK(out.final_patch.value(k) == P.value(k));
    CHECK(out.final_patch.value(k) <= 1e-12);
    CHECK(out.final_patch.value(k) >= uc - 10 * h * h);
  }
  const int c = out.final_patch.nearest_node(0, 0);
  CHECK(std::abs(out.final_patch.value(c) - uc) < 0.02 * std::abs(uc));
}

TEST_CASE("newton is deterministic") {
  const auto P = GraphPatch::disk(0, 0, 1, 1.0 / 24, zero());
  const auto a = newton_solve(Relation::linear(1, 1, 1), P);
  const auto b = newton_solve(Relation::linear(1, 1, 1), P);
  CHECK(a.status == b.status);
  CHECK(a.history == b.history);
  CHECK(a.final_patch.values() == b.final_patch.values());
}

TEST_CASE("newton: cap just inside the radius bound") {
  const auto out = newton_solve(Relation::cmc(0.5), GraphPatch::disk(0, 0, 1.9, 1.0 / 32, zero()));
  CHECK(out.status == SolveStatus::Converged);
}

// Very close to R = 1/H0 the rim slope is about 10 and the discrete problem
// loses its solution at these spacings; recorded, not asserted away.
TEST_CASE("newton: cap at R = 1.99" * doctest::may_fail()) {
  const auto out = newton_solve(Relation::cmc(0.5), GraphPatch::disk(0, 0, 1.99, 1.0 / 32, zero()));
  INFO(out.message);
  CHECK(out.status == SolveStatus::Converged);
}

TEST_CASE("newton reports failure beyond the cap radius") {
  const auto P = GraphPatch::disk(0, 0, 2.2, 1.0 / 16, zero());
  const auto out = newton_solve(Relation::cmc(0.5), P);
  CHECK(out.status != SolveStatus::Converged);
  CHECK_FALSE(out.message.empty());
}

TEST_CASE("second fundamental form norm") {
  auto F = GraphPatch::rectangle(-1, -1, 1, 1, 0.1, zero());
  for (int k : F.interior()) CHECK(second_fundamental_norm_field(F)[k] == 0);
  auto sph = [](double x, double y) { return -std::sqrt(4 - x * x - y * y); };
  auto S = GraphPatch::disk(0, 0, 1, 0.05, sph);
  S.set_interior(sph);
  const auto sig = second_fundamental_norm_field(S);
  for (int k : S.interior()) CHECK(sig[k] == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-2));
  auto cyl = [](double, double y) { return 1 - std::sqrt(1 - y * y); };
  auto C = GraphPatch::rectangle(-0.5, -0.5, 0.5, 0.5, 0.025, cyl);
  C.set_interior(cyl);
  for (int k : C.interior()) CHECK(second_fundamental_norm_field(C)[k] == doctest::Approx(1).epsilon(2e-3));
}

TEST_CASE("rescaling: |sigma| scales by 1/lambda, residuals by 1/lambda") {
  auto sph = [](double x, double y) { return -std::sqrt(1 - x * x - y * y); };
  auto S = GraphPatch::disk(0, 0, 0.6, 0.05, sph);
  S.set_interior(sph);
  const auto S2 = rescale_patch(S, 2);
  const auto a = second_fundamental_norm_field(S), b = second_fundamental_norm_field(S2);
  const auto rel = Relation::linear(1, 1, 1);
  const auto ra = residual_field(rel, S), rb = residual_field(rescale_relation(rel, 2), S2);
  for (int k : S.interior()) {
    CHECK(b[k] == doctest::Approx(a[k] / 2).epsilon(1e-12));
    CHECK(rb[k] == doctest::Approx(ra[k] / 2).epsilon(1e-10).scale(1e-14));
    CHECK(S2.x(k) == doctest::Approx(2 * S.x(k)));
  }
}

TEST_CASE("blow-up selection against an exhaustive scan") {
  auto sph = [](double x, double y) { return -std::sqrt(4 - x * x - y * y); };
  auto S = GraphPatch::disk(0, 0, 1, 1.0 / 20, sph);
  S.set_interior(sph);

  // Constant |sigma|: the centre wins.
  const auto sel = blowup_select(S, 0, 0, 0.8);
  CHECK(std::hypot(sel.x, sel.y) < 0.06);
  CHECK(sel.lambda * sel.r == doctest::Approx(sel.h_max).epsilon(1e-14));

  // Bumped field.
  auto sig = second_fundamental_norm_field(S);
  for (std::size_t k = 0; k < S.size(); ++k)
    if (std::isfinite(sig[k])) sig[k] = 1 + 4 * std::exp(-(std::pow(S.x(k) - 0.3, 2) + std::pow(S.y(k) + 0.1, 2)) / 0.01);
  const auto b = blowup_select(S, sig, 0, 0, 0.8);
  const auto o = oracle::brute_force_h(S, sig, 0, 0, 0.8);
  CHECK(b.node == o.node);
  CHECK(b.h_max == doctest::Approx(o.h_max).epsilon(1e-12));
  CHECK(b.r == doctest::Approx(o.dist).epsilon(1e-12));
  const auto hf = h_function(S, sig, 0, 0, 0.8);
  for (double v : hf)
    if (!std::isnan(v)) CHECK(v <= b.h_max);

  // Plane: h vanishes and the centre is reported.
  auto F = GraphPatch::disk(0, 0, 1, 0.1, zero());
  const auto pl = blowup_select(F, 0, 0, 0.5);
  CHECK(pl.h_max == 0);
  CHECK(pl.node == F.nearest_node(0, 0));

  CHECK_THROWS_AS(blowup_select(S, 0, 0, -1), RejectedInput);
}

TEST_CASE("h is invariant under joint rescaling") {
  auto sph = [](double x, double y) { return -std::sqrt(4 - x * x - y * y); };
  auto S = GraphPatch::disk(0, 0, 1, 1.0 / 20, sph);
  S.set_interior(sph);
  for (double lambda : {0.5, 3.0}) {
    const auto S2 = rescale_patch(S, lambda);
    const auto a = h_function(S, second_fundamental_norm_field(S), 0, 0, 0.7);
    const auto b = h_function(S2, second_fundamental_norm_field(S2), 0, 0, 0.7 * lambda);
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(std::isnan(a[k]) == std::isnan(b[k]));
      if (!std::isnan(a[k])) CHECK(std::abs(a[k] - b[k]) < 1e-10);
    }
  }
}

TEST_CASE("patch I/O roundtrip") {
  auto P = GraphPatch::disk(0.2, -0.1, 0.9, 0.07, cap(0.5, 0.9));
  P.set_interior([](double x, double y) { return 0.1 * x * y; });
  const auto dir = std::filesystem::temp_directory_path() / "wlab_patch_io";
  std::filesystem::create_directories(dir);
  P.write((dir / "p.csv").string(), (dir / "p.json").string());
  const auto Q = GraphPatch::read((dir / "p.csv").string(), (dir / "p.json").string());
  REQUIRE(Q.size() == P.size());
  CHECK(Q.interior() == P.interior());
  CHECK(Q.values() == P.values());
  for (int k : P.interior()) {
    for (int a = 0; a < 8; ++a) {
      CHECK(Q.arms(k)[a].node == P.arms(k)[a].node);
      CHECK(Q.arms(k)[a].length == P.arms(k)[a].length);
      CHECK(Q.arms(k)[a].value == P.arms(k)[a].value);
    }
  }
  CHECK_THROWS(GraphPatch::read((dir / "missing.csv").string(), (dir / "p.json").string()));
}
