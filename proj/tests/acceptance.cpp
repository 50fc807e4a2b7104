// Acceptance harness: one PASS/FAIL line per criterion, with wall time
// against its budget. Exit status is the number of failed criteria.

#include <sys/wait.h>

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "wlab/diagram.hpp"
#include "wlab/error.hpp"
#include "wlab/geometry.hpp"
#include "wlab/jets.hpp"
#include "wlab/linop.hpp"
#include "wlab/mesh.hpp"
#include "wlab/profile.hpp"
#include "wlab/relation.hpp"
#include "wlab/solver.hpp"
#include "wlab/surface_grid.hpp"

using namespace wlab;

namespace {

// Collects failed sub-checks of one criterion.
struct Probe {
  std::ostringstream notes;
  int failed = 0;
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      ++failed;
      notes << (failed > 1 ? "; " : "") << what;
    }
  }
};

int run(int id, const char* title, double budget_s, const std::function<std::string(Probe&)>& body) {
  Probe pr;
  std::string info;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    info = body(pr);
  } catch (const std::exception& e) {
    pr.expect(false, std::string("exception: ") + e.what());
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  pr.expect(dt < budget_s, "over budget");
  std::printf("[%s] %2d %-34s %8.3f s / %5.0f s  %s%s%s\n", pr.failed ? "FAIL" : "PASS", id, title, dt, budget_s,
              info.c_str(), pr.failed ? "  failed: " : "", pr.notes.str().c_str());
  std::fflush(stdout);
  return pr.failed ? 1 : 0;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Jet2 random_jet(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> a(-3, 3), b(-5, 5);
  return {a(rng), a(rng), b(rng), b(rng), b(rng)};
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

// ---------------------------------------------------------------------------

std::string curvature_formulas(Probe& pr) {
  const struct {
    Jet2 j;
    double H, K;
  } listed[] = {{{0, 0, 0, 0, 0}, 0, 0}, {{0, 0, 1, 0, 1}, 1, 1}, {{1, 0, 1, 0, 1}, 3 / (4 * std::sqrt(2.0)), 0.25}};
  for (const auto& c : listed) {
    const auto hk = curvatures_of_jet(c.j);
    pr.expect(std::abs(hk.H - c.H) < 1e-12 && std::abs(hk.K - c.K) < 1e-12, "listed jet");
  }
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> ang(0, 2 * M_PI);
  double worst = 0;
  for (int n = 0; n < 1000; ++n) {
    const auto j = random_jet(rng);
    const double phi = ang(rng), c = std::cos(phi), s = std::sin(phi);
    Eigen::Matrix2d R, M;
    R << c, -s, s, c;
    M << j.r, j.s, j.s, j.t;
    const Eigen::Vector2d g = R * Eigen::Vector2d(j.p, j.q);
    const Eigen::Matrix2d Mr = R * M * R.transpose();
    const auto a = curvatures_of_jet(j);
    const auto b = curvatures_of_jet({g[0], g[1], Mr(0, 0), Mr(0, 1), Mr(1, 1)});
    worst = std::max({worst, std::abs(a.H - b.H), std::abs(a.K - b.K)});
  }
  pr.expect(worst < 1e-12, "rotation covariance");
  return fmt("rotation defect %.1e on 1000 jets", worst);
}

std::string eigenvalues(Probe& pr) {
  std::mt19937_64 rng(102);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  double worst = 0, zero = 0, shown = 0;
  for (int n = 0; n < 10000;) {
    const double p = u(rng), q = u(rng);
    if (p * p + q * q > 2.25) continue;
    ++n;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(oracle::h2k_matrix(p, q));
    const auto ev = es.eigenvalues();
    const auto l = h2k_eigenvalues(p, q);
    worst = std::max({worst, std::abs(l[0] - ev[2]), std::abs(l[1] - ev[1])});
    const double W2 = std::pow(1 + p * p + q * q, 2);
    const auto d = h2k_eigenvalues_displayed(p, q);
    shown = std::max({shown, std::abs(d[0] - W2 * ev[2]) / W2, std::abs(d[1] - W2 * ev[1]) / W2});
    zero = std::max({zero, std::abs(l[2]), std::abs(ev[0])});
  }
  const auto l0 = h2k_eigenvalues(0, 0);
  pr.expect(std::abs(l0[0] - 1) < 1e-10 && std::abs(l0[1] - 0.5) < 1e-10 && std::abs(l0[2]) < 1e-10, "origin");
  pr.expect(worst < 1e-10, "eigenvalues");
  pr.expect(zero < 1e-10, "zero eigenvalue");
  // The displayed closed form is the spectrum of W^2 (H^2 - K).
  pr.expect(shown < 1e-10, "displayed form vs W^2-scaled oracle");
  return fmt("max error %.1e, zero eigenvalue %.1e, displayed/W^2 %.1e", worst, zero, shown);
}

std::string q4_identity(Probe& pr) {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> u(0, 10), s(-1.5, 1.5);
  double worst = 0;
  for (int n = 0; n < 100000; ++n) {
    const double x = u(rng), y = u(rng);
    const double a = q4(x, y), b = q4_rewritten(x, y);
    worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), 1e-300));
  }
  double qmin = INFINITY;
  for (int n = 0; n < 100000;) {
    const double p = s(rng), q = s(rng);
    if (p * p + q * q > 2.25) continue;
    ++n;
    qmin = std::min(qmin, q4(p * p, q * q));
  }
  pr.expect(worst < 1e-9, "identity");
  pr.expect(qmin > 0, "positivity");
  return fmt("relative defect %.1e, min on Theta %.3f", worst, qmin);
}

std::string dirichlet(Probe& pr) {
  const double exact = std::sqrt(3.0) - 2;
  std::vector<double> err;
  double rel64 = 0;
  for (int n : {32, 64, 128}) {
    const auto P = GraphPatch::disk(0, 0, 1, 1.0 / n, [](double, double) { return 0.0; });
    const auto out = newton_solve(Relation::cmc(0.5), P);
    pr.expect(out.status == SolveStatus::Converged, "converged at h=1/" + std::to_string(n));
    const double uc = out.final_patch.value(out.final_patch.nearest_node(0, 0));
    err.push_back(std::abs(uc - exact));
    if (n == 64) rel64 = err.back() / std::abs(exact);
  }
  const double o1 = std::log2(err[0] / err[1]), o2 = std::log2(err[1] / err[2]);
  pr.expect(rel64 < 0.02, "center at h=1/64");
  pr.expect(o1 >= 1.8 && o2 >= 1.8, "order");
  return fmt("center rel. error %.1e at 1/64, orders %.2f %.2f", rel64, o1, o2);
}

int cli(const std::string& args) {
  const int raw = std::system((std::string(WLAB_CLI_PATH) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string radius_bound(Probe& pr) {
  const double H0 = 0.5, Rs = 1 / H0;
  // The spherical cap of mean curvature H0 over a disk of radius R is a
  // graph iff its rim slope R / sqrt(Rs^2 - R^2) is finite.
  auto radii = linspace(0.05, 3, 60);
  radii.push_back(Rs);
  for (double R : radii) {
    const bool exists = std::isfinite(oracle::cap(H0, R, 0)) && std::isfinite(R / std::sqrt(Rs * Rs - R * R));
    pr.expect(exists == (R < Rs), "cap existence at R=" + std::to_string(R));
    if (!exists) continue;
    const double rho = 0.7 * R, d = 1e-4;
    const double p = (oracle::cap(H0, R, rho + d) - oracle::cap(H0, R, rho - d)) / (2 * d);
    const double r = (oracle::cap(H0, R, rho + d) - 2 * oracle::cap(H0, R, rho) + oracle::cap(H0, R, rho - d)) / (d * d);
    const double t = p / rho;  // rotational graph: u_yy = u'(rho)/rho on the x axis
    pr.expect(std::abs(oracle::graph_hk(p, 0, r, 0, t).H - H0) < 1e-5, "cap curvature");
  }
  const auto zero = [](double, double) { return 0.0; };
  const auto in = newton_solve(Relation::cmc(H0), GraphPatch::disk(0, 0, 1.9, 1.0 / 32, zero));
  pr.expect(in.status == SolveStatus::Converged, "R=1.9 converges");

  const auto dir = std::filesystem::temp_directory_path() / "wlab_acceptance_r22";
  std::filesystem::create_directories(dir);
  const auto cfg = (dir / "solve.json").string();
  std::ofstream(cfg) << R"({"relation":{"kind":"cmc","h0":0.5},"domain":{"shape":"disk","radius":2.2},"h":0.0625})";
  const int rc = cli("solve --config " + cfg + " --out " + (dir / "out").string());
  std::filesystem::remove_all(dir);
  pr.expect(rc == 3, "R=2.2 exit code " + std::to_string(rc));
  return fmt("R=1.9 in %.0f iterations, R=2.2 exit %.0f", in.iterations, rc);
}

std::string parallel_algebra(Probe& pr) {
  std::mt19937_64 rng(106);
  std::uniform_real_distribution<double> u(-3, 3);
  double inv = 0;
  for (int n = 0; n < 10000;) {
    const double a = u(rng), x = u(rng);
    if (std::abs(1 + a * x) < 1e-2 || std::abs(1 - a * x) < 1e-2) continue;
    ++n;
    inv = std::max(inv, std::abs(f_a(f_a(x, -a), a) - x) / (1 + std::abs(x)));
  }
  pr.expect(inv < 1e-12, "F_a o F_-a");

  // CMC(1) at a = 1: the Moebius product [1 0; -1 1][-1 2; 0 1][1 0; 1 1].
  const auto c = conjugate_relation(Relation::cmc(1), 1);
  pr.expect(c.kind() == RelationKind::Cmc && std::abs(c.cmc_value() + 1) < 1e-12, "CMC(1) -> CMC(-1)");
  Eigen::Matrix2d Fa, f, Fm;
  Fa << 1, 0, -1, 1;
  f << -1, 2, 0, 1;
  Fm << 1, 0, 1, 1;
  const Eigen::Matrix2d M = Fa * f * Fm;
  for (double x : linspace(-3, 3, 25)) {
    const double m = (M(0, 0) * x + M(0, 1)) / (M(1, 0) * x + M(1, 1));
    pr.expect(std::abs(c.f(x) - m) < 1e-12, "Moebius product");
  }

  double lw = 0;
  const double co[][3] = {{1, 1, 1}, {0, 1, 1}, {2, 0.5, 1}, {1, -1, 0.5}};
  for (const auto& k : co)
    for (double a : {-0.3, 0.2, 0.45}) {
      const auto rel = Relation::linear(k[0], k[1], k[2]);
      const auto cj = conjugate_relation(rel, a);
      pr.expect(cj.kind() == RelationKind::Linear || cj.kind() == RelationKind::Cmc, "stays linear Weingarten");
      for (double x : linspace(-4, 4, 161)) {
        double want, got;
        try {
          want = f_a(rel.f(f_a(x, -a)), a);
          got = cj.f(x);
        } catch (const DomainError&) {
          continue;
        }
        lw = std::max(lw, std::abs(got - want) / (1 + std::abs(want)));
      }
    }
  pr.expect(lw < 1e-10, "linear Weingarten sampled agreement");

  const ParametricSurface cyl = [](double s, double v) { return Vec3(std::cos(s), std::sin(s), v); };
  const auto base = surface_curvatures(surface_jet(cyl, 0.3, 0.2, 1e-2));
  double off = 0;
  for (double a : {-0.4, 0.25, 0.6}) {
    const auto cc = surface_curvatures(surface_jet(offset_surface(cyl, a, 1e-3), 0.3, 0.2, 1e-2));
    const auto want = parallel_curvatures(CurvaturePair::of(base.k1, base.k2), a).pair;
    off = std::max({off, std::abs(cc.k1 - want.k1), std::abs(cc.k2 - want.k2)});
  }
  pr.expect(off < 1e-6, "cylinder offset");
  return fmt("involution %.1e, LW conjugation %.1e, offset %.1e", inv, lw, off);
}

std::string rotational(Probe& pr) {
  const auto rel = Relation::cmc(0.5);
  const auto und = rotational_profile(rel, {0.6, 0, M_PI / 2}, {1e-3, 20, 1e-6});
  // Meridian curvature from five-point differences of the tangent angle,
  // parallel curvature sin(theta) / r from the state.
  double dev = 0;
  const double ds = und.s[1] - und.s[0];
  for (std::size_t i = 2; i + 2 < und.size(); ++i) {
    const double km = (-und.theta[i + 2] + 8 * und.theta[i + 1] - 8 * und.theta[i - 1] + und.theta[i - 2]) / (12 * ds);
    dev = std::max(dev, std::abs(km + std::sin(und.theta[i]) / und.r[i] - 1));
  }
  pr.expect(dev < 1e-8, "kappa sum");

  const auto cyl = rotational_profile(rel, {1, 0, M_PI / 2}, {1e-3, 10, 1e-6});
  double drift = 0;
  for (std::size_t i = 0; i < cyl.size(); ++i)
    drift = std::max({drift, std::abs(cyl.r[i] - 1), std::abs(cyl.theta[i] - M_PI / 2)});
  pr.expect(drift < 1e-10, "cylinder stationary");

  const auto T1 = detect_period(und);
  const auto T2 = detect_period(rotational_profile(rel, {0.6, 0, M_PI / 2}, {5e-4, 20, 1e-6}));
  pr.expect(T1 && T2, "period detected");
  const double change = T1 && T2 ? std::abs(*T1 - *T2) / *T2 : INFINITY;
  pr.expect(change < 1e-3, "period stable");
  return fmt("kappa sum %.1e, cylinder drift %.1e, period change %.1e", dev, drift, change);
}

std::string quasiconformality(Probe& pr) {
  CurvatureDiagram minimal;
  for (double k : linspace(0.1, 3, 30)) minimal.add(k, -k);
  const auto m = qc_classify(minimal);
  pr.expect(m.classification == QCClass::NegativeBranch && m.gamma_star && std::abs(*m.gamma_star + 1) < 1e-14,
            "minimal gamma*");

  // Below mu ~ 5e-3 the spacing of doubles near gamma = -1 alone exceeds
  // 1e-14 in mu, so the strict bound is checked from mu = 0.01 on (and at 0).
  double rt = std::abs(gamma_mu(mu_gamma(0.0))), rt_all = rt, rt_gamma = 0;
  for (int i = 1; i <= 1000; ++i) {
    const double mu = 0.999 * i / 1000;
    const double e = std::abs(gamma_mu(mu_gamma(mu)) - mu);
    rt_all = std::max(rt_all, e);
    if (mu >= 0.01) rt = std::max(rt, e);
  }
  for (double g : linspace(-100, -1, 1000))
    rt_gamma = std::max(rt_gamma, std::abs(mu_gamma(gamma_mu(g)) - g) / std::abs(g));
  pr.expect(rt <= 1e-14, "mu -> gamma -> mu");
  pr.expect(rt_gamma <= 1e-14, "gamma -> mu -> gamma");

  double prod = 0;
  for (double g : {-1.0, -1.5, -3.0, -10.0, -1e3}) {
    const auto w = gamma_to_wedge(g);
    prod = std::max(prod, std::abs(w.first * w.second - 1));
  }
  pr.expect(prod < 1e-12, "m1 m2 = 1");

  const Relation rels[] = {Relation::g_form(ScalarFunction::sqrt_affine(-1.0 / 3, 1.0 / 3, 1, 1, Interval::half_line(0))),
                           Relation::f_form(ScalarFunction::affine(0, -2)), Relation::cmc(0)};
  for (const auto& rel : rels) {
    CurvatureDiagram d;
    for (int i = -200; i <= 200; ++i) {
      const double x = 0.05 * i;
      d.add(x, rel.f(x));
    }
    pr.expect(qc_classify(d).classification == QCClass::NegativeBranch, "uniform minimal relation");
  }
  return fmt("roundtrip %.1e (%.1e from mu = 0), |m1 m2 - 1| %.1e", std::max(rt, rt_gamma), rt_all, prod);
}

std::string linearized(Probe& pr) {
  struct Canon {
    const char* name;
    Field2 u;
  };
  const Canon patches[] = {{"plane", [](double, double) { return 0.0; }},
                           {"sphere", [](double x, double y) { return 1 - std::sqrt(1 - x * x - y * y); }},
                           {"cylinder", [](double, double y) { return 1 - std::sqrt(1 - y * y); }}};
  auto bump = [](double x, double y) {
    const double s = (x * x + y * y) / 0.0625;
    return s < 1 ? std::pow(1 - s, 4) : 0.0;
  };
  std::string info;
  for (const auto& c : patches) {
    std::vector<double> errs;
    for (double h : {0.04, 0.02, 0.01}) {
      auto P = GraphPatch::rectangle(-0.4, -0.4, 0.4, 0.4, h, c.u);
      P.set_interior(c.u);
      const auto v = variation_derivatives(P, sample_field(P, bump), 1e-5);
      double scale = 1;
      for (std::size_t k = 0; k < P.size(); ++k)
        if (v.valid[k]) scale = std::max({scale, std::abs(v.dH_formula[k]), std::abs(v.dK_formula[k])});
      errs.push_back(std::max(v.max_err_H, v.max_err_K) / scale);
    }
    pr.expect(errs[1] <= 0.5 * errs[0] && errs[2] <= 0.5 * errs[1], std::string("halving on ") + c.name);
    info += fmt("%.1e ", errs[2]);
  }
  for (double H0 : {0.25, 0.5, 2.0}) {
    const auto op = cylinder_operator(Relation::cmc(H0), 1 / (2 * H0));
    pr.expect(op.A == 0.5 && op.B == 0.5 && std::abs(op.C - 2 * H0 * H0) < 1e-14, "CMC constants");
  }
  const double Lc = critical_square_half_side(cylinder_operator(Relation::cmc(0.5), 1));
  const double dL = std::abs(Lc - M_PI / 2 * std::sqrt(2.0));
  pr.expect(dL < 1e-10, "critical size");
  return "variation errors at h=0.01: " + info + fmt("; critical size defect %.1e", dL);
}

std::string blowup(Probe& pr) {
  const auto g = Relation::g_form(ScalarFunction::sqrt_affine(0, 0.5, 1, 1, Interval::half_line(0)));
  const auto a = certify_ellipticity(g);
  double dl = 0, da = 0;
  for (double lambda : {0.1, 0.5, 2.0, 10.0}) {
    const auto b = certify_ellipticity(rescale_relation(g, lambda), CertificationGrid{}.rescaled(lambda));
    pr.expect(b.uniform_constant_lambda.has_value() && b.umbilical_alpha.has_value(), "rescaled certificate");
    if (!b.uniform_constant_lambda || !b.umbilical_alpha) continue;
    dl = std::max(dl, std::abs(*b.uniform_constant_lambda - *a.uniform_constant_lambda));
    da = std::max(da, std::abs(*b.umbilical_alpha - *a.umbilical_alpha / lambda));
  }
  pr.expect(dl < 1e-12, "Lambda preserved");
  pr.expect(da < 1e-12, "alpha / lambda");

  auto sph = [](double x, double y) { return -std::sqrt(4 - x * x - y * y); };
  auto S = GraphPatch::disk(0, 0, 1, 1.0 / 20, sph);
  S.set_interior(sph);
  double dh = 0;
  for (double lambda : {0.5, 3.0}) {
    const auto S2 = rescale_patch(S, lambda);
    const auto h1 = h_function(S, second_fundamental_norm_field(S), 0, 0, 0.7);
    const auto h2 = h_function(S2, second_fundamental_norm_field(S2), 0, 0, 0.7 * lambda);
    for (std::size_t k = 0; k < h1.size(); ++k) {
      if (std::isnan(h1[k]) != std::isnan(h2[k])) pr.expect(false, "disk membership");
      else if (!std::isnan(h1[k])) dh = std::max(dh, std::abs(h1[k] - h2[k]));
    }
  }
  pr.expect(dh < 1e-10, "h invariance");
  return fmt("Lambda %.1e, alpha %.1e, h %.1e", dl, da, dh);
}

std::string mesh_diagrams(Probe& pr) {
  double es = 0, ec = 0, ef = 0;
  const auto s = mesh_diagram(icosphere(2, 4)).diagram;
  for (const auto& p : s.samples) es = std::max({es, std::abs(p.k1 - 0.5) / 0.5, std::abs(p.k2 - 0.5) / 0.5});
  const auto c = mesh_diagram(cylinder_mesh(1, 4, 96, 64)).diagram;
  for (const auto& p : c.samples) ec = std::max({ec, std::abs(p.k1 - 1), std::abs(p.k2)});
  const auto f = mesh_diagram(flat_mesh(2, 20)).diagram;
  for (const auto& p : f.samples) ef = std::max({ef, std::abs(p.k1), std::abs(p.k2)});
  pr.expect(!s.samples.empty() && !c.samples.empty() && !f.samples.empty(), "samples");
  pr.expect(es < 0.05, "icosphere");
  pr.expect(ec < 0.05, "cylinder");
  pr.expect(ef < 1e-6, "flat");
  return fmt("sphere %.1e, cylinder %.1e, flat %.1e (relative)", es, ec, ef);
}

}  // namespace

int main() {
  int failed = 0;
  failed += run(1, "curvature formulas", 1, curvature_formulas);
  failed += run(2, "eigenvalues of H^2 - K", 5, eigenvalues);
  failed += run(3, "Q4 identity and positivity", 5, q4_identity);
  failed += run(4, "Dirichlet solver", 120, dirichlet);
  failed += run(5, "radius bound", 180, radius_bound);
  failed += run(6, "parallel-surface algebra", 10, parallel_algebra);
  failed += run(7, "rotational generator", 30, rotational);
  failed += run(8, "quasiconformality", 5, quasiconformality);
  failed += run(9, "linearized operator", 60, linearized);
  failed += run(10, "blow-up bookkeeping", 10, blowup);
  failed += run(11, "mesh diagrams", 30, mesh_diagrams);
  std::printf("%d of 11 criteria failed\n", failed);
  return failed;
}
