#include "wlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wlab/error.hpp"

namespace wlab {

double f_a(double t, double a) {
  const double den = 1 - a * t;
  if (den == 0.0) throw DomainError("F_a pole: 1 - a t = 0 at t = " + std::to_string(t));
  return t / den;
}

double f_a_derivative(double t, double a) {
  const double den = 1 - a * t;
  if (den == 0.0) throw DomainError("F_a pole: 1 - a t = 0 at t = " + std::to_string(t));
  return 1 / (den * den);
}

ParallelPair parallel_curvatures(const CurvaturePair& pair, double a) {
  ParallelPair out;
  const std::array<double, 2> k = {pair.k1, pair.k2};
  std::array<double, 2> mapped{};
  for (int i = 0; i < 2; ++i) {
    const double m = 1 - a * k[i];
    if (m == 0.0)
      throw DomainError(std::string("parallel surface is singular: 1 - a k") + (i == 0 ? "1" : "2") + " = 0");
    mapped[i] = k[i] / m;
    out.metric_factor[i] = m * m;
  }
  out.pair = CurvaturePair::of(mapped[0], mapped[1]);
  return out;
}

namespace {

Relation conjugate_linear(const Relation& rel, double a) {
  const auto c = rel.linear_coeffs();
  // [[1,0],[-a,1]] [[-al, de],[be, al]] [[1,0],[a,1]]
  const double alpha = c.alpha - a * c.delta;
  const double beta = c.beta + 2 * a * c.alpha - a * a * c.delta;
  const double delta = c.delta;
  if (beta == 0.0) return Relation::cmc(delta / (2 * alpha));

  // The umbilical constant maps by F_a; pick the root branch that carries it.
  const int natural = alpha < 0 ? -1 : 1;
  const auto u0 = rel.fixed_point();
  double target = std::numeric_limits<double>::quiet_NaN();
  if (u0 && 1 - a * *u0 != 0.0) target = f_a(*u0, a);
  if (std::isnan(target)) return Relation::linear(alpha, beta, delta, natural);
  int best = natural;
  double best_err = std::numeric_limits<double>::infinity();
  for (int s : {natural, -natural}) {
    try {
      const double err = std::abs(Relation::linear(alpha, beta, delta, s).g(0.0) - target);
      if (err < best_err) {
        best_err = err;
        best = s;
      }
    } catch (const DomainError&) {
    }
  }
  return Relation::linear(alpha, beta, delta, best);
}

Relation conjugate_sampled(std::vector<double> x, std::vector<double> y, std::vector<double> dy, double a) {
  const double pole = a != 0.0 ? 1 / a : std::numeric_limits<double>::infinity();
  const double lo = *std::min_element(x.begin(), x.end());
  const double hi = *std::max_element(x.begin(), x.end());
  if (pole >= lo && pole <= hi) throw DomainError("F_{-a} pole inside the sampled range of f");
  struct Node {
    double x, y, dy;
  };
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xt = f_a(x[i], a);
    const double yt = f_a(y[i], a);
    // d/dxt F_a(f(F_-a(xt))) = F_a'(y) f'(x) F_-a'(xt)
    const double dyt = f_a_derivative(y[i], a) * dy[i] * f_a_derivative(xt, -a);
    nodes.push_back({xt, yt, dyt});
  }
  std::sort(nodes.begin(), nodes.end(), [](const Node& p, const Node& q) { return p.x < q.x; });
  std::vector<double> nx, ny, ndy;
  for (const auto& n : nodes) {
    if (!nx.empty() && n.x <= nx.back()) continue;
    nx.push_back(n.x);
    ny.push_back(n.y);
    ndy.push_back(n.dy);
  }
  return Relation::f_form(ScalarFunction::hermite(std::move(nx), std::move(ny), std::move(ndy)));
}

}  // namespace

Relation conjugate_relation(const Relation& rel, double a, const std::vector<double>& x_grid) {
  if (a == 0.0) return rel;
  switch (rel.kind()) {
    case RelationKind::Cmc:
    case RelationKind::Linear: return conjugate_linear(rel, a);
    case RelationKind::F:
      if (const auto* tab = rel.function().hermite_table();
          tab && rel.function().in_scale() == 1.0 && rel.function().out_scale() == 1.0)
        return conjugate_sampled(tab->x, tab->y, tab->dy, a);
      break;
    case RelationKind::G: break;
  }
  if (x_grid.empty()) throw RejectedInput("conjugating this relation needs an x grid");
  std::vector<double> xs;
  for (double x : x_grid) {
    xs.push_back(x);
    xs.push_back(rel.f(x));
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(), [](double p, double q) { return std::abs(p - q) <= 1e-14 * (1 + std::abs(p)); }),
           xs.end());
  std::vector<double> y, dy;
  for (double x : xs) {
    y.push_back(rel.f(x));
    dy.push_back(rel.f_prime(x));
  }
  return conjugate_sampled(std::move(xs), std::move(y), std::move(dy), a);
}

std::vector<double> angle_function(const GraphPatch& patch) {
  std::vector<double> nu(patch.size(), std::numeric_limits<double>::quiet_NaN());
  for (int k : patch.interior()) {
    const auto j = patch.jet(k);
    nu[k] = 1 / std::sqrt(1 + j.p * j.p + j.q * j.q);
  }
  return nu;
}

}  // namespace wlab
