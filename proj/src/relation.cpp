#include "wlab/relation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "wlab/error.hpp"

namespace wlab {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

/// Solves fn(z) = target for increasing fn on `dom`, starting at z0 in dom.
/// Returns empty when no crossing can be bracketed inside the domain.
std::optional<double> solve_increasing(const std::function<double(double)>& fn, double target,
                                       const Interval& dom, double z0) {
  const double f0 = fn(z0) - target;
  if (f0 == 0.0) return z0;
  const int dir = f0 < 0 ? 1 : -1;
  const double edge = dir > 0 ? dom.hi : dom.lo;
  const bool edge_open = dir > 0 ? dom.hi_open : dom.lo_open;

  double inside = z0;  // fn(inside) - target has the sign of f0
  std::optional<double> across;
  auto crosses = [&](double z) {
    try {
      const double v = fn(z) - target;
      if (std::isnan(v)) return false;
      return dir > 0 ? v >= 0 : v <= 0;
    } catch (const DomainError&) {
      return false;
    }
  };

  if (std::isinf(edge)) {
    double step = std::max(1.0, std::abs(z0));
    for (int k = 0; k < 1100 && !across; ++k) {
      const double z = inside + dir * step;
      if (!std::isfinite(z)) break;
      if (crosses(z)) across = z;
      else inside = z;
      step *= 2;
    }
  } else {
    if (!edge_open && crosses(edge)) {
      across = edge;
    } else {
      for (int k = 1; k < 200 && !across; ++k) {
        const double z = edge - (edge - z0) * std::ldexp(1.0, -k);
        if (z == edge) break;
        if (crosses(z)) across = z;
        else inside = z;
      }
    }
  }
  if (!across) return std::nullopt;

  double a = inside;
  double b = *across;
  for (int it = 0; it < 300; ++it) {
    const double m = 0.5 * (a + b);
    if (m == a || m == b) break;
    if (crosses(m)) b = m;
    else a = m;
  }
  return b;
}

bool is_finite_interval_end(double v) { return std::isfinite(v); }

// Quarter-decade samples of sigma in [1, sigma_max].
std::vector<double> sigma_ladder(double sigma_max) {
  std::vector<double> s;
  for (int k = 0;; ++k) {
    const double v = std::pow(10.0, k / 4.0);
    if (v > sigma_max * (1 + 1e-12)) break;
    s.push_back(v);
  }
  return s;
}

struct LadderVerdict {
  bool bounded = false;
  double limit = 0;
};

// v is increasing along the ladder; it is called bounded when the last
// decade's increment is small and contracting.
LadderVerdict judge_ladder(const std::vector<double>& v) {
  LadderVerdict out;
  if (v.size() < 9) return out;
  const std::size_t n = v.size() - 1;
  const double last = v[n] - v[n - 4];
  const double prev = v[n - 4] - v[n - 8];
  out.limit = v[n];
  out.bounded = last <= 0.2 * std::abs(prev) + 1e-15 && last <= 1e-2 * (1 + std::abs(v[n]));
  return out;
}

struct BranchLimits {
  LadderVerdict minus;  // sigma - g(sigma^2)
  LadderVerdict plus;   // sigma + g(sigma^2)
};

BranchLimits branch_limits(const std::function<double(double)>& g, double t_end) {
  const double sigma_max = std::min(1e6, std::sqrt(t_end));
  std::vector<double> vm, vp;
  for (double s : sigma_ladder(sigma_max)) {
    const double gv = g(s * s);
    vm.push_back(s - gv);
    vp.push_back(s + gv);
  }
  return {judge_ladder(vm), judge_ladder(vp)};
}

}  // namespace

// ---------------------------------------------------------------------------
// CertificationGrid

std::vector<double> CertificationGrid::points() const {
  if (!(t_max > 0) || samples < 2 || !(t_min_positive > 0) || t_min_positive > t_max)
    throw RejectedInput("certification grid needs t_max > 0, samples >= 2, 0 < t_min <= t_max");
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(samples));
  pts.push_back(0.0);
  if (samples == 2) {
    pts.push_back(t_max);
    return pts;
  }
  const double decades = std::log10(t_max / t_min_positive);
  const double step = decades / (samples - 2);
  for (int j = 0; j < samples - 1; ++j) pts.push_back(t_min_positive * std::pow(10.0, j * step));
  pts.back() = t_max;
  return pts;
}

CertificationGrid CertificationGrid::rescaled(double lambda) const {
  CertificationGrid g = *this;
  g.t_max /= lambda * lambda;
  g.t_min_positive /= lambda * lambda;
  return g;
}

// ---------------------------------------------------------------------------
// Relation construction

Relation Relation::cmc(double h0) {
  if (!std::isfinite(h0)) throw RejectedInput("CMC value must be finite");
  return Relation(Cmc{h0});
}

Relation Relation::linear(double alpha, double beta, double delta, std::optional<int> branch) {
  if (!(alpha * alpha + beta * delta > 0))
    throw RejectedInput("linear Weingarten relation needs alpha^2 + beta*delta > 0");
  int s = branch.value_or(alpha < 0 ? -1 : 1);
  if (s != 1 && s != -1) throw RejectedInput("linear Weingarten branch must be +1 or -1");
  return Relation(LinearCoeffs{alpha, beta, delta, s});
}

Relation Relation::g_form(ScalarFunction g) {
  const Interval dom = g.domain();
  if (!dom.contains(0.0)) throw RejectedInput("g must be defined at t = 0");
  const double t_end = dom.hi;
  Interval i_f;
  if (is_finite_interval_end(t_end)) {
    const double s = std::sqrt(t_end);
    i_f = Interval::closed(g(t_end) - s, g(t_end) + s);
  } else {
    const auto lim = branch_limits([&](double t) { return g(t); }, t_end);
    i_f.lo = lim.minus.bounded ? -lim.minus.limit : -kInf;
    i_f.hi = lim.plus.bounded ? lim.plus.limit : kInf;
  }
  return Relation(G{std::move(g), i_f});
}

Relation Relation::f_form(ScalarFunction f) {
  const Interval dom = f.domain();
  double z0 = 0.0;
  if (!dom.contains(z0)) {
    if (std::isfinite(dom.lo) && std::isfinite(dom.hi)) z0 = 0.5 * (dom.lo + dom.hi);
    else if (std::isfinite(dom.lo)) z0 = dom.lo + 1.0;
    else z0 = dom.hi - 1.0;
  }
  std::optional<double> fixed;
  try {
    fixed = solve_increasing([&](double x) { return x - f(x); }, 0.0, dom, z0);
  } catch (const DomainError&) {
  }
  return Relation(F{std::move(f), fixed});
}

RelationKind Relation::kind() const {
  switch (v_.index()) {
    case 0: return RelationKind::Cmc;
    case 1: return RelationKind::Linear;
    case 2: return RelationKind::G;
    default: return RelationKind::F;
  }
}

double Relation::cmc_value() const {
  if (const auto* c = std::get_if<Cmc>(&v_)) return c->h0;
  throw RejectedInput("relation is not CMC");
}

LinearCoeffs Relation::linear_coeffs() const {
  if (const auto* c = std::get_if<Cmc>(&v_)) return {1.0, 0.0, 2.0 * c->h0, 1};
  if (const auto* l = std::get_if<LinearCoeffs>(&v_)) return *l;
  throw RejectedInput("relation is not linear Weingarten");
}

const ScalarFunction& Relation::function() const {
  if (const auto* g = std::get_if<G>(&v_)) return g->g;
  if (const auto* f = std::get_if<F>(&v_)) return f->f;
  throw RejectedInput("relation has no stored function");
}

bool Relation::closed_form() const {
  if (const auto* g = std::get_if<G>(&v_)) return g->g.is_closed_form();
  if (const auto* f = std::get_if<F>(&v_)) return f->f.is_closed_form();
  return true;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double linear_g(const LinearCoeffs& c, double t, double* gp) {
  const double x = c.alpha * c.alpha + c.beta * c.delta + c.beta * c.beta * t;
  if (x <= 0) throw DomainError("linear Weingarten g undefined at t = " + num(t));
  const double root = std::sqrt(x);
  const double den = c.alpha + c.branch * root;
  if (den == 0) throw DomainError("linear Weingarten g has a pole at t = " + num(t));
  const double numer = c.delta + c.beta * t;
  if (gp) *gp = (c.beta * den - numer * c.branch * c.beta * c.beta / (2 * root)) / (den * den);
  return numer / den;
}

}  // namespace

double Relation::g(double t) const {
  if (!(t >= 0)) throw DomainError("g evaluated at negative t = " + num(t));
  switch (v_.index()) {
    case 0: return std::get<Cmc>(v_).h0;
    case 1: return linear_g(std::get<LinearCoeffs>(v_), t, nullptr);
    case 2: return std::get<G>(v_).g(t);
    default: return g_from_f(t, nullptr);
  }
}

double Relation::g_prime(double t) const {
  if (!(t >= 0)) throw DomainError("g' evaluated at negative t = " + num(t));
  double gp = 0;
  switch (v_.index()) {
    case 0: return 0.0;
    case 1: linear_g(std::get<LinearCoeffs>(v_), t, &gp); return gp;
    case 2: return std::get<G>(v_).g.derivative(t);
    default: g_from_f(t, &gp); return gp;
  }
}

double Relation::f(double x) const {
  switch (v_.index()) {
    case 0: return 2 * std::get<Cmc>(v_).h0 - x;
    case 1: {
      const auto& c = std::get<LinearCoeffs>(v_);
      if (!declared_if().contains(x)) throw DomainError("x = " + num(x) + " outside I_f");
      return (c.delta - c.alpha * x) / (c.alpha + c.beta * x);
    }
    case 2: return f_from_g(x, nullptr);
    default: return std::get<F>(v_).f(x);
  }
}

double Relation::f_prime(double x) const {
  switch (v_.index()) {
    case 0: return -1.0;
    case 1: {
      const auto& c = std::get<LinearCoeffs>(v_);
      if (!declared_if().contains(x)) throw DomainError("x = " + num(x) + " outside I_f");
      const double den = c.alpha + c.beta * x;
      return -(c.alpha * c.alpha + c.beta * c.delta) / (den * den);
    }
    case 2: {
      double slope = 0;
      f_from_g(x, &slope);
      return slope;
    }
    default: return std::get<F>(v_).f.derivative(x);
  }
}

double Relation::f_from_g(double x, double* slope) const {
  const auto& gg = std::get<G>(v_).g;
  const double alpha = gg(0.0);
  const double t_end = gg.domain().hi;
  const Interval sigma_dom =
      std::isfinite(t_end) ? Interval::closed(0.0, std::sqrt(t_end)) : Interval::half_line(0.0);
  const bool upper = x >= alpha;
  std::optional<double> sigma;
  if (upper) {
    sigma = solve_increasing([&](double s) { return gg(s * s) + s; }, x, sigma_dom, 0.0);
  } else {
    sigma = solve_increasing([&](double s) { return s - gg(s * s); }, -x, sigma_dom, 0.0);
  }
  if (!sigma) throw DomainError("x = " + num(x) + " outside the range of g(t) -+ sqrt(t)");
  const double s = *sigma;
  const double gv = gg(s * s);
  if (slope) {
    const double w = s == 0.0 ? 0.0 : 2 * s * gg.derivative(s * s);
    *slope = upper ? (w - 1) / (w + 1) : (w + 1) / (w - 1);
  }
  return upper ? gv - s : gv + s;
}

double Relation::g_from_f(double t, double* slope) const {
  const auto& rec = std::get<F>(v_);
  if (!rec.fixed) throw DomainError("f has no fixed point in its domain; g is undefined");
  const double alpha = *rec.fixed;
  const double sigma = std::sqrt(t);
  const auto second_at_fixed = [&] { return rec.f.second_derivative(alpha) / 4.0; };
  if (sigma == 0.0) {
    if (slope) *slope = second_at_fixed();
    return alpha;
  }
  const auto x = solve_increasing([&](double z) { return z - rec.f(z); }, 2 * sigma,
                                  rec.f.domain(), alpha);
  if (!x) throw DomainError("t = " + num(t) + " beyond the sampled range of f");
  const double fx = rec.f(*x);
  if (slope) {
    if (sigma < 1e-6 * std::max(1.0, std::abs(alpha))) {
      *slope = second_at_fixed();
    } else {
      const double fp = rec.f.derivative(*x);
      *slope = (1 + fp) / (2 * sigma * (1 - fp));
    }
  }
  return 0.5 * (*x + fx);
}

Interval Relation::g_domain() const {
  switch (v_.index()) {
    case 0:
    case 1: return Interval::half_line(0.0);
    case 2: return std::get<G>(v_).g.domain();
    default: {
      const auto& rec = std::get<F>(v_);
      const Interval d = rec.f.domain();
      double t_end = kInf;
      for (double edge : {d.lo, d.hi}) {
        if (!std::isfinite(edge)) continue;
        try {
          const double half = 0.5 * (edge - rec.f(edge));
          t_end = std::min(t_end, half * half);
        } catch (const DomainError&) {
        }
      }
      return std::isfinite(t_end) ? Interval::closed(0.0, t_end) : Interval::half_line(0.0);
    }
  }
}

Interval Relation::f_domain() const {
  if (const auto* rec = std::get_if<F>(&v_)) return rec->f.domain();
  return declared_if();
}

Interval Relation::declared_if() const {
  switch (v_.index()) {
    case 0: return Interval::real_line();
    case 1: {
      const auto& c = std::get<LinearCoeffs>(v_);
      if (c.beta == 0.0) return Interval::real_line();
      const double pole = -c.alpha / c.beta;
      const double u0 = linear_g(c, 0.0, nullptr);
      return u0 > pole ? Interval{pole, kInf, true, true} : Interval{-kInf, pole, true, true};
    }
    case 2: return std::get<G>(v_).i_f;
    default: return std::get<F>(v_).f.domain();
  }
}

std::optional<double> Relation::fixed_point() const {
  switch (v_.index()) {
    case 0: return std::get<Cmc>(v_).h0;
    case 1: return linear_g(std::get<LinearCoeffs>(v_), 0.0, nullptr);
    case 2: return std::get<G>(v_).g(0.0);
    default: return std::get<F>(v_).fixed;
  }
}

Relation Relation::negated() const {
  switch (v_.index()) {
    case 0: return cmc(-std::get<Cmc>(v_).h0);
    case 1: {
      const auto& c = std::get<LinearCoeffs>(v_);
      return linear(-c.alpha, c.beta, c.delta, -c.branch);
    }
    case 2: return g_form(std::get<G>(v_).g.scaled(1.0, -1.0));
    default: return f_form(std::get<F>(v_).f.scaled(-1.0, -1.0));
  }
}

const char* to_string(BoundedBranch b) {
  switch (b) {
    case BoundedBranch::TPlusGBounded: return "t_plus_g_bounded";
    case BoundedBranch::TMinusGBounded: return "t_minus_g_bounded";
    case BoundedBranch::Neither: return "neither";
  }
  return "neither";
}

// ---------------------------------------------------------------------------
// Operations

std::pair<Relation, bool> normalize_orientation(const Relation& rel) {
  const auto a = rel.fixed_point();
  if (a && *a < 0) return {rel.negated(), true};
  return {rel, false};
}

BoundedBranch classify_bounded_branch(const Relation& rel) {
  switch (rel.kind()) {
    case RelationKind::Cmc: return BoundedBranch::Neither;
    case RelationKind::Linear: {
      const Interval i_f = rel.declared_if();
      if (i_f.is_real_line()) return BoundedBranch::Neither;
      return std::isfinite(i_f.lo) ? BoundedBranch::TMinusGBounded : BoundedBranch::TPlusGBounded;
    }
    default: break;
  }
  const auto lim = branch_limits([&](double t) { return rel.g(t); }, rel.g_domain().hi);
  if (lim.minus.bounded && !lim.plus.bounded) return BoundedBranch::TMinusGBounded;
  if (lim.plus.bounded && !lim.minus.bounded) return BoundedBranch::TPlusGBounded;
  return BoundedBranch::Neither;
}

EllipticityReport certify_ellipticity(const Relation& rel, const CertificationGrid& grid) {
  const auto [norm, flipped] = normalize_orientation(rel);
  EllipticityReport rep;
  rep.grid = grid;
  rep.orientation_flipped = flipped;

  double sup = 0.0;
  double sup_t = 0.0;
  double slope_min = kInf;
  double slope_max = 0.0;
  bool finite = true;
  for (double t : grid.points()) {
    double gp = 0;
    try {
      norm.g(t);
      gp = norm.g_prime(t);
    } catch (const Error& e) {
      throw RejectedInput("relation evaluation failed at t = " + num(t) + ": " + e.what());
    }
    double v = 4 * t * gp * gp;
    if (t == 0.0 && std::isfinite(gp)) v = 0.0;
    if (!std::isfinite(v)) {
      finite = false;
      v = kInf;
    }
    if (v > sup) {
      sup = v;
      sup_t = t;
    }
    const double w = 2 * std::sqrt(t) * gp;
    if (std::isfinite(w) && w > -1 && w < 1) {
      const double s = (1 - w) / (1 + w);
      slope_min = std::min({slope_min, s, 1 / s});
      slope_max = std::max({slope_max, s, 1 / s});
    }
  }
  rep.sup_4tgp2 = sup;
  rep.sup_at_t = sup_t;
  rep.is_elliptic = finite && sup < 1.0;
  if (rep.is_elliptic && sup <= 1.0 - kUniformMargin) {
    rep.uniform_constant_lambda = sup;
    rep.f_slope_bounds = std::make_pair(slope_min, slope_max);
  }
  rep.umbilical_alpha = norm.fixed_point();
  rep.minimal_type = rep.umbilical_alpha && std::abs(*rep.umbilical_alpha) <= kMinimalTol;
  rep.if_domain = norm.declared_if();
  rep.bounded_branch = classify_bounded_branch(norm);
  return rep;
}

Relation g_to_f(const Relation& rel, const std::vector<double>& t_grid) {
  std::vector<double> ts(t_grid);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  if (ts.empty() || ts.front() < 0) throw RejectedInput("t grid must be nonempty and nonnegative");

  struct Node {
    double x, y, dy;
  };
  std::vector<Node> nodes;
  nodes.reserve(2 * ts.size());
  double prev_up = -kInf;
  double prev_low = kInf;
  for (double t : ts) {
    const double s = std::sqrt(t);
    const double gv = rel.g(t);
    const double gp = rel.g_prime(t);
    const double up = gv + s;
    const double low = gv - s;
    if (!(up > prev_up + kMonotoneMargin) || !(low < prev_low - kMonotoneMargin))
      throw RejectedInput("branches g(t) -+ sqrt(t) are not strictly monotone at t = " + num(t) +
                          " (relation not elliptic on the grid)");
    prev_up = up;
    prev_low = low;
    const double w = t == 0.0 ? 0.0 : 2 * s * gp;
    if (t == 0.0) {
      nodes.push_back({gv, gv, -1.0});
      continue;
    }
    nodes.push_back({up, low, (w - 1) / (w + 1)});
    nodes.push_back({low, up, (w + 1) / (w - 1)});
  }
  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.x < b.x; });
  std::vector<double> x, y, dy;
  for (const auto& n : nodes) {
    x.push_back(n.x);
    y.push_back(n.y);
    dy.push_back(n.dy);
  }
  return Relation::f_form(ScalarFunction::hermite(std::move(x), std::move(y), std::move(dy)));
}

std::pair<double, double> involution_defect(const Relation& rel, const std::vector<double>& x_grid) {
  double worst = 0.0;
  double worst_x = x_grid.empty() ? 0.0 : x_grid.front();
  for (double x : x_grid) {
    const double d = std::abs(rel.f(rel.f(x)) - x);
    if (d > worst || std::isnan(d)) {
      worst = d;
      worst_x = x;
    }
  }
  return {worst, worst_x};
}

namespace {

double f_second(const Relation& rel, double x) {
  if (rel.kind() == RelationKind::F) return rel.function().second_derivative(x);
  const double e = 1e-5 * std::max(1.0, std::abs(x));
  return (rel.f_prime(x + e) - rel.f_prime(x - e)) / (2 * e);
}

}  // namespace

Relation f_to_g(const Relation& rel, const std::vector<double>& x_grid) {
  if (x_grid.empty()) throw RejectedInput("x grid must be nonempty");
  const auto [defect, worst_x] = involution_defect(rel, x_grid);
  if (!(defect <= kSymmetryTol))
    throw RejectedInput("f o f != Id: |f(f(x)) - x| = " + num(defect) + " at x = " + num(worst_x));

  struct Node {
    double t, g, dg;
  };
  std::vector<Node> nodes;
  const auto alpha = rel.fixed_point();
  const double lo = *std::min_element(x_grid.begin(), x_grid.end());
  const double hi = *std::max_element(x_grid.begin(), x_grid.end());
  if (alpha && *alpha >= lo && *alpha <= hi) nodes.push_back({0.0, *alpha, f_second(rel, *alpha) / 4});

  for (double x : x_grid) {
    const double fx = rel.f(x);
    if (!(rel.f_prime(x) < 0))
      throw RejectedInput("f is not strictly decreasing at x = " + num(x));
    const double half = 0.5 * (x - fx);
    const double t = half * half;
    const double sigma = std::abs(half);
    double dg;
    if (alpha && sigma < 1e-6 * std::max(1.0, std::abs(*alpha))) {
      dg = f_second(rel, *alpha) / 4;
    } else {
      // Derivative along the upper branch x' = max(x, f(x)).
      const double xu = std::max(x, fx);
      const double fp = rel.f_prime(xu);
      dg = (1 + fp) / (2 * sigma * (1 - fp));
    }
    nodes.push_back({t, 0.5 * (x + fx), dg});
  }
  std::stable_sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.t < b.t; });
  std::vector<double> t, g, dg;
  for (const auto& n : nodes) {
    if (!t.empty() && n.t - t.back() <= 1e-12 * std::max(1.0, n.t)) continue;
    t.push_back(n.t);
    g.push_back(n.g);
    dg.push_back(n.dg);
  }
  if (t.size() < 2) throw RejectedInput("x grid collapses to fewer than two distinct t samples");
  return Relation::g_form(ScalarFunction::hermite(std::move(t), std::move(g), std::move(dg)));
}

std::optional<double> umbilical_constant(const Relation& rel) {
  const auto a = rel.fixed_point();
  if (!a) return std::nullopt;
  return std::abs(*a);
}

std::pair<double, double> wedge_for_uniform_minimal(const Relation& rel, const CertificationGrid& grid) {
  const auto rep = certify_ellipticity(rel, grid);
  if (!rep.uniform_constant_lambda) throw RejectedInput("relation is not uniformly elliptic on the grid");
  if (!rep.minimal_type) throw RejectedInput("relation is not of minimal type");
  const auto [l1, l2] = *rep.f_slope_bounds;
  const double m1 = -l2;
  const double m2 = -l1;
  const auto norm = normalize_orientation(rel).first;
  for (double t : grid.points()) {
    if (t == 0.0) continue;
    const double s = std::sqrt(t);
    const double gv = norm.g(t);
    const double ratio = (gv - s) / (gv + s);
    const double tol = 1e-12 * std::max(1.0, std::abs(ratio));
    if (ratio < m1 - tol || ratio > m2 + tol)
      throw RejectedInput("sampled curve leaves the wedge at t = " + num(t));
  }
  return {m1, m2};
}

Relation rescale_relation(const Relation& rel, double lambda) {
  if (!(lambda > 0) || !std::isfinite(lambda)) throw RejectedInput("rescaling factor must be positive");
  switch (rel.kind()) {
    case RelationKind::Cmc: return Relation::cmc(rel.cmc_value() / lambda);
    case RelationKind::Linear: {
      const auto c = rel.linear_coeffs();
      return Relation::linear(c.alpha, c.beta * lambda, c.delta / lambda, c.branch);
    }
    case RelationKind::G: return Relation::g_form(rel.function().scaled(lambda * lambda, 1.0 / lambda));
    case RelationKind::F: return Relation::f_form(rel.function().scaled(lambda, 1.0 / lambda));
  }
  return rel;
}

}  // namespace wlab
