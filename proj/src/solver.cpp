#include "wlab/solver.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>

#include "wlab/error.hpp"
#include "wlab/parallel.hpp"

namespace wlab {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::Diverged: return "diverged";
    case SolveStatus::MaxIterations: return "max_iterations";
    case SolveStatus::LineSearchFailure: return "line_search_failure";
  }
  return "unknown";
}

std::vector<double> residual_field(const Relation& rel, const GraphPatch& patch) {
  return residual_field(rel, patch, patch.values());
}

std::vector<double> residual_field(const Relation& rel, const GraphPatch& patch,
                                   const std::vector<double>& u) {
  std::vector<double> out(patch.size(), 0.0);
  const auto& nodes = patch.interior();
  parallel_for(nodes.size(), [&](std::size_t m) {
    const int k = nodes[m];
    try {
      out[k] = weingarten_residual(rel, patch.jet(k, u));
    } catch (const DomainError& e) {
      throw DomainError("node " + std::to_string(k) + ": " + e.what());
    }
  });
  return out;
}

namespace {

// Newton works on the equivalent residual 2 W^{3/2} (H - g(H^2 - K)),
// W = 1 + p^2 + q^2, whose principal part does not degenerate on steep
// initial guesses. Convergence is still judged on H - g(H^2 - K).
double weight(const Jet2& j) {
  const double W = 1 + j.p * j.p + j.q * j.q;
  return 2 * W * std::sqrt(W);
}

struct Eval {
  std::vector<double> F;  // scaled residual per unknown
  double sup = 0;         // sup of the unscaled residual
  double wsup = 0;        // sup of the scaled residual
  double half_sq = 0;     // 0.5 |F|^2
  bool ok = true;
};

Eval evaluate(const Relation& rel, const GraphPatch& patch, const std::vector<double>& u) {
  Eval e;
  const auto& nodes = patch.interior();
  std::vector<double> raw(nodes.size());
  e.F.resize(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t m) {
    const auto j = patch.jet(nodes[m], u);
    try {
      raw[m] = weingarten_residual(rel, j);
    } catch (const DomainError&) {
      raw[m] = std::numeric_limits<double>::quiet_NaN();
    }
    e.F[m] = weight(j) * raw[m];
  });
  for (std::size_t m = 0; m < nodes.size(); ++m) {
    if (!std::isfinite(e.F[m])) {
      e.ok = false;
      return e;
    }
    e.sup = std::max(e.sup, std::abs(raw[m]));
    e.wsup = std::max(e.wsup, std::abs(e.F[m]));
    e.half_sq += 0.5 * e.F[m] * e.F[m];
  }
  return e;
}

double max_slope(const GraphPatch& patch, const std::vector<double>& u) {
  double s = 0;
  for (int k : patch.interior()) {
    const auto j = patch.jet(k, u);
    s = std::max({s, std::abs(j.p), std::abs(j.q)});
  }
  return s;
}

}  // namespace

SolveOutcome newton_solve(const Relation& rel, const GraphPatch& patch0, const SolveOptions& opt) {
  SolveOutcome out;
  out.final_patch = patch0;
  const GraphPatch& patch = patch0;
  const auto& nodes = patch.interior();
  const std::size_t n = nodes.size();
  std::vector<double> u = patch.values();

  Eval cur = evaluate(rel, patch, u);
  if (!cur.ok) {
    residual_field(rel, patch, u);  // rethrows the diagnostic
    throw DomainError("residual is not finite on the initial guess");
  }
  out.history.push_back(cur.sup);

  int growth = 0;
  auto finish = [&](SolveStatus st, std::string msg) {
    out.status = st;
    out.message = std::move(msg);
    out.residual_sup = cur.sup;
    out.final_patch.set_interior_values([&] {
      std::vector<double> v(n);
      for (std::size_t m = 0; m < n; ++m) v[m] = u[nodes[m]];
      return v;
    }());
    out.max_slope = max_slope(patch, u);
    return out;
  };

  for (int it = 0;; ++it) {
    out.iterations = it;
    if (cur.sup <= opt.tol_res) return finish(SolveStatus::Converged, "residual below tolerance");
    if (it >= opt.max_iter) return finish(SolveStatus::MaxIterations, "iteration limit reached");

    // Jacobian rows, assembled per node then inserted in node order.
    std::vector<std::array<std::pair<int, double>, 9>> rows(n);
    parallel_for(n, [&](std::size_t m) {
      const int k = nodes[m];
      const auto st = patch.stencil(k);
      const auto jet = patch.jet(k, u);
      auto grad = residual_gradient(rel, jet);
      // Chain rule for the weighted residual: w dF + F dw.
      const double w = weight(jet), F = cur.F[m] / w;
      const double dw = 3 * w / (1 + jet.p * jet.p + jet.q * jet.q);
      for (double& gc : grad) gc *= w;
      grad[0] += F * dw * jet.p;
      grad[1] += F * dw * jet.q;
      for (int e = 0; e < 9; ++e) {
        double d = 0;
        for (int c = 0; c < 5; ++c) d += grad[c] * st.w[c][e];
        const int col = st.node[e] >= 0 ? patch.unknown_index(st.node[e]) : -1;
        rows[m][e] = {col, d};
      }
    });
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(9 * n);
    for (std::size_t m = 0; m < n; ++m)
      for (const auto& [col, d] : rows[m])
        if (col >= 0 && d != 0.0) trip.emplace_back(static_cast<int>(m), col, d);
    Eigen::SparseMatrix<double> J(static_cast<int>(n), static_cast<int>(n));
    J.setFromTriplets(trip.begin(), trip.end());

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(J);
    lu.factorize(J);
    if (lu.info() != Eigen::Success) return finish(SolveStatus::LineSearchFailure, "singular linearization");
    Eigen::VectorXd rhs(static_cast<int>(n));
    for (std::size_t m = 0; m < n; ++m) rhs[static_cast<int>(m)] = -cur.F[m];
    const Eigen::VectorXd delta = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !delta.allFinite())
      return finish(SolveStatus::LineSearchFailure, "linear solve failed");

    // Armijo backtracking on 0.5 |F|^2; the Newton direction has slope -|F|^2.
    double step = 1.0;
    std::vector<double> trial = u;
    Eval next;
    for (;;) {
      for (std::size_t m = 0; m < n; ++m) trial[nodes[m]] = u[nodes[m]] + step * delta[static_cast<int>(m)];
      next = evaluate(rel, patch, trial);
      if (next.ok && next.half_sq <= (1 - 2 * opt.armijo_c * step) * cur.half_sq) break;
      step *= 0.5;
      if (step < opt.min_step) return finish(SolveStatus::LineSearchFailure, "no sufficient decrease");
    }
    const double prev_sup = cur.wsup;
    u.swap(trial);
    cur = std::move(next);
    out.history.push_back(cur.sup);

    const double slope = max_slope(patch, u);
    if (!(slope <= opt.slope_limit)) {
      out.iterations = it + 1;
      return finish(SolveStatus::Diverged, "interior slope exceeds limit");
    }
    growth = cur.wsup > prev_sup ? growth + 1 : 0;
    if (growth >= opt.growth_window) {
      out.iterations = it + 1;
      return finish(SolveStatus::Diverged, "residual grew over consecutive steps");
    }
  }
}

std::vector<double> second_fundamental_norm_field(const GraphPatch& patch) {
  std::vector<double> out(patch.size(), std::numeric_limits<double>::quiet_NaN());
  const auto& nodes = patch.interior();
  parallel_for(nodes.size(), [&](std::size_t m) {
    const auto c = curvatures_of_jet(patch.jet(nodes[m]));
    // k1^2 + k2^2 = 4H^2 - 2K
    out[nodes[m]] = std::sqrt(std::max(0.0, 4 * c.H * c.H - 2 * c.K));
  });
  return out;
}

GraphPatch rescale_patch(const GraphPatch& patch, double lambda) { return patch.rescaled(lambda); }

}  // namespace wlab
