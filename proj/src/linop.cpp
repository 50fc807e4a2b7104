#include "wlab/linop.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "wlab/error.hpp"
#include "wlab/solver.hpp"
#include "wlab/surface_grid.hpp"

#include <Eigen/Geometry>

namespace wlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Mat2 = std::array<std::array<double, 2>, 2>;

// Inverse metric and shape-operator data of the graph at an interior node.
struct Chart {
  double w = 1;  // sqrt(det g)
  Mat2 ginv{};
  Mat2 t1_up{};  // T1 with both indices raised: 2H g^-1 - g^-1 II g^-1
  double H = 0, K = 0;
};

Chart chart_at(const Jet2& j) {
  Chart c;
  const double p = j.p, q = j.q;
  const double w2 = 1 + p * p + q * q;
  c.w = std::sqrt(w2);
  c.ginv = {{{1 - p * p / w2, -p * q / w2}, {-p * q / w2, 1 - q * q / w2}}};
  const Mat2 second = {{{j.r / c.w, j.s / c.w}, {j.s / c.w, j.t / c.w}}};
  const auto mc = curvatures_of_jet(j);
  c.H = mc.H;
  c.K = mc.K;
  Mat2 s_up{};  // g^-1 II g^-1
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) s_up[a][b] += c.ginv[a][k] * second[k][l] * c.ginv[l][b];
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) c.t1_up[a][b] = 2 * c.H * c.ginv[a][b] - s_up[a][b];
  return c;
}

bool axis_neighbours(const GraphPatch& patch, std::size_t k, std::array<int, 4>& nb) {
  const int i = static_cast<int>(k) % patch.nx(), j = static_cast<int>(k) / patch.nx();
  const std::array<std::array<int, 2>, 4> off = {{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
  for (int d = 0; d < 4; ++d) {
    const int ni = i + off[d][0], nj = j + off[d][1];
    if (ni < 0 || nj < 0 || ni >= patch.nx() || nj >= patch.ny()) return false;
    nb[d] = patch.index(ni, nj);
    if (!patch.in_mask(nb[d])) return false;
  }
  return true;
}

// (1/w) d_i (w a^ij d_j phi) with a^ij chosen by `pick`.
template <class Pick>
std::vector<double> flux_divergence(const GraphPatch& patch, const std::vector<double>& phi, Pick pick) {
  if (phi.size() != patch.size()) throw RejectedInput("phi must have one value per node");
  const double h = patch.h();
  const std::size_t n = patch.size();
  std::vector<std::array<double, 2>> flux(n, {kNaN, kNaN});
  std::vector<double> w(n, kNaN);
  for (std::size_t k = 0; k < n; ++k) {
    if (!patch.in_mask(k)) continue;
    std::array<int, 4> nb{};
    const bool full = axis_neighbours(patch, k, nb);
    if (patch.role(k) == GraphPatch::Role::Interior && full) {
      const Chart c = chart_at(patch.jet(k));
      const double dx = (phi[nb[0]] - phi[nb[1]]) / (2 * h);
      const double dy = (phi[nb[2]] - phi[nb[3]]) / (2 * h);
      const Mat2& a = pick(c);
      flux[k] = {c.w * (a[0][0] * dx + a[0][1] * dy), c.w * (a[1][0] * dx + a[1][1] * dy)};
      w[k] = c.w;
      continue;
    }
    // No curvature data here; acceptable only where phi is locally zero.
    bool zero = phi[k] == 0.0;
    if (full)
      for (int m : nb) zero = zero && phi[m] == 0.0;
    if (zero) flux[k] = {0.0, 0.0};
  }
  std::vector<double> out(n, kNaN);
  for (std::size_t k = 0; k < n; ++k) {
    if (patch.role(k) != GraphPatch::Role::Interior || std::isnan(w[k])) continue;
    std::array<int, 4> nb{};
    if (!axis_neighbours(patch, k, nb)) continue;
    const double div = (flux[nb[0]][0] - flux[nb[1]][0]) / (2 * h) + (flux[nb[2]][1] - flux[nb[3]][1]) / (2 * h);
    out[k] = div / w[k];
  }
  return out;
}

}  // namespace

LinearizedCoeffs linearized_coeffs(const Relation& rel, double H, double K) {
  double t = H * H - K;
  if (t < 0 && t > -1e-14) t = 0;
  const double g = rel.g(t);
  const double gp = rel.g_prime(t);
  return {(1 - 2 * g * gp) / 2, gp, 2 * g * g * (1 - 2 * g * gp) - (1 - 4 * g * gp) * K};
}

std::vector<double> sample_field(const GraphPatch& patch, const Field2& fn) {
  std::vector<double> v(patch.size(), 0.0);
  for (std::size_t k = 0; k < patch.size(); ++k)
    if (patch.in_mask(k)) v[k] = fn(patch.x(k), patch.y(k));
  return v;
}

std::vector<double> laplace_beltrami(const GraphPatch& patch, const std::vector<double>& phi) {
  return flux_divergence(patch, phi, [](const Chart& c) -> const Mat2& { return c.ginv; });
}

std::vector<double> div_t1_grad(const GraphPatch& patch, const std::vector<double>& phi) {
  return flux_divergence(patch, phi, [](const Chart& c) -> const Mat2& { return c.t1_up; });
}

std::vector<double> apply_lg_on_grid(const Relation& rel, const GraphPatch& patch, const std::vector<double>& phi) {
  const auto lap = laplace_beltrami(patch, phi);
  const auto dt1 = div_t1_grad(patch, phi);
  std::vector<double> out(patch.size(), kNaN);
  for (int k : patch.interior()) {
    const auto c = curvatures_of_jet(patch.jet(k));
    const auto co = linearized_coeffs(rel, c.H, c.K);
    out[k] = co.principal_laplacian_weight * lap[k] + co.t1_weight * dt1[k] + co.zeroth_order_q * phi[k];
  }
  return out;
}

double default_tau(const GraphPatch& patch) {
  double sup = 0;
  for (double s : second_fundamental_norm_field(patch))
    if (std::isfinite(s)) sup = std::max(sup, s);
  return 1e-4 * std::min(1.0, sup > 0 ? 1 / sup : 1.0);
}

namespace {

// H, K of the parametric surface X(x, y) sampled on the patch grid, by
// second-order centred differences; NaN where the 3x3 block is incomplete.
void parametric_curvatures(const GraphPatch& patch, const std::vector<Vec3>& X, std::vector<double>& H,
                           std::vector<double>& K) {
  const double h = patch.h();
  H.assign(patch.size(), kNaN);
  K.assign(patch.size(), kNaN);
  for (int k : patch.interior()) {
    const int i = k % patch.nx(), j = k / patch.nx();
    bool ok = i > 0 && j > 0 && i + 1 < patch.nx() && j + 1 < patch.ny();
    for (int dj = -1; ok && dj <= 1; ++dj)
      for (int di = -1; ok && di <= 1; ++di) ok = patch.in_mask(patch.index(i + di, j + dj));
    if (!ok) continue;
    auto at = [&](int di, int dj) -> const Vec3& { return X[patch.index(i + di, j + dj)]; };
    const Vec3 xu = (at(1, 0) - at(-1, 0)) / (2 * h);
    const Vec3 xv = (at(0, 1) - at(0, -1)) / (2 * h);
    const Vec3 xuu = (at(1, 0) - 2 * at(0, 0) + at(-1, 0)) / (h * h);
    const Vec3 xvv = (at(0, 1) - 2 * at(0, 0) + at(0, -1)) / (h * h);
    const Vec3 xuv = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4 * h * h);
    Vec3 n = xu.cross(xv);
    if (!(n.z() > 0)) throw DomainError("varied surface is no longer a graph near node " + std::to_string(k));
    n.normalize();
    const double E = xu.dot(xu), F = xu.dot(xv), G = xv.dot(xv);
    const double e = xuu.dot(n), f = xuv.dot(n), g = xvv.dot(n);
    const double det = E * G - F * F;
    H[k] = (e * G - 2 * f * F + g * E) / (2 * det);
    K[k] = (e * g - f * f) / det;
  }
}

}  // namespace

VariationResult variation_derivatives(const GraphPatch& patch, const std::vector<double>& phi, double tau,
                                      const Relation* rel) {
  if (phi.size() != patch.size()) throw RejectedInput("phi must have one value per node");
  if (!(tau > 0)) throw RejectedInput("tau must be positive");
  for (std::size_t k = 0; k < patch.size(); ++k)
    if (patch.role(k) != GraphPatch::Role::Interior && phi[k] != 0.0)
      throw RejectedInput("phi must vanish off the patch interior");

  const std::size_t n = patch.size();
  std::vector<Vec3> base(n, Vec3::Zero()), normal(n, Vec3::Zero());
  for (std::size_t k = 0; k < n; ++k) {
    if (!patch.in_mask(k)) continue;
    base[k] = Vec3(patch.x(k), patch.y(k), patch.value(k));
    if (patch.role(k) == GraphPatch::Role::Interior) {
      const auto j = patch.jet(k);
      normal[k] = Vec3(-j.p, -j.q, 1.0).normalized();
    }
  }
  auto varied = [&](double t) {
    std::vector<Vec3> X(base);
    for (std::size_t k = 0; k < n; ++k) X[k] += t * phi[k] * normal[k];
    return X;
  };
  std::vector<double> hp, kp, hm, km;
  parametric_curvatures(patch, varied(tau), hp, kp);
  parametric_curvatures(patch, varied(-tau), hm, km);

  VariationResult res;
  res.tau = tau;
  res.dH_fd.assign(n, kNaN);
  res.dK_fd.assign(n, kNaN);
  res.dW_fd.assign(n, kNaN);
  res.dH_formula.assign(n, kNaN);
  res.dK_formula.assign(n, kNaN);
  res.valid.assign(n, 0);
  const auto lap = laplace_beltrami(patch, phi);
  const auto dt1 = div_t1_grad(patch, phi);
  for (int k : patch.interior()) {
    if (std::isnan(hp[k]) || std::isnan(hm[k]) || std::isnan(lap[k]) || std::isnan(dt1[k])) continue;
    const auto c = curvatures_of_jet(patch.jet(k));
    res.dH_fd[k] = (hp[k] - hm[k]) / (2 * tau);
    res.dK_fd[k] = (kp[k] - km[k]) / (2 * tau);
    if (rel) {
      auto W = [&](double H, double K) {
        double t = H * H - K;
        if (t < 0 && t > -1e-14) t = 0;
        return H - rel->g(t);
      };
      res.dW_fd[k] = (W(hp[k], kp[k]) - W(hm[k], km[k])) / (2 * tau);
    }
    res.dH_formula[k] = 0.5 * (lap[k] + (4 * c.H * c.H - 2 * c.K) * phi[k]);
    res.dK_formula[k] = dt1[k] + 2 * c.H * c.K * phi[k];
    res.valid[k] = 1;
    res.max_err_H = std::max(res.max_err_H, std::abs(res.dH_fd[k] - res.dH_formula[k]));
    res.max_err_K = std::max(res.max_err_K, std::abs(res.dK_fd[k] - res.dK_formula[k]));
  }
  return res;
}

CylinderOperator cylinder_operator(const Relation& rel, double r0) {
  if (!(r0 > 0)) throw RejectedInput("cylinder radius must be positive");
  CylinderOperator op;
  op.r0 = r0;
  op.H0 = 1 / (2 * r0);
  const double t = op.H0 * op.H0;
  double g, gp;
  try {
    g = rel.g(t);
    gp = rel.g_prime(t);
  } catch (const DomainError& e) {
    throw RejectedInput(std::string("relation not evaluable on the cylinder: ") + e.what());
  }
  if (!std::isfinite(gp)) throw RejectedInput("g is not differentiable at H0^2");
  if (std::abs(g - op.H0) > 1e-10)
    throw RejectedInput("cylinder of radius " + std::to_string(r0) + " does not satisfy the relation: g(H0^2) - H0 = " +
                        std::to_string(g - op.H0));
  op.A = 0.5 * (1 - 2 * g * gp);
  op.B = op.A + 2 * op.H0 * gp;
  op.C = 4 * op.A * op.H0 * op.H0;
  return op;
}

double perturbation_threshold(const CylinderOperator& op, double L, double r) {
  if (!(L > 0) || !(r > 0)) throw RejectedInput("L and r must be positive");
  const double a = std::numbers::pi / (2 * L), b = std::numbers::pi / (2 * r);
  return -op.A * a * a - op.B * b * b + op.C;
}

double critical_square_half_side(const CylinderOperator& op) {
  return std::numbers::pi / 2 * std::sqrt((op.A + op.B) / op.C);
}

}  // namespace wlab
