#pragma once

#include <vector>

#include "wlab/patch.hpp"
#include "wlab/relation.hpp"

namespace wlab {

/// Coefficients of L_g at a point with curvatures (H, K):
///   L_g[phi] = a Delta phi + b div(T1 grad phi) + q phi.
struct LinearizedCoeffs {
  double principal_laplacian_weight = 0;  // (1 - 2 g g') / 2
  double t1_weight = 0;                   // g'
  double zeroth_order_q = 0;              // 2 g^2 (1 - 2 g g') - (1 - 4 g g') K
};

LinearizedCoeffs linearized_coeffs(const Relation& rel, double H, double K);

/// phi sampled at every node.
std::vector<double> sample_field(const GraphPatch& patch, const Field2& fn);

/// Laplace-Beltrami of the induced metric, in flux form
/// (1/w) d_i (w g^ij d_j phi), w = sqrt(1 + p^2 + q^2), with centred
/// differences. NaN where the stencil would need curvature data of a
/// non-interior node carrying nonzero phi.
std::vector<double> laplace_beltrami(const GraphPatch& patch, const std::vector<double>& phi);

/// div(T1 grad phi), T1 = 2H Id - S, S the shape operator of the upward
/// normal, in the same flux form.
std::vector<double> div_t1_grad(const GraphPatch& patch, const std::vector<double>& phi);

/// L_g[phi] on the patch.
std::vector<double> apply_lg_on_grid(const Relation& rel, const GraphPatch& patch, const std::vector<double>& phi);

struct VariationResult {
  double tau = 0;
  std::vector<double> dH_fd, dK_fd, dW_fd;          // centred differences in tau
  std::vector<double> dH_formula, dK_formula;       // (Delta phi + (4H^2 - 2K) phi)/2, div(T1 grad phi) + 2HK phi
  std::vector<char> valid;
  double max_err_H = 0;
  double max_err_K = 0;
};

/// Default step 1e-4 min(1, 1 / sup|sigma|).
double default_tau(const GraphPatch& patch);

/// Varies the graph points along the unit normal by tau * phi, recomputes
/// H and K of the varied surfaces at +-tau from parametric differences and
/// compares with the variation formulas. phi must vanish off the interior.
/// When `rel` is given, dW_fd holds the derivative of H - g(H^2 - K).
VariationResult variation_derivatives(const GraphPatch& patch, const std::vector<double>& phi, double tau,
                                      const Relation* rel = nullptr);

struct CylinderOperator {
  double A = 0, B = 0, C = 0;
  double H0 = 0, r0 = 0;
};

/// Constant-coefficient form A phi_ss + B phi_tt + C phi on the cylinder
/// of radius r0 (s along the circle, t along the axis). Rejects relations
/// the cylinder does not satisfy to 1e-10.
CylinderOperator cylinder_operator(const Relation& rel, double r0);

/// -A (pi / 2L)^2 - B (pi / 2r)^2 + C.
double perturbation_threshold(const CylinderOperator& op, double L, double r);

/// Side of the square [-L, L]^2 where the threshold changes sign.
double critical_square_half_side(const CylinderOperator& op);

}  // namespace wlab
