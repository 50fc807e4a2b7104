#pragma once

#include <string>
#include <vector>

#include "wlab/patch.hpp"
#include "wlab/relation.hpp"

namespace wlab {

/// H - g(H^2 - K) at interior nodes, 0 elsewhere. A g-domain violation
/// throws DomainError naming the node.
std::vector<double> residual_field(const Relation& rel, const GraphPatch& patch);
std::vector<double> residual_field(const Relation& rel, const GraphPatch& patch,
                                   const std::vector<double>& u);

enum class SolveStatus { Converged, Diverged, MaxIterations, LineSearchFailure };
const char* to_string(SolveStatus s);

struct SolveOptions {
  double tol_res = 1e-10;
  int max_iter = 60;
  double armijo_c = 1e-4;
  double min_step = 0x1p-20;
  int growth_window = 5;
  double slope_limit = 1e6;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::MaxIterations;
  double residual_sup = 0;
  int iterations = 0;
  double max_slope = 0;
  std::string message;
  std::vector<double> history;  // residual sup before each iteration and at the end
  GraphPatch final_patch;
};

/// Damped Newton on the interior values. The Jacobian is the chain rule of
/// the analytic residual gradient through the patch stencils; linear solves
/// use a sparse LU factorization.
SolveOutcome newton_solve(const Relation& rel, const GraphPatch& patch0, const SolveOptions& opt = {});

/// |sigma| = sqrt(k1^2 + k2^2) at interior nodes; NaN elsewhere.
std::vector<double> second_fundamental_norm_field(const GraphPatch& patch);

/// x, y, u multiplied by lambda.
GraphPatch rescale_patch(const GraphPatch& patch, double lambda);

struct BlowupSelection {
  int node = -1;
  double x = 0, y = 0;
  double lambda = 0;  // |sigma| at the node
  double r = 0;       // distance to the boundary of the intrinsic disk
  double h_max = 0;
  std::size_t disk_nodes = 0;
};

/// Dijkstra distances over the 8-neighbour graph of mask nodes, edge length
/// the 3D chord between graph points. Sources get distance 0; unreachable
/// nodes are +inf. When `allowed` is nonempty, only those nodes are visited.
std::vector<double> graph_distances(const GraphPatch& patch, const std::vector<int>& sources,
                                    const std::vector<char>& allowed = {});

/// Maximizes h(q) = |sigma(q)| d(q, boundary of D) over the intrinsic disk
/// D of the given radius around the node nearest `center`. Ties go to the
/// lowest node index.
BlowupSelection blowup_select(const GraphPatch& patch, double cx, double cy, double radius);
/// Same with an explicit |sigma| field (one value per node).
BlowupSelection blowup_select(const GraphPatch& patch, const std::vector<double>& sigma, double cx,
                              double cy, double radius);

/// h(q) for every node of the intrinsic disk (NaN outside it).
std::vector<double> h_function(const GraphPatch& patch, const std::vector<double>& sigma, double cx,
                               double cy, double radius);

}  // namespace wlab
