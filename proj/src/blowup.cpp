#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "wlab/error.hpp"
#include "wlab/solver.hpp"

namespace wlab {

std::vector<double> graph_distances(const GraphPatch& patch, const std::vector<int>& sources,
                                    const std::vector<char>& allowed) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(patch.size(), inf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (int s : sources) {
    dist[s] = 0;
    pq.push({0.0, s});
  }
  const auto& u = patch.values();
  while (!pq.empty()) {
    const auto [d, k] = pq.top();
    pq.pop();
    if (d > dist[k]) continue;
    const int i = k % patch.nx(), j = k / patch.nx();
    for (const auto& off : GraphPatch::kDirs) {
      const int ni = i + off[0], nj = j + off[1];
      if (ni < 0 || nj < 0 || ni >= patch.nx() || nj >= patch.ny()) continue;
      const int m = patch.index(ni, nj);
      if (!patch.in_mask(m)) continue;
      if (!allowed.empty() && !allowed[m]) continue;
      const double dx = patch.x(m) - patch.x(k), dy = patch.y(m) - patch.y(k), du = u[m] - u[k];
      const double nd = d + std::sqrt(dx * dx + dy * dy + du * du);
      if (nd < dist[m]) {
        dist[m] = nd;
        pq.push({nd, m});
      }
    }
  }
  return dist;
}

namespace {

struct Disk {
  std::vector<char> inside;
  std::vector<double> to_edge;
  std::size_t count = 0;
};

Disk intrinsic_disk(const GraphPatch& patch, double cx, double cy, double radius) {
  if (!(radius > 0)) throw RejectedInput("blow-up disk radius must be positive");
  const int c = patch.nearest_node(cx, cy);
  if (c < 0) throw RejectedInput("patch has no nodes");
  const auto from_center = graph_distances(patch, {c});
  Disk disk;
  disk.inside.assign(patch.size(), 0);
  for (std::size_t k = 0; k < patch.size(); ++k)
    if (from_center[k] <= radius) {
      disk.inside[k] = 1;
      ++disk.count;
    }
  if (disk.count == 0) throw RejectedInput("intrinsic disk is empty");

  // Edge of D: disk nodes that are not patch-interior or have a neighbour
  // outside D.
  std::vector<int> edge;
  for (std::size_t k = 0; k < patch.size(); ++k) {
    if (!disk.inside[k]) continue;
    bool on_edge = patch.role(k) != GraphPatch::Role::Interior;
    const int i = static_cast<int>(k) % patch.nx(), j = static_cast<int>(k) / patch.nx();
    for (const auto& off : GraphPatch::kDirs) {
      const int ni = i + off[0], nj = j + off[1];
      if (ni < 0 || nj < 0 || ni >= patch.nx() || nj >= patch.ny() || !disk.inside[patch.index(ni, nj)]) {
        on_edge = true;
        break;
      }
    }
    if (on_edge) edge.push_back(static_cast<int>(k));
  }
  disk.to_edge = graph_distances(patch, edge, disk.inside);
  return disk;
}

}  // namespace

std::vector<double> h_function(const GraphPatch& patch, const std::vector<double>& sigma, double cx,
                               double cy, double radius) {
  if (sigma.size() != patch.size()) throw RejectedInput("sigma field size mismatch");
  const auto disk = intrinsic_disk(patch, cx, cy, radius);
  std::vector<double> h(patch.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 0; k < patch.size(); ++k) {
    if (!disk.inside[k]) continue;
    const double d = disk.to_edge[k];
    if (d == 0.0) {
      h[k] = 0.0;
      continue;
    }
    if (!std::isfinite(sigma[k]))
      throw RejectedInput("|sigma| unavailable at node " + std::to_string(k) + " inside the disk");
    h[k] = sigma[k] * d;
  }
  return h;
}

BlowupSelection blowup_select(const GraphPatch& patch, const std::vector<double>& sigma, double cx,
                              double cy, double radius) {
  const auto h = h_function(patch, sigma, cx, cy, radius);
  const auto disk = intrinsic_disk(patch, cx, cy, radius);
  BlowupSelection sel;
  sel.disk_nodes = disk.count;
  sel.h_max = -1;
  for (std::size_t k = 0; k < patch.size(); ++k) {
    if (std::isnan(h[k])) continue;
    if (h[k] > sel.h_max) {
      sel.h_max = h[k];
      sel.node = static_cast<int>(k);
    }
  }
  if (sel.h_max <= 0) {
    // Flat field: every h vanishes; report the disk centre.
    sel.node = patch.nearest_node(cx, cy);
    sel.h_max = 0;
  }
  const auto k = static_cast<std::size_t>(sel.node);
  sel.x = patch.x(k);
  sel.y = patch.y(k);
  sel.r = disk.to_edge[k];
  sel.lambda = std::isfinite(sigma[k]) ? sigma[k] : 0.0;
  return sel;
}

BlowupSelection blowup_select(const GraphPatch& patch, double cx, double cy, double radius) {
  return blowup_select(patch, second_fundamental_norm_field(patch), cx, cy, radius);
}

}  // namespace wlab
