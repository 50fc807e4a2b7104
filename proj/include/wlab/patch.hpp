#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wlab/jets.hpp"

namespace wlab {

using Field2 = std::function<double(double, double)>;

/// Graph z = u(x, y) sampled on a uniform grid, node (i, j) at
/// (x0 + i h, y0 + j h), flat index j * nx + i.
///
/// Interior nodes carry unknowns. Each has eight arms (E, W, N, S, NE, SW,
/// NW, SE); an arm ends either at a grid node or, on disks, at the point
/// where it leaves the circle, which then carries its own Dirichlet value.
/// Boundary nodes and cut values are data and are never changed by the
/// solver.
class GraphPatch {
 public:
  enum class Shape { Rectangle, Disk };
  enum class Role : std::uint8_t { Outside = 0, Interior = 1, Boundary = 2 };

  struct Arm {
    int node = -1;  // -1: arm ends on the boundary curve
    double length = 0;
    double value = 0;  // Dirichlet value when node == -1
  };

  /// Offsets of the eight arm directions, paired along lines:
  /// (0,1) x, (2,3) y, (4,5) diagonal (1,1), (6,7) diagonal (-1,1).
  static constexpr std::array<std::array<int, 2>, 8> kDirs = {
      {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {-1, 1}, {1, -1}}};

  /// Outer ring of nodes is boundary. The spacing is adjusted so that the
  /// grid spans the rectangle exactly.
  /// Empty patch; only useful as a placeholder to assign into.
  GraphPatch() = default;

  static GraphPatch rectangle(double x0, double y0, double x1, double y1, double h,
                              const Field2& boundary);
  /// Grid centered on (cx, cy). Nodes within 1e-3 h of the circle become
  /// boundary nodes.
  static GraphPatch disk(double cx, double cy, double radius, double h, const Field2& boundary);

  Shape shape() const { return shape_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t size() const { return role_.size(); }
  double h() const { return h_; }
  double x0() const { return x0_; }
  double y0() const { return y0_; }
  double x(std::size_t k) const { return x0_ + static_cast<double>(k % nx_) * h_; }
  double y(std::size_t k) const { return y0_ + static_cast<double>(k / nx_) * h_; }
  std::array<double, 2> center() const { return {cx_, cy_}; }
  double radius() const { return radius_; }
  int index(int i, int j) const { return j * nx_ + i; }
  /// Grid node closest to (x, y) among non-outside nodes.
  int nearest_node(double x, double y) const;

  Role role(std::size_t k) const { return role_[k]; }
  bool in_mask(std::size_t k) const { return role_[k] != Role::Outside; }
  const std::vector<int>& interior() const { return interior_; }
  /// Position of node k in interior(), or -1.
  int unknown_index(std::size_t k) const { return unknown_[k]; }
  const std::array<Arm, 8>& arms(std::size_t k) const { return arms_[static_cast<std::size_t>(unknown_[k])]; }

  const std::vector<double>& values() const { return u_; }
  double value(std::size_t k) const { return u_[k]; }
  /// Overwrites the interior values (initial guesses).
  void set_interior(const Field2& fn);
  void set_interior_values(const std::vector<double>& per_unknown);
  /// Re-imposes Dirichlet data on boundary nodes and cut points.
  void set_boundary(const Field2& fn);

  struct Stencil {
    // Entry 0 is the node itself, entries 1..8 the arms.
    std::array<int, 9> node{};
    std::array<double, 9> fixed{};  // value used when node < 0
    std::array<std::array<double, 9>, 5> w{};  // weights for p, q, r, s, t
  };
  Stencil stencil(std::size_t k) const;
  Jet2 jet(std::size_t k) const;
  Jet2 jet(std::size_t k, const std::vector<double>& u) const;

  /// Coordinates and values multiplied by lambda.
  GraphPatch rescaled(double lambda) const;

  void write(const std::string& csv_path, const std::string& json_path) const;
  static GraphPatch read(const std::string& csv_path, const std::string& json_path);

 private:
  void index_interior();
  void build_arms(const Field2* boundary);

  Shape shape_ = Shape::Rectangle;
  int nx_ = 0, ny_ = 0;
  double x0_ = 0, y0_ = 0, h_ = 0;
  double cx_ = 0, cy_ = 0, radius_ = 0;
  std::vector<Role> role_;
  std::vector<int> interior_;
  std::vector<int> unknown_;
  std::vector<std::array<Arm, 8>> arms_;
  std::vector<double> u_;
};

}  // namespace wlab
