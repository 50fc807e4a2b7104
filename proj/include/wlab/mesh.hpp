#pragma once

#include <array>
#include <istream>
#include <string>
#include <vector>

#include "wlab/diagram.hpp"
#include "wlab/surface_grid.hpp"

namespace wlab {

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
};

/// Reads "v" and triangular "f" records (indices may carry /vt/vn parts or
/// be negative). Other records are skipped and noted in `warnings`.
TriangleMesh parse_obj(std::istream& in, std::vector<std::string>* warnings = nullptr);
TriangleMesh read_obj(const std::string& path, std::vector<std::string>* warnings = nullptr);
void write_obj(const TriangleMesh& mesh, const std::string& path);

// Generators. With inward = true the faces are wound so that the
// area-weighted normal points into the enclosed region, which makes
// spheres and cylinders positively curved.
TriangleMesh icosphere(double radius, int subdivisions, bool inward = true);
TriangleMesh cylinder_mesh(double radius, double height, int around, int along, bool inward = true);
TriangleMesh flat_mesh(double size, int n);

struct MeshDiagram {
  CurvatureDiagram diagram;
  std::vector<int> vertex;  // source vertex of each sample
  std::size_t boundary_skipped = 0;
  std::size_t degenerate_skipped = 0;
};

/// Per-vertex principal curvatures from a least-squares fit of
/// z = a x^2 + b xy + c y^2 + d x + e y over the 2-ring, in a frame whose
/// z axis is the area-weighted vertex normal. Boundary vertices and fits
/// with condition number above 1e8 are skipped. Non-manifold edges are an
/// error.
MeshDiagram mesh_diagram(const TriangleMesh& mesh);

}  // namespace wlab
