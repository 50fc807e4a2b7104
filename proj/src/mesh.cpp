#include "wlab/mesh.hpp"

#include <Eigen/Geometry>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "wlab/error.hpp"
#include "wlab/jets.hpp"
#include "wlab/parallel.hpp"

namespace wlab {

TriangleMesh parse_obj(std::istream& in, std::vector<std::string>* warnings) {
  TriangleMesh mesh;
  std::string line;
  std::size_t lineno = 0;
  std::set<std::string> skipped;
  auto warn = [&](const std::string& w) {
    if (warnings) warnings->push_back(w);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z)) throw ParseError("line " + std::to_string(lineno) + ": bad vertex record");
      mesh.vertices.emplace_back(x, y, z);
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ls >> tok) {
        const std::string head = tok.substr(0, tok.find('/'));
        int i;
        try {
          i = std::stoi(head);
        } catch (const std::exception&) {
          throw ParseError("line " + std::to_string(lineno) + ": bad face index '" + tok + "'");
        }
        const int n = static_cast<int>(mesh.vertices.size());
        const int k = i > 0 ? i - 1 : n + i;
        if (i == 0 || k < 0 || k >= n)
          throw ParseError("line " + std::to_string(lineno) + ": face index out of range");
        idx.push_back(k);
      }
      if (idx.size() != 3) {
        warn("line " + std::to_string(lineno) + ": non-triangular face ignored");
        continue;
      }
      mesh.faces.push_back({idx[0], idx[1], idx[2]});
    } else if (skipped.insert(tag).second) {
      warn("record type '" + tag + "' ignored");
    }
  }
  return mesh;
}

TriangleMesh read_obj(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  return parse_obj(in, warnings);
}

void write_obj(const TriangleMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out.precision(17);
  for (const auto& v : mesh.vertices) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& f : mesh.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

namespace {

void flip(TriangleMesh& m) {
  for (auto& f : m.faces) std::swap(f[1], f[2]);
}

}  // namespace

TriangleMesh icosphere(double radius, int subdivisions, bool inward) {
  const double t = (1 + std::sqrt(5.0)) / 2;
  TriangleMesh m;
  for (const auto& v : std::vector<Vec3>{{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                                         {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}})
    m.vertices.push_back(v.normalized());
  // Outward (counter-clockwise seen from outside).
  m.faces = {{0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
             {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8},
             {3, 8, 9}, {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      m.vertices.push_back((m.vertices[a] + m.vertices[b]).normalized());
      const int id = static_cast<int>(m.vertices.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(m.faces.size() * 4);
    for (const auto& f : m.faces) {
      const int a = midpoint(f[0], f[1]), b = midpoint(f[1], f[2]), c = midpoint(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({f[1], b, a});
      next.push_back({f[2], c, b});
      next.push_back({a, b, c});
    }
    m.faces.swap(next);
  }
  for (auto& v : m.vertices) v *= radius;
  if (inward) flip(m);
  return m;
}

TriangleMesh cylinder_mesh(double radius, double height, int around, int along, bool inward) {
  if (around < 3 || along < 1) throw RejectedInput("cylinder mesh needs around >= 3, along >= 1");
  TriangleMesh m;
  for (int j = 0; j <= along; ++j)
    for (int i = 0; i < around; ++i) {
      const double phi = 2 * std::numbers::pi * i / around;
      m.vertices.emplace_back(radius * std::cos(phi), radius * std::sin(phi), height * j / along - height / 2);
    }
  auto id = [&](int i, int j) { return j * around + (i % around); };
  for (int j = 0; j < along; ++j)
    for (int i = 0; i < around; ++i) {
      // Outward winding.
      m.faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  if (inward) flip(m);
  return m;
}

TriangleMesh flat_mesh(double size, int n) {
  if (n < 2) throw RejectedInput("flat mesh needs n >= 2");
  TriangleMesh m;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) m.vertices.emplace_back(size * i / n - size / 2, size * j / n - size / 2, 0.0);
  auto id = [&](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      m.faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return m;
}

MeshDiagram mesh_diagram(const TriangleMesh& mesh) {
  const std::size_t nv = mesh.vertices.size();
  std::map<std::pair<int, int>, int> edge_faces;
  std::vector<std::set<int>> ring(nv);
  std::vector<Vec3> normal(nv, Vec3::Zero());
  for (const auto& f : mesh.faces) {
    for (int e = 0; e < 3; ++e) {
      const int a = f[e], b = f[(e + 1) % 3];
      if (a == b) throw RejectedInput("degenerate face with repeated vertex");
      if (++edge_faces[std::minmax(a, b)] > 2) throw RejectedInput("non-manifold edge in mesh");
      ring[a].insert(b);
      ring[b].insert(a);
    }
    const Vec3 n = (mesh.vertices[f[1]] - mesh.vertices[f[0]]).cross(mesh.vertices[f[2]] - mesh.vertices[f[0]]);
    for (int v : f) normal[v] += n;
  }
  std::vector<char> boundary(nv, 0);
  for (const auto& [e, count] : edge_faces)
    if (count == 1) boundary[e.first] = boundary[e.second] = 1;

  enum Outcome : char { kSkipBoundary, kSkipDegenerate, kOk };
  std::vector<Outcome> outcome(nv, kSkipBoundary);
  std::vector<std::array<double, 2>> k(nv);
  parallel_for(nv, [&](std::size_t v) {
    if (boundary[v] || ring[v].empty()) {
      outcome[v] = ring[v].empty() ? kSkipDegenerate : kSkipBoundary;
      return;
    }
    std::set<int> two(ring[v]);
    for (int a : ring[v]) two.insert(ring[a].begin(), ring[a].end());
    two.erase(static_cast<int>(v));
    const double len = normal[v].norm();
    if (two.size() < 5 || !(len > 0)) {
      outcome[v] = kSkipDegenerate;
      return;
    }
    const Vec3 n = normal[v] / len;
    const Vec3 seed = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 t1 = n.cross(seed).normalized();
    const Vec3 t2 = n.cross(t1);
    Eigen::MatrixXd A(static_cast<int>(two.size()), 5);
    Eigen::VectorXd b(static_cast<int>(two.size()));
    int row = 0;
    for (int w : two) {
      const Vec3 d = mesh.vertices[w] - mesh.vertices[v];
      const double x = d.dot(t1), y = d.dot(t2);
      A.row(row) << x * x, x * y, y * y, x, y;
      b[row] = d.dot(n);
      ++row;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (!(sv[sv.size() - 1] > 0) || sv[0] / sv[sv.size() - 1] > 1e8) {
      outcome[v] = kSkipDegenerate;
      return;
    }
    const Eigen::VectorXd c = svd.solve(b);
    k[v] = principal_curvatures(Jet2{c[3], c[4], 2 * c[0], c[1], 2 * c[2]});
    outcome[v] = kOk;
  });

  MeshDiagram out;
  out.diagram.source = "mesh";
  for (std::size_t v = 0; v < nv; ++v) {
    switch (outcome[v]) {
      case kSkipBoundary: ++out.boundary_skipped; break;
      case kSkipDegenerate: ++out.degenerate_skipped; break;
      case kOk:
        out.diagram.add(k[v][0], k[v][1]);
        out.vertex.push_back(static_cast<int>(v));
        break;
    }
  }
  return out;
}

}  // namespace wlab
