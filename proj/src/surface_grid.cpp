#include "wlab/surface_grid.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <complex>

#include "wlab/error.hpp"

namespace wlab {

namespace {

// Five-point first and second derivative weights.
template <class F>
Vec3 d1(const F& fn, double h) {
  return (-fn(2) + 8 * fn(1) - 8 * fn(-1) + fn(-2)) / (12 * h);
}

template <class F>
Vec3 d2(const F& fn, double h) {
  return (-fn(2) + 16 * fn(1) - 30 * fn(0) + 16 * fn(-1) - fn(-2)) / (12 * h * h);
}

}  // namespace

SurfaceJet surface_jet(const ParametricSurface& X, double u, double v, double h) {
  SurfaceJet j;
  j.X = X(u, v);
  j.Xu = d1([&](int k) { return X(u + k * h, v); }, h);
  j.Xv = d1([&](int k) { return X(u, v + k * h); }, h);
  j.Xuu = d2([&](int k) { return X(u + k * h, v); }, h);
  j.Xvv = d2([&](int k) { return X(u, v + k * h); }, h);
  // Mixed derivative: first difference in u of the first difference in v.
  j.Xuv = d1([&](int k) { return d1([&](int l) { return X(u + k * h, v + l * h); }, h); }, h);
  return j;
}

SurfaceCurvatures surface_curvatures(const SurfaceJet& j) {
  SurfaceCurvatures c;
  const Vec3 n = j.Xu.cross(j.Xv);
  const double len = n.norm();
  if (!(len > 0)) throw DomainError("degenerate parametrization: Xu x Xv = 0");
  c.N = n / len;
  c.E = j.Xu.dot(j.Xu);
  c.F = j.Xu.dot(j.Xv);
  c.G = j.Xv.dot(j.Xv);
  c.e = j.Xuu.dot(c.N);
  c.f = j.Xuv.dot(c.N);
  c.g = j.Xvv.dot(c.N);
  const double det = c.E * c.G - c.F * c.F;
  c.H = (c.e * c.G - 2 * c.f * c.F + c.g * c.E) / (2 * det);
  c.K = (c.e * c.g - c.f * c.f) / det;
  const double root = std::sqrt(std::max(0.0, c.H * c.H - c.K));
  c.k1 = c.H + root;
  c.k2 = c.H - root;
  return c;
}

Vec3 surface_normal(const ParametricSurface& X, double u, double v, double h) {
  const Vec3 xu = d1([&](int k) { return X(u + k * h, v); }, h);
  const Vec3 xv = d1([&](int k) { return X(u, v + k * h); }, h);
  const Vec3 n = xu.cross(xv);
  const double len = n.norm();
  if (!(len > 0)) throw DomainError("degenerate parametrization: Xu x Xv = 0");
  return n / len;
}

ParametricSurface offset_surface(ParametricSurface X, double a, double h) {
  return [X = std::move(X), a, h](double u, double v) { return Vec3(X(u, v) + a * surface_normal(X, u, v, h)); };
}

double stereographic_beltrami_ratio(const ParametricSurface& X, double u, double v, double h) {
  auto gauss = [&](double uu, double vv) {
    const Vec3 n = surface_normal(X, uu, vv, h);
    return std::complex<double>(n.x(), n.y()) / (1.0 - n.z());
  };
  auto diff = [&](auto fn) { return (-fn(2) + 8.0 * fn(1) - 8.0 * fn(-1) + fn(-2)) / (12 * h); };
  const auto gu = diff([&](int k) { return gauss(u + k * h, v); });
  const auto gv = diff([&](int k) { return gauss(u, v + k * h); });
  const std::complex<double> i(0, 1);
  const auto gz = 0.5 * (gu - i * gv);
  const auto gzb = 0.5 * (gu + i * gv);
  return std::norm(gzb) / std::norm(gz);
}

}  // namespace wlab
