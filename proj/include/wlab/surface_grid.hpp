#pragma once

#include <Eigen/Core>
#include <functional>

namespace wlab {

using Vec3 = Eigen::Vector3d;
using ParametricSurface = std::function<Vec3(double, double)>;

/// Derivatives of X at (u, v) by fourth-order central differences.
struct SurfaceJet {
  Vec3 X, Xu, Xv, Xuu, Xuv, Xvv;
};

SurfaceJet surface_jet(const ParametricSurface& X, double u, double v, double h);

/// Fundamental forms and curvatures for the normal N = Xu x Xv / |Xu x Xv|.
struct SurfaceCurvatures {
  Vec3 N;
  double E = 0, F = 0, G = 0;
  double e = 0, f = 0, g = 0;
  double H = 0, K = 0;
  double k1 = 0, k2 = 0;
};

SurfaceCurvatures surface_curvatures(const SurfaceJet& j);

/// Unit normal of X at (u, v) from fourth-order differences.
Vec3 surface_normal(const ParametricSurface& X, double u, double v, double h);

/// The surface X + a N, with N differenced at step h.
ParametricSurface offset_surface(ParametricSurface X, double a, double h);

/// |g_zbar|^2 / |g_z|^2 for the stereographic Gauss map
/// g = (N1 + i N2) / (1 - N3), z = u + i v, by differences of step h.
double stereographic_beltrami_ratio(const ParametricSurface& X, double u, double v, double h);

}  // namespace wlab
