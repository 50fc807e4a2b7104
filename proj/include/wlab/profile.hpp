#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wlab/relation.hpp"

namespace wlab {

/// Meridian of a rotational surface, arclength parametrized:
/// r' = cos(theta), z' = sin(theta). The normal is (-sin theta, cos theta)
/// in the (r, z) plane, so kappa_m = theta' and kappa_p = sin(theta) / r.
struct ProfileCurve {
  enum class Stop { Length, Axis, DomainExit };

  std::vector<double> s, r, z, theta, kappa_m, kappa_p;
  Stop stop = Stop::Length;
  std::string message;

  std::size_t size() const { return s.size(); }
  void write_csv(const std::string& path) const;
};

const char* to_string(ProfileCurve::Stop s);

struct ProfileSeed {
  double r0 = 1;
  double z0 = 0;
  double theta0 = 0;
};

struct ProfileOptions {
  double step = 1e-3;
  double s_max = 10;
  double r_min = 1e-6;
};

/// Fixed-step RK4 for theta' = f(sin(theta) / r). Stops at s_max, at the
/// axis (r < r_min) or when sin(theta)/r leaves the domain of f; the curve
/// keeps every accepted sample.
ProfileCurve rotational_profile(const Relation& rel, const ProfileSeed& seed, const ProfileOptions& opt = {});

/// Arclength of the first return of (r, theta) to the seed values: the
/// first crossing of theta0 in the starting direction at which r is within
/// `tol` of r0. Empty when the curve never returns.
std::optional<double> detect_period(const ProfileCurve& c, double tol = 1e-4);

/// Angle function nu = cos(theta) along the profile.
std::vector<double> profile_angle_function(const ProfileCurve& c);

struct PlaneCurve {
  std::vector<double> r, z;
};

/// Points offset by distance a along the profile normal.
PlaneCurve offset_profile(const ProfileCurve& c, double a);

}  // namespace wlab
