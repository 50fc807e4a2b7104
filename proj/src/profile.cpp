#include "wlab/profile.hpp"

#include <cmath>
#include <fstream>

#include "wlab/error.hpp"

namespace wlab {

const char* to_string(ProfileCurve::Stop s) {
  switch (s) {
    case ProfileCurve::Stop::Length: return "length";
    case ProfileCurve::Stop::Axis: return "axis";
    case ProfileCurve::Stop::DomainExit: return "domain_exit";
  }
  return "length";
}

void ProfileCurve::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out.precision(17);
  out << "s,r,z,theta,kappa_m,kappa_p\n";
  for (std::size_t i = 0; i < size(); ++i)
    out << s[i] << ',' << r[i] << ',' << z[i] << ',' << theta[i] << ',' << kappa_m[i] << ',' << kappa_p[i] << '\n';
}

namespace {

struct State {
  double r, z, th;
};

State rhs(const Relation& rel, const State& y) {
  if (!(y.r > 0)) throw DomainError("profile reached the axis");
  return {std::cos(y.th), std::sin(y.th), rel.f(std::sin(y.th) / y.r)};
}

State axpy(const State& y, double h, const State& k) { return {y.r + h * k.r, y.z + h * k.z, y.th + h * k.th}; }

}  // namespace

ProfileCurve rotational_profile(const Relation& rel, const ProfileSeed& seed, const ProfileOptions& opt) {
  if (!(opt.step > 0) || !(opt.s_max > 0)) throw RejectedInput("profile step and length must be positive");
  if (!(seed.r0 > 0)) throw RejectedInput("profile seed needs r0 > 0");
  ProfileCurve c;
  State y{seed.r0, seed.z0, seed.theta0};
  double s = 0;
  auto record = [&](const State& st, double kp, double km) {
    c.s.push_back(s);
    c.r.push_back(st.r);
    c.z.push_back(st.z);
    c.theta.push_back(st.th);
    c.kappa_p.push_back(kp);
    c.kappa_m.push_back(km);
  };
  {
    const double kp = std::sin(y.th) / y.r;
    double km;
    try {
      km = rel.f(kp);
    } catch (const DomainError& e) {
      throw RejectedInput(std::string("seed curvature outside the domain of f: ") + e.what());
    }
    record(y, kp, km);
  }
  const auto n = static_cast<long>(std::ceil(opt.s_max / opt.step - 1e-9));
  for (long i = 0; i < n; ++i) {
    const double h = std::min(opt.step, opt.s_max - s);
    State next;
    double kp = 0, km = 0;
    try {
      const State k1 = rhs(rel, y);
      const State k2 = rhs(rel, axpy(y, h / 2, k1));
      const State k3 = rhs(rel, axpy(y, h / 2, k2));
      const State k4 = rhs(rel, axpy(y, h, k3));
      next = {y.r + h / 6 * (k1.r + 2 * k2.r + 2 * k3.r + k4.r),
              y.z + h / 6 * (k1.z + 2 * k2.z + 2 * k3.z + k4.z),
              y.th + h / 6 * (k1.th + 2 * k2.th + 2 * k3.th + k4.th)};
      if (next.r < opt.r_min) {
        c.stop = ProfileCurve::Stop::Axis;
        c.message = "r fell below r_min at s = " + std::to_string(s + h);
        return c;
      }
      kp = std::sin(next.th) / next.r;
      km = rel.f(kp);
    } catch (const DomainError& e) {
      const bool axis = !(y.r > opt.r_min);
      c.stop = axis ? ProfileCurve::Stop::Axis : ProfileCurve::Stop::DomainExit;
      c.message = std::string(e.what()) + " near s = " + std::to_string(s);
      return c;
    }
    y = next;
    s += h;
    record(y, kp, km);
  }
  c.stop = ProfileCurve::Stop::Length;
  return c;
}

std::optional<double> detect_period(const ProfileCurve& c, double tol) {
  if (c.size() < 3) return std::nullopt;
  const double th0 = c.theta[0];
  const double dir = c.kappa_m[0];
  if (dir == 0.0) return std::nullopt;
  // Skip the initial neighbourhood until theta has moved away from th0.
  std::size_t i = 1;
  while (i < c.size() && std::abs(c.theta[i] - th0) < 10 * tol) ++i;
  for (; i + 1 < c.size(); ++i) {
    const double a = c.theta[i] - th0, b = c.theta[i + 1] - th0;
    const bool crosses = dir > 0 ? (a < 0 && b >= 0) : (a > 0 && b <= 0);
    if (!crosses) continue;
    const double w = a / (a - b);
    const double r = c.r[i] + w * (c.r[i + 1] - c.r[i]);
    if (std::abs(r - c.r[0]) <= tol * std::max(1.0, std::abs(c.r[0]))) return c.s[i] + w * (c.s[i + 1] - c.s[i]);
  }
  return std::nullopt;
}

std::vector<double> profile_angle_function(const ProfileCurve& c) {
  std::vector<double> nu(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) nu[i] = std::cos(c.theta[i]);
  return nu;
}

PlaneCurve offset_profile(const ProfileCurve& c, double a) {
  PlaneCurve out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    out.r.push_back(c.r[i] - a * std::sin(c.theta[i]));
    out.z.push_back(c.z[i] + a * std::cos(c.theta[i]));
  }
  return out;
}

}  // namespace wlab
