#include "wlab/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "wlab/error.hpp"

namespace wlab {

void CurvatureDiagram::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out.precision(17);
  out << "k1,k2\n";
  for (const auto& s : samples) out << s.k1 << ',' << s.k2 << '\n';
}

const char* to_string(QCClass c) {
  switch (c) {
    case QCClass::PlaneLike: return "plane_like";
    case QCClass::NegativeBranch: return "negative_branch";
    case QCClass::PositiveBranch: return "positive_branch";
    case QCClass::Infeasible: return "infeasible";
  }
  return "infeasible";
}

QCReport qc_classify(const CurvatureDiagram& d) {
  QCReport rep;
  double neg_min = std::numeric_limits<double>::infinity();
  double pos_max = -std::numeric_limits<double>::infinity();
  std::size_t neg = 0, pos = 0, pos_umbilic = 0, single_zero = 0;
  for (const auto& s : d.samples) {
    const bool z1 = std::abs(s.k1) <= kZeroCurvature;
    const bool z2 = std::abs(s.k2) <= kZeroCurvature;
    if (z1 && z2) {
      ++rep.neutral;
      continue;
    }
    if (z1 || z2) {
      ++single_zero;
      continue;
    }
    const double ratio = (s.k1 * s.k1 + s.k2 * s.k2) / (2 * s.k1 * s.k2);
    if (s.k1 * s.k2 < 0) {
      ++neg;
      neg_min = std::min(neg_min, ratio);
    } else {
      ++pos;
      if (s.k1 == s.k2) ++pos_umbilic;
      pos_max = std::max(pos_max, ratio);
    }
  }
  if (single_zero > 0) {
    rep.classification = QCClass::Infeasible;
    rep.reason = "a sample with exactly one zero curvature satisfies no inequality of this type";
    return rep;
  }
  if (neg > 0 && pos > 0 && pos_umbilic < pos) {
    rep.classification = QCClass::Infeasible;
    rep.reason = "samples with K < 0 and K > 0 coexist";
    return rep;
  }
  if (neg > 0) {
    rep.classification = QCClass::NegativeBranch;
    rep.umbilic_ignored = pos_umbilic;
    rep.gamma_star = neg_min;
    rep.mu = gamma_mu(neg_min);
    rep.wedge_slopes = gamma_to_wedge(neg_min);
    return rep;
  }
  if (pos > 0) {
    rep.classification = QCClass::PositiveBranch;
    rep.gamma_star = pos_max;
    rep.mu = std::sqrt((pos_max - 1) / (pos_max + 1));
    const double root = std::sqrt(std::max(0.0, pos_max * pos_max - 1));
    rep.wedge_slopes = std::make_pair(pos_max - root, pos_max + root);
    return rep;
  }
  rep.classification = QCClass::PlaneLike;
  rep.reason = "only flat samples";
  return rep;
}

double gamma_mu(double gamma) {
  if (!(gamma <= -1)) throw RejectedInput("gamma must be <= -1");
  if (std::isinf(gamma)) return 1.0;
  return std::sqrt((gamma + 1) / (gamma - 1));
}

double mu_gamma(double mu) {
  if (!(mu >= 0 && mu < 1)) throw RejectedInput("mu must lie in [0, 1)");
  return (mu * mu + 1) / ((mu - 1) * (mu + 1));
}

std::pair<double, double> gamma_to_wedge(double gamma) {
  if (!(gamma <= -1)) throw RejectedInput("wedge needs gamma <= -1");
  const double root = std::sqrt(gamma * gamma - 1);
  // The smaller-magnitude root via Vieta keeps m1 m2 = 1 accurate.
  const double m1 = gamma - root;
  return {m1, 1 / m1};
}

void PhiRegion::validate(const std::vector<double>& xs) const {
  if (std::abs(phi1(0.0)) > 1e-12 || std::abs(phi2(0.0)) > 1e-12)
    throw RejectedInput("phi1(0) and phi2(0) must vanish");
  double prev1 = 0, prev2 = 0;
  bool first = true;
  std::vector<double> sorted(xs);
  std::sort(sorted.begin(), sorted.end());
  for (double x : sorted) {
    if (x < 0) throw RejectedInput("phi samples must be >= 0");
    const double a = phi1(x), b = phi2(x);
    if (!(s0 <= a && a <= b && b <= 0))
      throw RejectedInput("need s0 <= phi1 <= phi2 <= 0 at x = " + std::to_string(x));
    if (!first && (a > prev1 + 1e-14 || b > prev2 + 1e-14))
      throw RejectedInput("phi must be non-increasing (x = " + std::to_string(x) + ")");
    prev1 = a;
    prev2 = b;
    first = false;
  }
}

RegionCheck region_membership(const CurvatureDiagram& d, const PhiRegion& reg) {
  RegionCheck out;
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    double x = d.samples[i].k1, y = d.samples[i].k2;
    if (reg.starred) {
      const double tx = -y, ty = -x;
      x = tx;
      y = ty;
    }
    double excess = std::max(0.0, -x);
    if (x >= 0) {
      double lo, hi;
      try {
        lo = reg.phi1(x);
        hi = reg.phi2(x);
        excess = std::max({excess, lo - y, y - hi});
      } catch (const DomainError&) {
        excess = std::numeric_limits<double>::infinity();
      }
    }
    if (excess > 0) {
      out.inside = false;
      if (!out.first_violation) out.first_violation = i;
      if (excess > out.worst_excess) {
        out.worst_excess = excess;
        out.worst_violation = i;
      }
    }
  }
  return out;
}

Beltrami beltrami_of_metric(double E, double F, double G) {
  const double det = E * G - F * F;
  if (!(E > 0) || !(G > 0) || !(det > 0)) throw RejectedInput("metric is not positive definite");
  Beltrami b;
  b.rho = (E + G + 2 * std::sqrt(det)) / 4;
  b.mu = std::complex<double>(E - G, 2 * F) / (4 * b.rho);
  return b;
}

double gauss_beltrami_ratio(const CurvaturePair& pair) {
  const double den = pair.k1 - pair.k2;
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  const double q = (pair.k1 + pair.k2) / den;
  return q * q;
}

}  // namespace wlab
