#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wlab/geometry.hpp"
#include "wlab/scalar_function.hpp"

namespace wlab {

struct CurvatureDiagram {
  std::vector<CurvaturePair> samples;
  std::string source = "synthetic";  // patch | profile | mesh | synthetic

  void add(double a, double b) { samples.push_back(CurvaturePair::of(a, b)); }
  void write_csv(const std::string& path) const;
};

enum class QCClass { PlaneLike, NegativeBranch, PositiveBranch, Infeasible };
const char* to_string(QCClass c);

struct QCReport {
  QCClass classification = QCClass::PlaneLike;
  std::optional<double> gamma_star;
  std::optional<double> mu;
  std::optional<std::pair<double, double>> wedge_slopes;
  std::size_t neutral = 0;       // (0, 0) samples
  std::size_t umbilic_ignored = 0;  // umbilics dropped from a negative diagram
  std::string reason;
};

/// Curvatures with |k| <= this are treated as exact zeros.
inline constexpr double kZeroCurvature = 1e-13;

/// Per-sample ratio (k1^2 + k2^2) / (2 k1 k2). Samples with k1 k2 < 0 need
/// gamma <= ratio, samples with k1 k2 > 0 need gamma >= ratio; gamma_star is
/// the tightest value on the branch the diagram occupies.
QCReport qc_classify(const CurvatureDiagram& d);

/// gamma = (mu^2 + 1) / (mu^2 - 1), gamma <= -1, mu in [0, 1).
double gamma_mu(double gamma);
double mu_gamma(double mu);

/// Roots m1 <= m2 < 0 of m^2 - 2 gamma m + 1 = 0.
std::pair<double, double> gamma_to_wedge(double gamma);

/// R_phi = {x >= 0, phi1(x) <= y <= phi2(x)}; the starred region is its
/// image under (x, y) -> (-y, -x).
struct PhiRegion {
  ScalarFunction phi1;
  ScalarFunction phi2;
  bool starred = false;
  double s0 = -1;  // lower bound of phi1

  /// Checks s0 <= phi1 <= phi2 <= 0 and phi(0) = 0 on the samples.
  void validate(const std::vector<double>& x_samples) const;
};

struct RegionCheck {
  bool inside = true;
  std::optional<std::size_t> first_violation;
  std::optional<std::size_t> worst_violation;
  double worst_excess = 0;
};

RegionCheck region_membership(const CurvatureDiagram& d, const PhiRegion& reg);

struct Beltrami {
  double rho = 0;
  std::complex<double> mu;
};

/// rho = (E + G + 2 sqrt(EG - F^2)) / 4, mu = (E - G + 2iF) / (4 rho).
Beltrami beltrami_of_metric(double E, double F, double G);

/// ((k1 + k2) / (k1 - k2))^2; +inf at umbilics.
double gauss_beltrami_ratio(const CurvaturePair& pair);

}  // namespace wlab
