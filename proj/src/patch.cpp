#include "wlab/patch.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "wlab/error.hpp"

namespace wlab {

namespace {

constexpr double kSnap = 1e-3;

// Weights of the three-point first and second derivative along a line with
// arm lengths am (backward) and ap (forward): {minus, centre, plus}.
std::array<double, 3> d1_weights(double am, double ap) {
  return {-ap / (am * (am + ap)), (ap - am) / (am * ap), am / (ap * (am + ap))};
}
std::array<double, 3> d2_weights(double am, double ap) {
  return {2 / (am * (am + ap)), -2 / (am * ap), 2 / (ap * (am + ap))};
}

}  // namespace

GraphPatch GraphPatch::rectangle(double x0, double y0, double x1, double y1, double h,
                                 const Field2& boundary) {
  if (!(x1 > x0) || !(y1 > y0) || !(h > 0)) throw RejectedInput("rectangle needs x1 > x0, y1 > y0, h > 0");
  const int n = std::max(2, static_cast<int>(std::lround((x1 - x0) / h)));
  GraphPatch p;
  p.shape_ = Shape::Rectangle;
  p.h_ = (x1 - x0) / n;
  p.nx_ = n + 1;
  p.ny_ = std::max(2, static_cast<int>(std::lround((y1 - y0) / p.h_))) + 1;
  p.x0_ = x0;
  p.y0_ = y0;
  p.cx_ = 0.5 * (x0 + x1);
  p.cy_ = 0.5 * (y0 + y1);
  p.role_.assign(static_cast<std::size_t>(p.nx_) * p.ny_, Role::Interior);
  p.u_.assign(p.role_.size(), 0.0);
  for (int j = 0; j < p.ny_; ++j)
    for (int i = 0; i < p.nx_; ++i)
      if (i == 0 || j == 0 || i == p.nx_ - 1 || j == p.ny_ - 1) p.role_[p.index(i, j)] = Role::Boundary;
  p.index_interior();
  p.build_arms(&boundary);
  p.set_boundary(boundary);
  return p;
}

GraphPatch GraphPatch::disk(double cx, double cy, double radius, double h, const Field2& boundary) {
  if (!(radius > 0) || !(h > 0) || h > radius) throw RejectedInput("disk needs 0 < h <= radius");
  GraphPatch p;
  p.shape_ = Shape::Disk;
  const int n = static_cast<int>(std::floor(radius / h)) + 1;
  p.nx_ = p.ny_ = 2 * n + 1;
  p.h_ = h;
  p.x0_ = cx - n * h;
  p.y0_ = cy - n * h;
  p.cx_ = cx;
  p.cy_ = cy;
  p.radius_ = radius;
  p.role_.assign(static_cast<std::size_t>(p.nx_) * p.ny_, Role::Outside);
  p.u_.assign(p.role_.size(), 0.0);
  for (std::size_t k = 0; k < p.role_.size(); ++k) {
    const double d = std::hypot(p.x(k) - cx, p.y(k) - cy);
    if (d < radius - kSnap * h) p.role_[k] = Role::Interior;
    else if (d <= radius + kSnap * h) p.role_[k] = Role::Boundary;
  }
  p.index_interior();
  p.build_arms(&boundary);
  p.set_boundary(boundary);
  return p;
}

void GraphPatch::index_interior() {
  interior_.clear();
  unknown_.assign(role_.size(), -1);
  for (std::size_t k = 0; k < role_.size(); ++k) {
    if (role_[k] != Role::Interior) continue;
    unknown_[k] = static_cast<int>(interior_.size());
    interior_.push_back(static_cast<int>(k));
  }
  if (interior_.empty()) throw RejectedInput("patch has no interior nodes");
}

void GraphPatch::build_arms(const Field2* boundary) {
  arms_.assign(interior_.size(), {});
  for (std::size_t m = 0; m < interior_.size(); ++m) {
    const int k = interior_[m];
    const int i = k % nx_, j = k / nx_;
    for (int d = 0; d < 8; ++d) {
      const int di = kDirs[d][0], dj = kDirs[d][1];
      const double full = h_ * std::hypot(di, dj);
      Arm arm;
      const int ni = i + di, nj = j + dj;
      const bool on_grid = ni >= 0 && nj >= 0 && ni < nx_ && nj < ny_;
      if (on_grid && role_[index(ni, nj)] != Role::Outside) {
        arm.node = index(ni, nj);
        arm.length = full;
      } else {
        if (shape_ != Shape::Disk) throw Error("rectangle interior node without a full stencil");
        const double ex = di / std::hypot(di, dj), ey = dj / std::hypot(di, dj);
        const double dx = x(k) - cx_, dy = y(k) - cy_;
        const double b = dx * ex + dy * ey;
        const double c = dx * dx + dy * dy - radius_ * radius_;
        const double a = -b + std::sqrt(b * b - c);
        arm.length = std::min(a, full);
        arm.value = boundary ? (*boundary)(x(k) + arm.length * ex, y(k) + arm.length * ey) : 0.0;
      }
      arms_[m][d] = arm;
    }
  }
}

int GraphPatch::nearest_node(double px, double py) const {
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < role_.size(); ++k) {
    if (role_[k] == Role::Outside) continue;
    const double d = std::hypot(x(k) - px, y(k) - py);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(k);
    }
  }
  return best;
}

void GraphPatch::set_interior(const Field2& fn) {
  for (int k : interior_) u_[k] = fn(x(k), y(k));
}

void GraphPatch::set_interior_values(const std::vector<double>& v) {
  if (v.size() != interior_.size()) throw RejectedInput("interior value count mismatch");
  for (std::size_t m = 0; m < interior_.size(); ++m) u_[interior_[m]] = v[m];
}

void GraphPatch::set_boundary(const Field2& fn) {
  for (std::size_t k = 0; k < role_.size(); ++k)
    if (role_[k] == Role::Boundary) u_[k] = fn(x(k), y(k));
  for (std::size_t m = 0; m < interior_.size(); ++m) {
    const int k = interior_[m];
    for (int d = 0; d < 8; ++d) {
      auto& arm = arms_[m][d];
      if (arm.node >= 0) continue;
      const double n = std::hypot(kDirs[d][0], kDirs[d][1]);
      arm.value = fn(x(k) + arm.length * kDirs[d][0] / n, y(k) + arm.length * kDirs[d][1] / n);
    }
  }
}

GraphPatch::Stencil GraphPatch::stencil(std::size_t k) const {
  Stencil st;
  const auto& a = arms(k);
  st.node[0] = static_cast<int>(k);
  for (int d = 0; d < 8; ++d) {
    st.node[d + 1] = a[d].node;
    st.fixed[d + 1] = a[d].value;
  }
  // Lines: x -> (p, r), y -> (q, t), diagonals -> s.
  auto line = [&](int plus, int minus, std::array<double, 3> wts, std::array<double, 9>& into, double scale) {
    into[0] += scale * wts[1];
    into[minus + 1] += scale * wts[0];
    into[plus + 1] += scale * wts[2];
  };
  line(0, 1, d1_weights(a[1].length, a[0].length), st.w[0], 1.0);
  line(2, 3, d1_weights(a[3].length, a[2].length), st.w[1], 1.0);
  line(0, 1, d2_weights(a[1].length, a[0].length), st.w[2], 1.0);
  line(4, 5, d2_weights(a[5].length, a[4].length), st.w[3], 0.5);
  line(6, 7, d2_weights(a[7].length, a[6].length), st.w[3], -0.5);
  line(2, 3, d2_weights(a[3].length, a[2].length), st.w[4], 1.0);
  return st;
}

Jet2 GraphPatch::jet(std::size_t k) const { return jet(k, u_); }

Jet2 GraphPatch::jet(std::size_t k, const std::vector<double>& u) const {
  const auto st = stencil(k);
  std::array<double, 9> v{};
  for (int e = 0; e < 9; ++e) v[e] = st.node[e] >= 0 ? u[st.node[e]] : st.fixed[e];
  std::array<double, 5> c{};
  for (int comp = 0; comp < 5; ++comp)
    for (int e = 0; e < 9; ++e) c[comp] += st.w[comp][e] * v[e];
  return {c[0], c[1], c[2], c[3], c[4]};
}

GraphPatch GraphPatch::rescaled(double lambda) const {
  if (!(lambda > 0)) throw RejectedInput("rescaling factor must be positive");
  GraphPatch p = *this;
  p.h_ *= lambda;
  p.x0_ *= lambda;
  p.y0_ *= lambda;
  p.cx_ *= lambda;
  p.cy_ *= lambda;
  p.radius_ *= lambda;
  for (auto& v : p.u_) v *= lambda;
  for (auto& arms : p.arms_)
    for (auto& a : arms) {
      a.length *= lambda;
      a.value *= lambda;
    }
  return p;
}

void GraphPatch::write(const std::string& csv_path, const std::string& json_path) const {
  std::ofstream csv(csv_path);
  if (!csv) throw Error("cannot write " + csv_path);
  csv.precision(17);
  csv << "x,y,u\n";
  for (std::size_t k = 0; k < role_.size(); ++k)
    if (in_mask(k)) csv << x(k) << ',' << y(k) << ',' << u_[k] << '\n';

  nlohmann::json j;
  j["shape"] = shape_ == Shape::Disk ? "disk" : "rectangle";
  j["h"] = h_;
  j["nx"] = nx_;
  j["ny"] = ny_;
  j["x0"] = x0_;
  j["y0"] = y0_;
  j["center"] = {cx_, cy_};
  j["radius"] = radius_;
  std::vector<int> mask(role_.size());
  for (std::size_t k = 0; k < role_.size(); ++k) mask[k] = static_cast<int>(role_[k]);
  j["mask"] = mask;
  nlohmann::json cuts = nlohmann::json::array();
  for (std::size_t m = 0; m < interior_.size(); ++m)
    for (int d = 0; d < 8; ++d)
      if (arms_[m][d].node < 0) cuts.push_back({interior_[m], d, arms_[m][d].length, arms_[m][d].value});
  j["boundary"] = {{"cuts", cuts}, {"note", "boundary node values are the CSV rows with mask 2"}};
  std::ofstream js(json_path);
  if (!js) throw Error("cannot write " + json_path);
  js << j.dump(2) << '\n';
}

GraphPatch GraphPatch::read(const std::string& csv_path, const std::string& json_path) {
  std::ifstream js(json_path);
  if (!js) throw Error("cannot read " + json_path);
  GraphPatch p;
  try {
    const auto j = nlohmann::json::parse(js);
    p.shape_ = j.at("shape").get<std::string>() == "disk" ? Shape::Disk : Shape::Rectangle;
    p.h_ = j.at("h").get<double>();
    p.nx_ = j.at("nx").get<int>();
    p.ny_ = j.at("ny").get<int>();
    p.x0_ = j.at("x0").get<double>();
    p.y0_ = j.at("y0").get<double>();
    p.cx_ = j.at("center").at(0).get<double>();
    p.cy_ = j.at("center").at(1).get<double>();
    p.radius_ = j.at("radius").get<double>();
    const auto mask = j.at("mask").get<std::vector<int>>();
    if (mask.size() != static_cast<std::size_t>(p.nx_) * p.ny_) throw ParseError("mask size mismatch");
    for (int m : mask) {
      if (m < 0 || m > 2) throw ParseError("mask entries must be 0, 1 or 2");
      p.role_.push_back(static_cast<Role>(m));
    }
    p.u_.assign(p.role_.size(), 0.0);
    p.index_interior();
    p.build_arms(nullptr);
    for (const auto& c : j.at("boundary").at("cuts")) {
      const int k = c.at(0).get<int>();
      const int d = c.at(1).get<int>();
      if (k < 0 || static_cast<std::size_t>(k) >= p.role_.size() || p.unknown_[k] < 0 || d < 0 || d > 7)
        throw ParseError("bad cut record " + c.dump());
      auto& arm = p.arms_[p.unknown_[k]][d];
      if (arm.node >= 0) throw ParseError("cut record on a full arm: " + c.dump());
      arm.length = c.at(2).get<double>();
      arm.value = c.at(3).get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad patch header: ") + e.what());
  }

  std::ifstream csv(csv_path);
  if (!csv) throw Error("cannot read " + csv_path);
  std::string line;
  std::getline(csv, line);
  std::size_t k = 0;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    while (k < p.role_.size() && !p.in_mask(k)) ++k;
    if (k >= p.role_.size()) throw ParseError("patch CSV has more rows than the mask");
    std::istringstream row(line);
    std::string cell;
    std::array<double, 3> v{};
    for (int c = 0; c < 3; ++c) {
      if (!std::getline(row, cell, ',')) throw ParseError("patch CSV row needs x,y,u: " + line);
      v[c] = std::stod(cell);
    }
    p.u_[k++] = v[2];
  }
  while (k < p.role_.size() && !p.in_mask(k)) ++k;
  if (k != p.role_.size()) throw ParseError("patch CSV has fewer rows than the mask");
  return p;
}

}  // namespace wlab
