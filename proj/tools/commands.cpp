#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "wlab/diagram.hpp"
#include "wlab/error.hpp"
#include "wlab/geometry.hpp"
#include "wlab/jets.hpp"
#include "wlab/linop.hpp"
#include "wlab/mesh.hpp"
#include "wlab/profile.hpp"
#include "wlab/solver.hpp"

namespace wlab::cli {

namespace fs = std::filesystem;

void write_json(const Context& ctx, const std::string& name, const Json& j) {
  const auto path = fs::path(ctx.out_dir) / name;
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

namespace {

std::string out_path(const Context& ctx, const std::string& name) { return (fs::path(ctx.out_dir) / name).string(); }

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

// "relation" is either an inline record or the path of a JSON file holding one.
Relation relation_of(const Json& cfg) {
  const auto& r = cfg.at("relation");
  return relation_from_json(r.is_string() ? load_json_file(r.get<std::string>()) : r);
}

double positive(const Json& cfg, const char* key, double fallback) {
  const double v = cfg.value(key, fallback);
  if (!(v > 0)) throw ParseError(std::string(key) + " must be positive");
  return v;
}

// Exact spherical cap over a disk of radius R around (cx, cy), zero on the
// rim, mean curvature H0 for the upward normal.
Field2 cap_field(double H0, double R, double cx, double cy) {
  const double Rs = 1 / std::abs(H0);
  if (!(R < Rs)) throw RejectedInput("no spherical cap of this radius: need R < 1/|H0|");
  const double s = H0 > 0 ? 1.0 : -1.0;
  return [=](double x, double y) {
    const double rho2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
    return s * (std::sqrt(Rs * Rs - R * R) - std::sqrt(std::max(0.0, Rs * Rs - rho2)));
  };
}

Field2 field_of(const Json& j, const Json& domain) {
  const auto kind = j.value("kind", std::string("zero"));
  if (kind == "zero") return [](double, double) { return 0.0; };
  if (kind == "affine") {
    const double a = j.value("a", 0.0), b = j.value("b", 0.0), c = j.value("c", 0.0);
    return [=](double x, double y) { return a + b * x + c * y; };
  }
  if (kind == "cap") {
    const auto center = domain.value("center", Json::array({0.0, 0.0}));
    return cap_field(j.at("H0").get<double>(), j.value("radius", domain.value("radius", 1.0)), center[0].get<double>(),
                     center[1].get<double>());
  }
  throw ParseError("unknown field kind '" + kind + "' (zero, affine, cap)");
}

GraphPatch patch_of(const Json& cfg, const Field2& boundary) {
  const auto& d = cfg.at("domain");
  const double h = positive(cfg, "h", 1.0 / 32);
  const auto shape = d.value("shape", std::string("disk"));
  if (shape == "disk") {
    const auto c = d.value("center", Json::array({0.0, 0.0}));
    return GraphPatch::disk(c[0].get<double>(), c[1].get<double>(), d.at("radius").get<double>(), h, boundary);
  }
  if (shape == "rectangle") {
    const auto lo = d.at("min"), hi = d.at("max");
    return GraphPatch::rectangle(lo[0].get<double>(), lo[1].get<double>(), hi[0].get<double>(), hi[1].get<double>(), h,
                                 boundary);
  }
  throw ParseError("unknown domain shape '" + shape + "'");
}

std::vector<double> linspace(const Json& j, double lo, double hi, int count) {
  lo = j.value("min", lo);
  hi = j.value("max", hi);
  count = j.value("count", count);
  if (count < 2 || !(hi > lo)) throw ParseError("grid needs count >= 2 and max > min");
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) v[i] = lo + (hi - lo) * i / (count - 1);
  return v;
}

Json pair_json(double a, double b) { return Json::array({a, b}); }

}  // namespace

// ---------------------------------------------------------------------------

int cmd_certify(const Context& ctx) {
  const auto& cfg = ctx.config;
  const Relation rel = relation_of(cfg);
  CertificationGrid grid;
  if (cfg.contains("grid")) {
    const auto& g = cfg.at("grid");
    grid.t_max = g.value("t_max", grid.t_max);
    grid.samples = g.value("samples", grid.samples);
    grid.t_min_positive = g.value("t_min", grid.t_min_positive);
  }
  const auto rep = certify_ellipticity(rel, grid);
  Json out;
  out["relation"] = relation_to_json(rel);
  out["report"] = report_to_json(rep);
  out["seed"] = ctx.seed;
  out["summary"] = !rep.is_elliptic ? "not elliptic"
                   : rep.uniform_constant_lambda ? "uniformly elliptic"
                                                 : "elliptic, not uniformly elliptic";
  const auto bound = derivative_bound_check(rel, grid);
  out["derivative_bound"] = {{"check", "sqrt(t)|g'(t)| < 1/2"}, {"ok", bound.ok}, {"sup", bound.sup}, {"worst_t", bound.worst_t}};
  if (rep.uniform_constant_lambda) {
    const auto samples = static_cast<std::size_t>(cfg.value("theta_samples", 2000));
    const auto est = uniform_ellipticity_lambda(rel, ThetaBox{}, samples, ctx.seed);
    out["theta_lambda"] = {{"check", "F_r xi^2 + F_s xi eta + F_t eta^2 >= lambda (xi^2 + eta^2) on Theta"},
                           {"lambda", est.lambda},
                           {"samples", est.samples},
                           {"certified", est.certified},
                           {"worst_jet", {est.worst.p, est.worst.q, est.worst.r, est.worst.s, est.worst.t}}};
  }
  out["checks"] = Json::array({"ellipticity 4t g'(t)^2 < 1", "uniform ellipticity 4t g'(t)^2 <= Lambda < 1",
                               "slope bounds Lambda1 <= -f' <= Lambda2", "umbilical constant f(alpha) = alpha",
                               "bounded branch t -+ g(t^2)"});
  write_json(ctx, "certify.json", out);
  return rep.is_elliptic ? kOk : kCertification;
}

int cmd_solve(const Context& ctx) {
  const auto& cfg = ctx.config;
  const Relation rel = relation_of(cfg);
  const auto& domain = cfg.at("domain");
  const Json bdata = cfg.value("boundary", Json::object());
  const Field2 boundary = field_of(bdata, domain);
  GraphPatch patch = patch_of(cfg, boundary);
  // Default initial guess: the boundary field extended inside.
  patch.set_interior(field_of(cfg.value("initial", bdata), domain));

  SolveOptions opt;
  opt.tol_res = positive(cfg, "tol_res", opt.tol_res);
  opt.max_iter = cfg.value("max_iter", opt.max_iter);

  Json out;
  out["relation"] = relation_to_json(rel);
  out["seed"] = ctx.seed;
  out["h"] = patch.h();
  out["unknowns"] = patch.interior().size();
  const auto c = patch.center();
  if (rel.kind() == RelationKind::Cmc && patch.shape() == GraphPatch::Shape::Disk) {
    const double H0 = rel.cmc_value();
    out["cap_family"] = {{"check", "spherical cap over a disk of radius R exists iff R < 1/|H0|"},
                         {"R", patch.radius()},
                         {"one_over_H0", H0 != 0 ? 1 / std::abs(H0) : INFINITY},
                         {"exists", H0 == 0 || patch.radius() < 1 / std::abs(H0)}};
  }

  SolveOutcome res;
  try {
    res = newton_solve(rel, patch, opt);
  } catch (const DomainError& e) {
    out["status"] = "diverged";
    out["message"] = std::string("initial guess rejected: ") + e.what();
    write_json(ctx, "solve.json", out);
    return kNoConvergence;
  }
  res.final_patch.write(out_path(ctx, "solution.csv"), out_path(ctx, "patch.json"));
  out["status"] = to_string(res.status);
  out["message"] = res.message;
  out["iterations"] = res.iterations;
  out["residual_sup"] = res.residual_sup;
  out["history"] = res.history;
  out["max_slope"] = res.max_slope;
  const int centre = res.final_patch.nearest_node(c[0], c[1]);
  out["center"] = {{"x", res.final_patch.x(centre)}, {"y", res.final_patch.y(centre)}, {"u", res.final_patch.value(centre)}};
  if (cfg.contains("reference")) {
    const Field2 ref = field_of(cfg.at("reference"), domain);
    double err = 0;
    for (int k : res.final_patch.interior())
      err = std::max(err, std::abs(res.final_patch.value(k) - ref(res.final_patch.x(k), res.final_patch.y(k))));
    const double uc = ref(res.final_patch.x(centre), res.final_patch.y(centre));
    out["reference"] = {{"sup_error", err},
                        {"center_exact", uc},
                        {"center_error", res.final_patch.value(centre) - uc},
                        {"center_relative_error", uc != 0 ? std::abs(res.final_patch.value(centre) - uc) / std::abs(uc) : 0.0}};
  }
  out["checks"] = Json::array({"graph equation H - g(H^2 - K) = 0", "mean curvature of a graph",
                               "Gauss curvature of a graph"});
  write_json(ctx, "solve.json", out);
  return res.status == SolveStatus::Converged ? kOk : kNoConvergence;
}

int cmd_revolve(const Context& ctx) {
  const auto& cfg = ctx.config;
  const Relation rel = relation_of(cfg);
  ProfileSeed seed;
  const auto sj = cfg.value("seed", Json::object());
  seed.r0 = sj.value("r0", seed.r0);
  seed.z0 = sj.value("z0", seed.z0);
  seed.theta0 = sj.value("theta0", seed.theta0);
  ProfileOptions opt;
  opt.step = positive(cfg, "step", opt.step);
  opt.s_max = positive(cfg, "s_max", opt.s_max);
  opt.r_min = positive(cfg, "r_min", opt.r_min);
  const auto curve = rotational_profile(rel, seed, opt);
  curve.write_csv(out_path(ctx, "profile.csv"));

  // Independent check of theta' = f(kappa_p): five-point differences of theta.
  double residual = 0;
  for (std::size_t i = 2; i + 2 < curve.size(); ++i) {
    const double d = (-curve.theta[i + 2] + 8 * curve.theta[i + 1] - 8 * curve.theta[i - 1] + curve.theta[i - 2]) /
                     (12 * (curve.s[i + 1] - curve.s[i]));
    residual = std::max(residual, std::abs(d - rel.f(curve.kappa_p[i])));
  }
  Json out;
  out["relation"] = relation_to_json(rel);
  out["seed"] = ctx.seed;
  out["profile_seed"] = {{"r0", seed.r0}, {"z0", seed.z0}, {"theta0", seed.theta0}};
  out["samples"] = curve.size();
  out["stop"] = to_string(curve.stop);
  out["stop_message"] = curve.message;
  out["arclength"] = curve.s.empty() ? 0.0 : curve.s.back();
  out["relation_residual_fd"] = residual;
  const auto period = detect_period(curve, cfg.value("period_tol", 1e-4));
  out["period"] = period ? Json(*period) : Json(nullptr);
  if (rel.kind() == RelationKind::Cmc) {
    double dev = 0;
    for (std::size_t i = 0; i < curve.size(); ++i)
      dev = std::max(dev, std::abs(curve.kappa_m[i] + curve.kappa_p[i] - 2 * rel.cmc_value()));
    out["mean_curvature_deviation"] = dev;
  }
  out["checks"] = Json::array({"meridian curvature = f(parallel curvature)", "angle function nu = cos(theta)"});
  write_json(ctx, "revolve.json", out);
  return kOk;
}

int cmd_diagram(const Context& ctx) {
  const auto& cfg = ctx.config;
  const auto& src = cfg.at("source");
  const auto kind = src.at("kind").get<std::string>();
  CurvatureDiagram diag;
  Json meta;
  if (kind == "relation") {
    const Relation rel = relation_from_json(src.at("relation"));
    CertificationGrid grid;
    grid.t_max = src.value("t_max", 1e2);
    grid.samples = src.value("samples", 200);
    for (double t : grid.points()) diag.add(rel.g(t) + std::sqrt(t), rel.g(t) - std::sqrt(t));
    diag.source = "synthetic";
  } else {
    TriangleMesh mesh;
    std::vector<std::string> warnings;
    if (kind == "obj") mesh = read_obj(src.at("path").get<std::string>(), &warnings);
    else if (kind == "icosphere") mesh = icosphere(src.value("radius", 1.0), src.value("subdivisions", 4));
    else if (kind == "cylinder")
      mesh = cylinder_mesh(src.value("radius", 1.0), src.value("height", 4.0), src.value("around", 96), src.value("along", 64));
    else if (kind == "flat") mesh = flat_mesh(src.value("size", 2.0), src.value("n", 20));
    else throw ParseError("unknown diagram source '" + kind + "'");
    if (src.contains("write_obj")) write_obj(mesh, src.at("write_obj").get<std::string>());
    const auto md = mesh_diagram(mesh);
    diag = md.diagram;
    meta = {{"vertices", mesh.vertices.size()},
            {"faces", mesh.faces.size()},
            {"boundary_skipped", md.boundary_skipped},
            {"degenerate_skipped", md.degenerate_skipped},
            {"warnings", warnings}};
  }
  diag.write_csv(out_path(ctx, "diagram.csv"));

  const auto qc = qc_classify(diag);
  Json out;
  out["seed"] = ctx.seed;
  out["source"] = diag.source;
  out["samples"] = diag.samples.size();
  if (!meta.is_null()) out["mesh"] = meta;
  double m1 = 0, m2 = 0;
  for (const auto& s : diag.samples) {
    m1 += s.k1;
    m2 += s.k2;
  }
  if (!diag.samples.empty()) {
    m1 /= static_cast<double>(diag.samples.size());
    m2 /= static_cast<double>(diag.samples.size());
  }
  out["mean_pair"] = pair_json(m1, m2);
  out["qc"] = {{"classification", to_string(qc.classification)},
               {"gamma_star", qc.gamma_star ? Json(*qc.gamma_star) : Json(nullptr)},
               {"mu", qc.mu ? Json(*qc.mu) : Json(nullptr)},
               {"wedge_slopes", qc.wedge_slopes ? pair_json(qc.wedge_slopes->first, qc.wedge_slopes->second) : Json(nullptr)},
               {"neutral_samples", qc.neutral},
               {"reason", qc.reason}};
  if (cfg.contains("region")) {
    const auto& r = cfg.at("region");
    PhiRegion reg{function_from_json(r.at("phi1")), function_from_json(r.at("phi2")), r.value("starred", false),
                  r.value("s0", -1.0)};
    const auto chk = region_membership(diag, reg);
    out["region"] = {{"inside", chk.inside},
                     {"worst_excess", chk.worst_excess},
                     {"worst_index", chk.worst_violation ? Json(*chk.worst_violation) : Json(nullptr)}};
  }
  out["checks"] = Json::array({"quasiconformality k1^2 + k2^2 <= 2 gamma k1 k2", "gamma = (mu^2 + 1)/(mu^2 - 1)",
                               "wedge m1 x <= y <= m2 x"});
  write_json(ctx, "diagram.json", out);
  return kOk;
}

int cmd_parallel(const Context& ctx) {
  const auto& cfg = ctx.config;
  const Relation rel = relation_of(cfg);
  const double a = cfg.at("a").get<double>();
  const auto xs = linspace(cfg.value("x_grid", Json::object()), 0.0, 1.0, 51);
  const Relation conj = conjugate_relation(rel, a, xs);

  std::vector<CurvaturePair> pairs;
  if (cfg.contains("pairs")) {
    for (const auto& p : cfg.at("pairs")) pairs.push_back(CurvaturePair::of(p.at(0).get<double>(), p.at(1).get<double>()));
  } else {
    for (double x : xs) pairs.push_back(CurvaturePair::of(x, rel.f(x)));
  }
  std::ofstream csv(out_path(ctx, "parallel.csv"));
  if (!csv) throw Error("cannot write parallel.csv");
  csv.precision(17);
  csv << "k1,k2,k1_a,k2_a,metric_1,metric_2,relation_residual\n";
  double worst = 0;
  std::vector<double> mapped;
  for (const auto& p : pairs) {
    const auto q = parallel_curvatures(p, a);
    const double res = std::abs(conj.f(q.pair.k1) - q.pair.k2);
    worst = std::max(worst, res);
    mapped.push_back(q.pair.k1);
    csv << p.k1 << ',' << p.k2 << ',' << q.pair.k1 << ',' << q.pair.k2 << ',' << q.metric_factor[0] << ','
        << q.metric_factor[1] << ',' << res << '\n';
  }
  Json out;
  out["seed"] = ctx.seed;
  out["a"] = a;
  out["relation"] = relation_to_json(rel);
  out["conjugated"] = relation_to_json(conj);
  out["max_relation_residual"] = worst;
  out["involution_defect"] = involution_defect(conj, mapped).first;
  out["checks"] = Json::array({"parallel curvatures k/(1 - a k)", "conjugated relation F_a o f o F_-a"});
  write_json(ctx, "parallel.json", out);
  return kOk;
}

int cmd_linop(const Context& ctx) {
  const auto& cfg = ctx.config;
  const Relation rel = relation_of(cfg);
  const double r0 = positive(cfg, "r0", 1.0);
  const double L = positive(cfg, "L", 1.0);
  const double r = positive(cfg, "r", 1.0);
  const auto op = cylinder_operator(rel, r0);
  Json out;
  out["seed"] = ctx.seed;
  out["relation"] = relation_to_json(rel);
  out["cylinder_operator"] = {{"A", op.A}, {"B", op.B}, {"C", op.C}, {"H0", op.H0}, {"r0", op.r0}};
  out["threshold"] = {{"L", L}, {"r", r}, {"value", perturbation_threshold(op, L, r)}};
  out["critical_square_half_side"] = critical_square_half_side(op);

  if (cfg.contains("grid")) {
    // Cylinder as the graph u = r0 - sqrt(r0^2 - y^2); s = r0 asin(y / r0) runs
    // along the circle, t = x along the axis.
    const double h = positive(cfg.at("grid"), "h", 0.02);
    const double smax = L + 3 * h;
    if (smax / r0 >= std::asin(0.95)) throw RejectedInput("L too large for a graph chart of the cylinder");
    const double ymax = r0 * std::sin(smax / r0);
    const double xmax = r + 3 * h;
    auto u = [r0](double, double y) { return r0 - std::sqrt(r0 * r0 - y * y); };
    auto patch = GraphPatch::rectangle(-xmax, -ymax, xmax, ymax, h, u);
    patch.set_interior(u);
    auto phi_fn = [&](double x, double y) {
      const double s = r0 * std::asin(y / r0), t = x;
      if (std::abs(s) >= L || std::abs(t) >= r) return 0.0;
      return std::cos(M_PI * s / (2 * L)) * std::cos(M_PI * t / (2 * r));
    };
    const auto phi = sample_field(patch, phi_fn);
    const auto lg = apply_lg_on_grid(rel, patch, phi);
    const double thr = perturbation_threshold(op, L, r);
    std::ofstream csv(out_path(ctx, "linop.csv"));
    csv.precision(17);
    csv << "x,y,phi,lg,expected\n";
    double err = 0;
    const double ykink = r0 * std::sin(L / r0);
    for (int k : patch.interior()) {
      if (std::isnan(lg[k])) continue;
      const double t = patch.x(k);
      const double expected = thr * phi[k];
      csv << patch.x(k) << ',' << patch.y(k) << ',' << phi[k] << ',' << lg[k] << ',' << expected << '\n';
      // Compare away from the kink of phi at the edge of its support.
      if (std::abs(patch.y(k)) < ykink - 2.5 * h && std::abs(t) < r - 2.5 * h) err = std::max(err, std::abs(lg[k] - expected));
    }
    out["grid_check"] = {{"h", patch.h()}, {"max_error", err}};
  }
  out["checks"] = Json::array({"linearized operator on a cylinder A phi_ss + B phi_tt + C phi", "C = 4 A H0^2",
                               "sign of -A (pi/2L)^2 - B (pi/2r)^2 + C"});
  write_json(ctx, "linop.json", out);
  return kOk;
}

int cmd_blowup(const Context& ctx) {
  const auto& cfg = ctx.config;
  const auto& surf = cfg.at("surface");
  const auto kind = surf.value("kind", std::string("cap"));
  GraphPatch patch;
  if (kind == "cap" || kind == "plane") {
    const double R = surf.value("radius", 1.0);
    const Field2 u = kind == "cap" ? cap_field(surf.at("H0").get<double>(), R, 0, 0) : Field2([](double, double) { return 0.0; });
    patch = GraphPatch::disk(0, 0, R, positive(surf, "h", 1.0 / 32), u);
    patch.set_interior(u);
  } else if (kind == "patch") {
    patch = GraphPatch::read(surf.at("csv").get<std::string>(), surf.at("json").get<std::string>());
  } else {
    throw ParseError("unknown surface kind '" + kind + "' (cap, plane, patch)");
  }

  struct Spike {
    double x = 0, y = 0, amplitude = 0, width = 1;
  } spike;
  if (cfg.contains("spike")) {
    const auto& s = cfg.at("spike");
    spike = {s.value("x", 0.0), s.value("y", 0.0), s.value("amplitude", 0.0), positive(s, "width", 0.1)};
  }
  auto sigma_of = [&](const GraphPatch& p, double scale) {
    auto sigma = second_fundamental_norm_field(p);
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (std::isnan(sigma[k])) continue;
      const double dx = p.x(k) / scale - spike.x, dy = p.y(k) / scale - spike.y;
      sigma[k] += spike.amplitude / scale * std::exp(-(dx * dx + dy * dy) / (spike.width * spike.width));
    }
    return sigma;
  };
  const auto center = cfg.value("center", Json::array({0.0, 0.0}));
  const double cx = center[0].get<double>(), cy = center[1].get<double>();
  const double radius = positive(cfg, "radius", 0.5);
  const auto sel = blowup_select(patch, sigma_of(patch, 1.0), cx, cy, radius);
  auto sel_json = [](const BlowupSelection& s) {
    return Json{{"node", s.node}, {"x", s.x}, {"y", s.y}, {"lambda", s.lambda}, {"r", s.r}, {"h_max", s.h_max},
                {"disk_nodes", s.disk_nodes}};
  };
  Json out;
  out["seed"] = ctx.seed;
  out["selection"] = sel_json(sel);

  const double lambda = cfg.value("lambda", sel.lambda > 0 ? sel.lambda : 1.0);
  if (!(lambda > 0)) throw ParseError("lambda must be positive");
  const auto scaled = rescale_patch(patch, lambda);
  const auto sel2 = blowup_select(scaled, sigma_of(scaled, lambda), cx * lambda, cy * lambda, radius * lambda);
  out["rescaled"] = {{"lambda", lambda},
                     {"selection", sel_json(sel2)},
                     {"h_max_difference", std::abs(sel2.h_max - sel.h_max)}};
  if (cfg.contains("relation")) {
    const Relation rel = relation_of(cfg);
    const auto before = certify_ellipticity(rel);
    const auto after = certify_ellipticity(rescale_relation(rel, lambda), CertificationGrid{}.rescaled(lambda));
    auto lam = [](const EllipticityReport& r) { return r.uniform_constant_lambda ? Json(*r.uniform_constant_lambda) : Json(nullptr); };
    auto alpha = [](const EllipticityReport& r) { return r.umbilical_alpha ? Json(*r.umbilical_alpha) : Json(nullptr); };
    out["relation"] = {{"Lambda_before", lam(before)}, {"Lambda_after", lam(after)},
                       {"alpha_before", alpha(before)}, {"alpha_after", alpha(after)}};
  }
  out["checks"] = Json::array({"h(q) = |sigma(q)| d(q, boundary of D)", "rescaled relation G(t) = g(lambda^2 t)/lambda"});
  write_json(ctx, "blowup.json", out);
  return kOk;
}

}  // namespace wlab::cli
