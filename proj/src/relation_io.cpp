#include "wlab/relation_io.hpp"

#include <cmath>

#include "wlab/error.hpp"

namespace wlab {

Json number_to_json(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return nullptr;
  return x;
}

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw ParseError("expected a number or \"inf\"/\"-inf\", got " + j.dump());
}

Json interval_to_json(const Interval& iv) {
  return Json{{"lo", number_to_json(iv.lo)},
              {"hi", number_to_json(iv.hi)},
              {"lo_open", iv.lo_open || std::isinf(iv.lo)},
              {"hi_open", iv.hi_open || std::isinf(iv.hi)}};
}

Interval interval_from_json(const Json& j) {
  Interval iv;
  if (j.is_array()) {
    if (j.size() != 2) throw ParseError("interval array must have two entries");
    iv.lo = number_from_json(j[0]);
    iv.hi = number_from_json(j[1]);
    iv.lo_open = std::isinf(iv.lo);
    iv.hi_open = std::isinf(iv.hi);
  } else if (j.is_object()) {
    iv.lo = number_from_json(j.at("lo"));
    iv.hi = number_from_json(j.at("hi"));
    iv.lo_open = j.value("lo_open", std::isinf(iv.lo));
    iv.hi_open = j.value("hi_open", std::isinf(iv.hi));
  } else {
    throw ParseError("interval must be an object or [lo, hi]");
  }
  if (!(iv.lo <= iv.hi)) throw ParseError("interval has lo > hi");
  return iv;
}

Json function_to_json(const ScalarFunction& f) {
  Json j;
  if (const auto* cf = f.closed_form()) {
    j["family"] = to_string(cf->family);
    j["params"] = cf->c;
    j["domain"] = interval_to_json(f.base_domain());
  } else {
    const auto* h = f.hermite_table();
    j["hermite"] = Json{{"x", h->x}, {"y", h->y}, {"dy", h->dy}};
  }
  if (f.in_scale() != 1.0) j["in_scale"] = f.in_scale();
  if (f.out_scale() != 1.0) j["out_scale"] = f.out_scale();
  return j;
}

ScalarFunction function_from_json(const Json& j) {
  try {
    ScalarFunction base;
    if (j.contains("hermite")) {
      const auto& h = j.at("hermite");
      base = ScalarFunction::hermite(h.at("x").get<std::vector<double>>(),
                                     h.at("y").get<std::vector<double>>(),
                                     h.at("dy").get<std::vector<double>>());
    } else {
      const Family fam = family_from_string(j.at("family").get<std::string>());
      std::array<double, 4> c{};
      const auto& p = j.at("params");
      if (!p.is_array() || p.size() > 4) throw ParseError("params must be an array of at most 4 numbers");
      for (std::size_t i = 0; i < p.size(); ++i) c[i] = p[i].get<double>();
      const Interval dom = j.contains("domain") ? interval_from_json(j.at("domain")) : Interval::real_line();
      base = ScalarFunction::closed(fam, c, dom);
    }
    const double in = j.value("in_scale", 1.0);
    const double out = j.value("out_scale", 1.0);
    return (in == 1.0 && out == 1.0) ? base : base.scaled(in, out);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad function record: ") + e.what());
  } catch (const RejectedInput& e) {
    throw ParseError(std::string("bad function record: ") + e.what());
  }
}

Json relation_to_json(const Relation& rel) {
  switch (rel.kind()) {
    case RelationKind::Cmc: return Json{{"kind", "cmc"}, {"h0", rel.cmc_value()}};
    case RelationKind::Linear: {
      const auto c = rel.linear_coeffs();
      return Json{{"kind", "linear"}, {"alpha", c.alpha}, {"beta", c.beta}, {"delta", c.delta}, {"branch", c.branch}};
    }
    case RelationKind::G: return Json{{"kind", "g"}, {"g", function_to_json(rel.function())}};
    case RelationKind::F: return Json{{"kind", "f"}, {"f", function_to_json(rel.function())}};
  }
  return {};
}

Relation relation_from_json(const Json& j) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "cmc") return Relation::cmc(j.at("h0").get<double>());
    if (kind == "linear") {
      std::optional<int> branch;
      if (j.contains("branch")) branch = j.at("branch").get<int>();
      return Relation::linear(j.at("alpha").get<double>(), j.at("beta").get<double>(),
                              j.at("delta").get<double>(), branch);
    }
    if (kind == "g") return Relation::g_form(function_from_json(j.at("g")));
    if (kind == "f") return Relation::f_form(function_from_json(j.at("f")));
    throw ParseError("unknown relation kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad relation record: ") + e.what());
  }
}

Json report_to_json(const EllipticityReport& rep) {
  Json j;
  j["is_elliptic"] = rep.is_elliptic;
  j["sup_4tgp2"] = number_to_json(rep.sup_4tgp2);
  j["sup_at_t"] = rep.sup_at_t;
  j["uniform_constant_Lambda"] =
      rep.uniform_constant_lambda ? Json(*rep.uniform_constant_lambda) : Json(nullptr);
  j["f_slope_bounds"] = rep.f_slope_bounds
                            ? Json::array({rep.f_slope_bounds->first, rep.f_slope_bounds->second})
                            : Json(nullptr);
  j["umbilical_alpha"] = rep.umbilical_alpha ? Json(*rep.umbilical_alpha) : Json(nullptr);
  j["minimal_type"] = rep.minimal_type;
  j["If_domain"] = interval_to_json(rep.if_domain);
  j["bounded_branch"] = to_string(rep.bounded_branch);
  j["orientation_flipped"] = rep.orientation_flipped;
  j["grid"] = Json{{"t_max", rep.grid.t_max},
                   {"samples", rep.grid.samples},
                   {"t_min_positive", rep.grid.t_min_positive}};
  return j;
}

}  // namespace wlab
