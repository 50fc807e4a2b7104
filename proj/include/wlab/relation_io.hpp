#pragma once

#include "json.hpp"
#include "wlab/relation.hpp"

namespace wlab {

using Json = nlohmann::json;

// Infinite interval ends are written as the strings "inf" / "-inf".
Json interval_to_json(const Interval& iv);
// Accepts the object form or a two-element array [lo, hi] (closed where finite).
Interval interval_from_json(const Json& j);

Json function_to_json(const ScalarFunction& f);
ScalarFunction function_from_json(const Json& j);

// {"kind": "cmc" | "linear" | "g" | "f", ...}
Json relation_to_json(const Relation& rel);
Relation relation_from_json(const Json& j);

Json report_to_json(const EllipticityReport& rep);

// Numbers that may be written as "inf" / "-inf".
Json number_to_json(double x);
double number_from_json(const Json& j);

}  // namespace wlab
