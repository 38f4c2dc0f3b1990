#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "rtpta/polyhedron.hpp"

namespace rtpta::geometry {

// Parses a conjunction such as `56 <= T1 & T1 <= 79 & T2 >= 112`.
// Atoms are `expr rel expr [rel expr]` with rel in <, <=, =, ==, >=, >;
// `true` and `false` are accepted. Constants may be integers, decimals or p/q.
Polyhedron parse_polyhedron(std::string_view text, const SpacePtr &space);

// [{"lhs": {"T1": "1"}, "rel": "<=", "rhs": "79"}, ...]
nlohmann::json to_json(const Polyhedron &p);
Polyhedron polyhedron_from_json(const nlohmann::json &j, const SpacePtr &space);

// Rationals in JSON are strings ("12", "-3/4"); numbers and decimal strings
// are accepted on input.
nlohmann::json to_json(const Rational &r);
Rational rational_from_json(const nlohmann::json &j);

}  // namespace rtpta::geometry
