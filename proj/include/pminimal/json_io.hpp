#pragma once

// JSON forms used by the CLI. Rationals are strings "a/b"; a cell carries no
// prime, which the caller supplies when reading.

#include <json.hpp>

#include "pminimal/cells.hpp"
#include "pminimal/constructible.hpp"
#include "pminimal/prepare.hpp"

namespace pminimal::json {

using Json = nlohmann::ordered_json;

Json to_json(const Rational& x);
Json to_json(const Cell& cell);
Json to_json(const PreparedCell& cell);
Json to_json(const RationalFunctionT& z);
Json to_json(const ConstructibleFunction& f);
Json to_json(const Measure& m);

Rational rational_from_json(const Json& j);
Cell cell_from_json(const Json& j, long p);
// A single cell object or an array of them.
std::vector<Cell> cells_from_json(const Json& j, long p);

}  // namespace pminimal::json
