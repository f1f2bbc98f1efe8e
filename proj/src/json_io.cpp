#include "pminimal/json_io.hpp"

#include "pminimal/error.hpp"

namespace pminimal::json {

namespace {

Json optional_int(const std::optional<long>& x) { return x ? Json(*x) : Json(nullptr); }

std::optional<long> read_optional_int(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_number_integer()) {
    throw Error(ErrorKind::kInvalidArgument, std::string("cell field '") + key + "' must be an integer or null");
  }
  return j.at(key).get<long>();
}

Json poly_json(const Poly& p) {
  Json out = Json::array();
  for (const auto& c : p.coeffs()) out.push_back(to_json(c));
  return out;
}

}  // namespace

Json to_json(const Rational& x) { return to_string(x); }

Json to_json(const Cell& cell) {
  Json j;
  j["center"] = to_json(cell.center);
  j["lo"] = optional_int(cell.lo);
  j["hi"] = optional_int(cell.hi);
  j["lambda"] = to_json(cell.lambda);
  j["n"] = cell.n;
  return j;
}

Json to_json(const PreparedCell& cell) {
  Json j;
  j["cell"] = to_json(cell.cell);
  Json fs = Json::array();
  for (const auto& f : cell.functions) {
    Json jf;
    jf["h"] = to_json(f.h);
    jf["a"] = f.a;
    jf["unit"] = to_json(f.unit);
    jf["e"] = f.e;
    fs.push_back(jf);
  }
  j["functions"] = fs;
  return j;
}

Json to_json(const RationalFunctionT& z) {
  Json j;
  j["num"] = poly_json(z.numerator());
  j["den"] = poly_json(z.denominator());
  return j;
}

Json to_json(const ConstructibleFunction& f) {
  Json pieces = Json::array();
  for (const auto& piece : f.pieces()) {
    Json jp;
    jp["cell"] = to_json(piece.cell);
    Json terms = Json::array();
    for (const auto& t : piece.terms) {
      Json jt;
      jt["q"] = to_json(t.q);
      jt["d"] = t.d;
      jt["e"] = t.e;
      terms.push_back(jt);
    }
    jp["terms"] = terms;
    pieces.push_back(jp);
  }
  return pieces;
}

Json to_json(const Measure& m) { return m.infinite ? Json("INFINITE") : to_json(m.value); }

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) throw Error(ErrorKind::kInvalidArgument, "expected a rational string");
  const auto r = parse_rational(j.get<std::string>());
  if (!r) throw Error(ErrorKind::kInvalidArgument, "malformed rational '" + j.get<std::string>() + "'");
  return *r;
}

Cell cell_from_json(const Json& j, long p) {
  if (!j.is_object()) throw Error(ErrorKind::kInvalidArgument, "cell must be a JSON object");
  const Json& body = j.contains("cell") ? j.at("cell") : j;
  for (const char* key : {"center", "lambda", "n"}) {
    if (!body.contains(key)) throw Error(ErrorKind::kInvalidArgument, std::string("cell is missing '") + key + "'");
  }
  Cell cell;
  cell.prime = p;
  cell.center = rational_from_json(body.at("center"));
  cell.lo = read_optional_int(body, "lo");
  cell.hi = read_optional_int(body, "hi");
  cell.lambda = rational_from_json(body.at("lambda"));
  if (!body.at("n").is_number_integer()) throw Error(ErrorKind::kInvalidArgument, "cell field 'n' must be an integer");
  cell.n = body.at("n").get<long>();
  cell.validate();
  return cell;
}

std::vector<Cell> cells_from_json(const Json& j, long p) {
  if (j.is_array()) {
    std::vector<Cell> out;
    for (const auto& item : j) out.push_back(cell_from_json(item, p));
    return out;
  }
  if (j.is_object() && j.contains("cells")) return cells_from_json(j.at("cells"), p);
  return {cell_from_json(j, p)};
}

}  // namespace pminimal::json
