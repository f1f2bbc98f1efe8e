// Python bindings. Rationals cross the boundary as strings "a/b"; cells as
// dicts with the same keys as the CLI's JSON form.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pminimal/cells.hpp"
#include "pminimal/cli.hpp"
#include "pminimal/constructible.hpp"
#include "pminimal/error.hpp"
#include "pminimal/hensel.hpp"
#include "pminimal/json_io.hpp"
#include "pminimal/parse.hpp"
#include "pminimal/prepare.hpp"
#include "pminimal/valued.hpp"

namespace py = pybind11;
using namespace pminimal;

namespace {

Rational rational(const std::string& text) {
  const auto r = parse_rational(text);
  if (!r) throw Error(ErrorKind::kInvalidArgument, "not a rational: " + text);
  return *r;
}

py::object to_python(const json::Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

json::Json from_python(const py::object& obj) {
  return json::Json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

Cell cell_arg(const py::object& obj, long p) {
  if (py::isinstance<py::str>(obj)) {
    const auto s = obj.cast<std::string>();
    if (s == "R") return valuation_ring_cell(p);
    if (s == "M") return maximal_ideal_cell(p);
    return json::cell_from_json(json::Json::parse(s), p);
  }
  return json::cell_from_json(from_python(obj), p);
}

py::list cells_out(const std::vector<Cell>& cells) {
  py::list out;
  for (const auto& c : cells) out.append(to_python(json::to_json(c)));
  return out;
}

}  // namespace

PYBIND11_MODULE(_pminimal, m) {
  m.doc() = "Cell decomposition and p-adic integration in one variable over Q_p.";

  static py::exception<Error> error(m, "Error", PyExc_ValueError);
  static py::exception<SyntaxError> syntax(m, "SyntaxError", error.ptr());
  py::register_exception_translator([](std::exception_ptr ptr) {
    try {
      if (ptr) std::rethrow_exception(ptr);
    } catch (const SyntaxError& e) {
      py::set_error(syntax, e.what());
    } catch (const Error& e) {
      py::set_error(error, e.what());
    } catch (const json::Json::exception& e) {
      py::set_error(PyExc_ValueError, e.what());
    }
  });

  m.def(
      "valuation",
      [](const std::string& x, long p) -> std::optional<long> {
        const Valuation v = valuation(FieldElement::rational(p, rational(x)));
        if (v.is_infinite()) return std::nullopt;
        return v.value();
      },
      py::arg("x"), py::arg("p"), "v_p(x); None for x = 0.");
  m.def(
      "ac", [](const std::string& x, long p) { return to_string(ac(FieldElement::rational(p, rational(x))).value); },
      py::arg("x"), py::arg("p"), "Angular component of x in F_p.");
  m.def(
      "residue",
      [](const std::string& x, long p) { return to_string(residue(FieldElement::rational(p, rational(x))).value); },
      py::arg("x"), py::arg("p"));
  m.def(
      "is_nth_power", [](const std::string& x, long n, long p) { return is_nth_power(rational(x), n, p); },
      py::arg("x"), py::arg("n"), py::arg("p"));
  m.def("power_index", &power_index, py::arg("p"), py::arg("n"), "[Q_p^x : P_n].");
  m.def(
      "coset_reps",
      [](long p, long n) {
        std::vector<std::string> out;
        for (const auto& r : coset_reps(p, n)) out.push_back(to_string(r.representative));
        return out;
      },
      py::arg("p"), py::arg("n"));
  m.def(
      "hensel_lift",
      [](const std::string& f, const std::string& a, long p, long precision) {
        return to_string(hensel_lift(parse_expanded_poly(f), rational(a), p, precision).representative());
      },
      py::arg("f"), py::arg("a"), py::arg("p"), py::arg("precision") = 20,
      "Root of f near a, as a rational representative mod p^precision.");
  m.def(
      "cell_measure", [](const py::object& cell, long p) { return cell_measure(cell_arg(cell, p)).to_string(); },
      py::arg("cell"), py::arg("p"), "Haar measure as a rational string or \"INFINITE\".");
  m.def(
      "refine_by_coset", [](const py::object& cell, long p, long m) { return cells_out(refine_by_coset(cell_arg(cell, p), m)); },
      py::arg("cell"), py::arg("p"), py::arg("m"));
  m.def(
      "prepare",
      [](const std::vector<std::string>& fs, long p, long modulus) {
        std::vector<SplitPoly> polys;
        for (const auto& f : fs) polys.push_back(parse_split_poly(f));
        py::list out;
        for (const auto& c : prepare(polys, p, modulus)) out.append(to_python(json::to_json(c)));
        return out;
      },
      py::arg("polys"), py::arg("p"), py::arg("modulus") = 1);
  m.def(
      "decompose", [](const std::string& phi, long p) { return cells_out(decompose(parse_formula(phi), p)); },
      py::arg("formula"), py::arg("p"));
  m.def(
      "integrate",
      [](const std::string& f, long p, const std::string& mode, long exponent, const py::object& domain,
         bool paper_convention) {
        const SplitPoly poly = parse_split_poly(f);
        ConstructibleFunction g(p);
        if (mode == "abs") {
          g = abs_power(poly, p, exponent);
        } else if (mode == "v") {
          g = from_prepared(poly, prepare({poly}, p), GeneratorMode::kValuation, 0, VanishingPolicy::kDrop);
        } else {
          throw Error(ErrorKind::kInvalidArgument, "mode must be abs or v");
        }
        const Cell cell = domain.is_none() ? valuation_ring_cell(p) : cell_arg(domain, p);
        return integrate(mul(g, ConstructibleFunction::indicator(cell))).to_string(paper_convention);
      },
      py::arg("f"), py::arg("p"), py::arg("mode") = "abs", py::arg("exponent") = 1, py::arg("domain") = py::none(),
      py::arg("paper_convention") = false, "Integral of |f|^exponent or v(f) over domain (default R).");
  m.def(
      "igusa_zeta",
      [](const std::string& f, long p, const py::object& domain) {
        const Cell cell = domain.is_none() ? valuation_ring_cell(p) : cell_arg(domain, p);
        return igusa_zeta(parse_split_poly(f), p, cell).to_string();
      },
      py::arg("f"), py::arg("p"), py::arg("domain") = py::none(), "Z(T) as \"(num)/(den)\".");
  m.def(
      "run_cli",
      [](const std::vector<std::string>& args, const std::string& stdin_text) {
        std::istringstream in(stdin_text);
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run(args, in, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), py::arg("stdin") = "", "Runs the pmin CLI in-process; returns (exit code, stdout, stderr).");
}
