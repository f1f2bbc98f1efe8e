#include "pminimal/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <functional>
#include <istream>
#include <iterator>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "pminimal/cells.hpp"
#include "pminimal/constructible.hpp"
#include "pminimal/error.hpp"
#include "pminimal/hensel.hpp"
#include "pminimal/json_io.hpp"
#include "pminimal/oracle.hpp"
#include "pminimal/parse.hpp"
#include "pminimal/prepare.hpp"
#include "pminimal/valued.hpp"

namespace pminimal::cli {

namespace {

using json::Json;

struct Options {
  std::optional<long> prime;
  long precision = kDefaultSeriesPrecision;
  std::string format = "text";
  bool paper_convention = false;
  std::optional<long> n;
  std::optional<long> m;
  long modulus = 1;
  std::string field = "qp";
  std::string mode = "abs";
  long exponent = 1;
  std::optional<std::string> domain;
  std::optional<long> depth;
  std::vector<std::string> inputs;
};

struct Context {
  std::string command;
  Options opt;
  std::ostream& out;

  bool as_json() const { return opt.format == "json"; }

  long prime() const {
    if (!opt.prime) throw Error(ErrorKind::kInvalidArgument, "--prime is required for '" + command + "'");
    if (!is_prime(*opt.prime)) throw Error(ErrorKind::kInvalidArgument, std::to_string(*opt.prime) + " is not prime");
    return *opt.prime;
  }

  long n_flag(const char* name, const std::optional<long>& v) const {
    if (!v) throw Error(ErrorKind::kInvalidArgument, std::string("--") + name + " is required for '" + command + "'");
    if (*v < 1) throw Error(ErrorKind::kInvalidArgument, std::string("--") + name + " must be >= 1");
    return *v;
  }

  const std::string& input(std::size_t i, const char* what) const {
    if (opt.inputs.size() <= i) throw Error(ErrorKind::kInvalidArgument, "'" + command + "' expects " + what);
    return opt.inputs[i];
  }

  void expect_inputs(std::size_t count, const char* what) const {
    if (opt.inputs.size() != count) throw Error(ErrorKind::kInvalidArgument, "'" + command + "' expects " + what);
  }

  void emit(const Json& j) const { out << j.dump() << "\n"; }
  void line(const std::string& s) const { out << s << "\n"; }
};

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SyntaxError(e.byte == 0 ? 1 : e.byte, std::string("malformed JSON: ") + e.what());
  }
}

Rational parse_rational_arg(const std::string& text) {
  const auto r = parse_rational(text);
  if (!r) throw SyntaxError(1, "malformed rational '" + text + "'");
  return *r;
}

FieldElement parse_element(const Context& ctx, const std::string& text) {
  if (ctx.opt.field == "qp") return FieldElement::rational(ctx.prime(), parse_rational_arg(text));
  if (ctx.opt.field == "fp") return parse_laurent(text, ctx.prime());
  if (ctx.opt.field == "q") return parse_laurent(text, 0);
  throw Error(ErrorKind::kInvalidArgument, "--field must be qp, fp or q");
}

std::string residue_string(const ResidueElement& r) { return to_string(r.value); }

Json residue_json(const ResidueElement& r) {
  Json j;
  j["field"] = r.prime == 0 ? "Q" : "F_" + std::to_string(r.prime);
  j["value"] = to_string(r.value);
  return j;
}

Cell domain_cell(const Context& ctx, long p) {
  if (!ctx.opt.domain) return valuation_ring_cell(p);
  const std::string& d = *ctx.opt.domain;
  if (d == "R") return valuation_ring_cell(p);
  if (d == "M") return maximal_ideal_cell(p);
  return json::cell_from_json(parse_json_text(d), p);
}

void emit_cells(const Context& ctx, const std::vector<Cell>& cells) {
  if (ctx.as_json()) {
    Json arr = Json::array();
    for (const auto& c : cells) arr.push_back(json::to_json(c));
    Json j;
    j["cells"] = arr;
    ctx.emit(j);
    return;
  }
  for (const auto& c : cells) ctx.line(to_string(c));
}

std::string function_line(const FunctionPreparation& f) {
  return "h=" + to_string(f.h) + " a=" + std::to_string(f.a) + " unit=" + to_string(f.unit) +
         " e=" + std::to_string(f.e);
}

// ---------------------------------------------------------------- commands

void cmd_valuation(const Context& ctx) {
  ctx.expect_inputs(1, "one element");
  const Valuation v = valuation(parse_element(ctx, ctx.opt.inputs[0]));
  if (ctx.as_json()) {
    Json j;
    j["valuation"] = v.is_infinite() ? Json("INF") : Json(v.value());
    ctx.emit(j);
  } else {
    ctx.line(v.to_string());
  }
}

void cmd_residue_like(const Context& ctx, bool angular) {
  ctx.expect_inputs(1, "one element");
  const FieldElement x = parse_element(ctx, ctx.opt.inputs[0]);
  const ResidueElement r = angular ? ac(x) : residue(x);
  if (ctx.as_json()) {
    ctx.emit(residue_json(r));
  } else {
    ctx.line(residue_string(r));
  }
}

void cmd_div(const Context& ctx) {
  ctx.expect_inputs(2, "two elements");
  const FieldElement q = restricted_div(parse_element(ctx, ctx.opt.inputs[0]), parse_element(ctx, ctx.opt.inputs[1]));
  if (ctx.as_json()) {
    Json j;
    j["value"] = q.to_string();
    ctx.emit(j);
  } else {
    ctx.line(q.to_string());
  }
}

void cmd_power(const Context& ctx) {
  ctx.expect_inputs(1, "one rational");
  const long p = ctx.prime();
  const bool result = is_nth_power(parse_rational_arg(ctx.opt.inputs[0]), ctx.n_flag("n", ctx.opt.n), p);
  if (ctx.as_json()) {
    Json j;
    j["power"] = result;
    ctx.emit(j);
  } else {
    ctx.line(result ? "true" : "false");
  }
}

void cmd_cosets(const Context& ctx) {
  ctx.expect_inputs(0, "no positional arguments");
  const auto reps = coset_reps(ctx.prime(), ctx.n_flag("n", ctx.opt.n));
  if (ctx.as_json()) {
    Json arr = Json::array();
    for (const auto& r : reps) arr.push_back(json::to_json(r.representative));
    Json j;
    j["cosets"] = arr;
    ctx.emit(j);
  } else {
    std::string s;
    for (const auto& r : reps) s += (s.empty() ? "" : " ") + to_string(r.representative);
    ctx.line(s);
  }
}

void cmd_index(const Context& ctx) {
  ctx.expect_inputs(0, "no positional arguments");
  const long index = power_index(ctx.prime(), ctx.n_flag("n", ctx.opt.n));
  if (ctx.as_json()) {
    Json j;
    j["index"] = index;
    ctx.emit(j);
  } else {
    ctx.line(std::to_string(index));
  }
}

void cmd_hensel(const Context& ctx) {
  ctx.expect_inputs(2, "a polynomial and an approximate root");
  const long p = ctx.prime();
  const Poly f = parse_expanded_poly(ctx.opt.inputs[0]);
  const PAdicNumber r = hensel_lift(f, parse_rational_arg(ctx.opt.inputs[1]), p, ctx.opt.precision);
  if (ctx.as_json()) {
    Json j;
    j["root"] = to_string(r.representative());
    j["precision"] = r.absolute_precision();
    ctx.emit(j);
  } else {
    ctx.line(r.to_string());
  }
}

std::vector<Cell> read_cells(const Context& ctx, long p) {
  ctx.expect_inputs(1, "one JSON cell or cell list");
  return json::cells_from_json(parse_json_text(ctx.opt.inputs[0]), p);
}

void cmd_measure(const Context& ctx) {
  const long p = ctx.prime();
  Measure total = Measure::finite(0);
  for (const auto& cell : read_cells(ctx, p)) {
    const Measure m = cell_measure(cell);
    if (m.infinite) total = Measure::infinity();
    if (!total.infinite) total.value += m.value;
  }
  if (ctx.as_json()) {
    Json j;
    j["measure"] = json::to_json(total);
    ctx.emit(j);
  } else {
    ctx.line(total.to_string());
  }
}

void cmd_refine(const Context& ctx) {
  const long p = ctx.prime();
  const long m = ctx.n_flag("m", ctx.opt.m);
  std::vector<Cell> out;
  for (const auto& cell : read_cells(ctx, p)) {
    if (cell.is_point()) {
      out.push_back(cell);
      continue;
    }
    for (auto& c : refine_by_coset(cell, m)) out.push_back(std::move(c));
  }
  sort_canonical(out);
  emit_cells(ctx, out);
}

void cmd_prepare(const Context& ctx) {
  if (ctx.opt.inputs.empty()) throw Error(ErrorKind::kInvalidArgument, "'prepare' expects at least one polynomial");
  const long p = ctx.prime();
  std::vector<SplitPoly> fs;
  for (const auto& text : ctx.opt.inputs) fs.push_back(parse_split_poly(text));
  const auto cells = prepare(fs, p, ctx.opt.modulus);
  if (ctx.as_json()) {
    Json arr = Json::array();
    for (const auto& c : cells) arr.push_back(json::to_json(c));
    Json j;
    j["cells"] = arr;
    ctx.emit(j);
    return;
  }
  for (const auto& c : cells) {
    std::string s = to_string(c.cell);
    for (std::size_t i = 0; i < c.functions.size(); ++i) {
      s += "  f" + std::to_string(i + 1) + ": " + function_line(c.functions[i]);
    }
    ctx.line(s);
  }
}

void cmd_decompose(const Context& ctx) {
  ctx.expect_inputs(1, "one formula");
  emit_cells(ctx, decompose(parse_formula(ctx.opt.inputs[0]), ctx.prime()));
}

ConstructibleFunction integrand(const Context& ctx, const SplitPoly& f, long p) {
  if (ctx.opt.mode == "abs") return abs_power(f, p, ctx.opt.exponent);
  if (ctx.opt.mode == "v") {
    return from_prepared(f, prepare({f}, p), GeneratorMode::kValuation, 0, VanishingPolicy::kDrop);
  }
  throw Error(ErrorKind::kInvalidArgument, "--mode must be abs or v");
}

void cmd_integrate(const Context& ctx) {
  ctx.expect_inputs(1, "one polynomial");
  const long p = ctx.prime();
  const SplitPoly f = parse_split_poly(ctx.opt.inputs[0]);
  const Cell domain = domain_cell(ctx, p);
  const IntegralValue v = integrate(mul(integrand(ctx, f, p), ConstructibleFunction::indicator(domain)));
  if (ctx.as_json()) {
    Json j;
    j["integrable"] = v.integrable;
    j["value"] = v.integrable || ctx.opt.paper_convention ? Json(to_string(v.value)) : Json(nullptr);
    ctx.emit(j);
  } else {
    ctx.line(v.to_string(ctx.opt.paper_convention));
  }
}

void cmd_zeta(const Context& ctx) {
  ctx.expect_inputs(1, "one polynomial");
  const long p = ctx.prime();
  const RationalFunctionT z = igusa_zeta(parse_split_poly(ctx.opt.inputs[0]), p, domain_cell(ctx, p));
  if (ctx.as_json()) {
    ctx.emit(json::to_json(z));
  } else {
    ctx.line("Z(T) = " + z.to_string());
  }
}

void emit_report(const Context& ctx, const oracle::PartitionReport& report) {
  if (ctx.as_json()) {
    Json j;
    j["ok"] = report.ok;
    j["checked"] = report.checked;
    j["violations"] = report.violation_count;
    Json first = Json::array();
    for (const auto& v : report.violations) {
      Json jv;
      jv["point"] = to_string(v.point);
      jv["count"] = v.count;
      jv["expected"] = v.expected;
      first.push_back(jv);
    }
    j["examples"] = first;
    ctx.emit(j);
    return;
  }
  ctx.line(std::string(report.ok ? "ok" : "FAILED") + " checked=" + std::to_string(report.checked) +
           " violations=" + std::to_string(report.violation_count));
  for (const auto& v : report.violations) {
    ctx.line("  t=" + to_string(v.point) + " count=" + std::to_string(v.count) +
             " expected=" + std::to_string(v.expected));
  }
}

std::vector<Rational> roots_and_negatives(const std::vector<SplitPoly>& fs) {
  std::vector<Rational> extra;
  for (const auto& f : fs) {
    for (const auto& r : f.factors()) {
      extra.push_back(r.root);
      extra.push_back(-r.root);
    }
  }
  return extra;
}

void collect_polys(const Formula& phi, std::vector<SplitPoly>& out) {
  switch (phi.kind()) {
    case Formula::Kind::kAbsLt:
    case Formula::Kind::kAbsLe:
      out.push_back(phi.f());
      out.push_back(phi.g());
      break;
    case Formula::Kind::kPow:
    case Formula::Kind::kEqz:
      out.push_back(phi.f());
      break;
    default:
      for (const auto& c : phi.children()) collect_polys(c, out);
  }
}

void cmd_oracle(const Context& ctx) {
  const std::string& what = ctx.input(0, "a check: powers, index, measure, integrate, partition or decompose");
  const long p = ctx.prime();
  const long depth = ctx.opt.depth.value_or(oracle::default_grid(p).depth);
  const std::vector<std::string> rest(ctx.opt.inputs.begin() + 1, ctx.opt.inputs.end());
  auto need = [&](std::size_t count, const char* desc) {
    if (rest.size() != count) throw Error(ErrorKind::kInvalidArgument, std::string("'oracle ") + what + "' expects " + desc);
  };
  if (what == "powers") {
    need(0, "no further arguments");
    const auto classes = oracle::nth_power_classes(p, ctx.n_flag("n", ctx.opt.n), depth);
    if (ctx.as_json()) {
      Json arr = Json::array();
      for (const auto& c : classes) arr.push_back(c.get_str());
      Json j;
      j["classes"] = arr;
      ctx.emit(j);
    } else {
      std::string s;
      for (const auto& c : classes) s += (s.empty() ? "" : " ") + c.get_str();
      ctx.line(s);
    }
  } else if (what == "index") {
    need(0, "no further arguments");
    const long index = oracle::power_index(p, ctx.n_flag("n", ctx.opt.n));
    if (ctx.as_json()) {
      Json j;
      j["index"] = index;
      ctx.emit(j);
    } else {
      ctx.line(std::to_string(index));
    }
  } else if (what == "measure") {
    need(1, "one JSON cell or cell list");
    Rational total = 0;
    for (const auto& cell : json::cells_from_json(parse_json_text(rest[0]), p)) total += oracle::measure(cell, depth);
    if (ctx.as_json()) {
      Json j;
      j["measure"] = to_string(total);
      ctx.emit(j);
    } else {
      ctx.line(to_string(total));
    }
  } else if (what == "integrate") {
    need(1, "one polynomial");
    const SplitPoly f = parse_split_poly(rest[0]);
    const long s = ctx.opt.exponent;
    std::function<std::optional<Rational>(const Rational&)> g;
    if (ctx.opt.mode == "abs") {
      g = [&](const Rational& t) -> std::optional<Rational> {
        const Rational y = oracle::evaluate(f, t);
        if (y == 0) return std::nullopt;
        return power_of(p, -s * oracle::valuation(y, p));
      };
    } else if (ctx.opt.mode == "v") {
      g = [&](const Rational& t) -> std::optional<Rational> {
        const Rational y = oracle::evaluate(f, t);
        if (y == 0) return std::nullopt;
        return Rational(oracle::valuation(y, p));
      };
    } else {
      throw Error(ErrorKind::kInvalidArgument, "--mode must be abs or v");
    }
    const Rational sum = oracle::integrate(g, domain_cell(ctx, p), depth);
    if (ctx.as_json()) {
      Json j;
      j["sum"] = to_string(sum);
      j["depth"] = depth;
      ctx.emit(j);
    } else {
      ctx.line(to_string(sum));
    }
  } else if (what == "partition") {
    if (rest.empty()) throw Error(ErrorKind::kInvalidArgument, "'oracle partition' expects polynomials");
    std::vector<SplitPoly> fs;
    for (const auto& text : rest) fs.push_back(parse_split_poly(text));
    std::vector<Cell> cells;
    for (const auto& c : prepare(fs, p, ctx.opt.modulus)) cells.push_back(c.cell);
    auto grid = oracle::default_grid(p, roots_and_negatives(fs));
    if (ctx.opt.depth) grid.depth = *ctx.opt.depth;
    emit_report(ctx, oracle::partition_check(cells, grid));
  } else if (what == "decompose") {
    need(1, "one formula");
    const Formula phi = parse_formula(rest[0]);
    std::vector<SplitPoly> fs;
    collect_polys(phi, fs);
    auto grid = oracle::default_grid(p, roots_and_negatives(fs));
    if (ctx.opt.depth) grid.depth = *ctx.opt.depth;
    emit_report(ctx, oracle::partition_check(decompose(phi, p), grid,
                                             [&](const Rational& t) { return oracle::evaluate(phi, t, p); }));
  } else {
    throw Error(ErrorKind::kInvalidArgument, "unknown oracle check '" + what + "'");
  }
}

const std::map<std::string, std::pair<std::function<void(const Context&)>, const char*>>& commands() {
  static const std::map<std::string, std::pair<std::function<void(const Context&)>, const char*>> table = {
      {"valuation", {cmd_valuation, "valuation of an element"}},
      {"ac", {[](const Context& c) { cmd_residue_like(c, true); }, "angular component of an element"}},
      {"residue", {[](const Context& c) { cmd_residue_like(c, false); }, "residue of an element of the valuation ring"}},
      {"div", {cmd_div, "restricted division x/y"}},
      {"power", {cmd_power, "decide whether a rational is an n-th power"}},
      {"cosets", {cmd_cosets, "representatives of K^x / P_n"}},
      {"index", {cmd_index, "index [K^x : P_n]"}},
      {"hensel", {cmd_hensel, "lift an approximate root"}},
      {"measure", {cmd_measure, "Haar measure of cells"}},
      {"refine", {cmd_refine, "split cells by the cosets of P_m"}},
      {"prepare", {cmd_prepare, "cell decomposition preparing polynomials"}},
      {"decompose", {cmd_decompose, "cells of the set defined by a formula"}},
      {"integrate", {cmd_integrate, "integral of |f|^s or v(f) over a cell"}},
      {"zeta", {cmd_zeta, "Igusa zeta function of f over a cell"}},
      {"oracle", {cmd_oracle, "brute-force checks"}},
  };
  return table;
}

std::string slurp(std::istream& in) {
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact computation in p-adic and Laurent series fields", "pmin"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--prime", opt.prime, "residue characteristic p");
  app.add_option("--precision", opt.precision, "digits for lifts and series inverses")->check(CLI::PositiveNumber);
  app.add_option("--format", opt.format, "output format")->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--paper-convention-ilz", opt.paper_convention, "render non-integrable integrals as 0");
  app.add_option("--n", opt.n, "power n");
  app.add_option("--m", opt.m, "coset modulus for refine");
  app.add_option("--modulus", opt.modulus, "coset modulus for prepare")->check(CLI::PositiveNumber);
  app.add_option("--field", opt.field, "qp, fp or q")->check(CLI::IsMember({"qp", "fp", "q"}));
  app.add_option("--mode", opt.mode, "abs or v")->check(CLI::IsMember({"abs", "v"}));
  app.add_option("--exponent", opt.exponent, "exponent s in |f|^s");
  app.add_option("--domain", opt.domain, "R, M or a JSON cell");
  app.add_option("--depth", opt.depth, "oracle residue depth")->check(CLI::PositiveNumber);

  std::string chosen;
  for (const auto& [name, entry] : commands()) {
    auto* sub = app.add_subcommand(name, entry.second);
    sub->fallthrough();
    sub->add_option("inputs", opt.inputs, "arguments");
    sub->callback([&chosen, name = name] { chosen = name; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "syntax error: " << e.what() << "\n";
    return 2;
  }

  try {
    std::optional<std::string> stdin_text;
    for (auto& input : opt.inputs) {
      if (input != "-") continue;
      if (!stdin_text) stdin_text = slurp(in);
      input = *stdin_text;
    }
    if (opt.domain && *opt.domain == "-") {
      if (!stdin_text) stdin_text = slurp(in);
      opt.domain = *stdin_text;
    }
    std::ostringstream buffer;
    Context ctx{chosen, opt, buffer};
    commands().at(chosen).first(ctx);
    out << buffer.str();
    return 0;
  } catch (const SyntaxError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const Json::exception& e) {
    err << "invalid-argument: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace pminimal::cli
