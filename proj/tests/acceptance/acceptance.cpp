// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pminimal/cells.hpp"
#include "pminimal/cli.hpp"
#include "pminimal/constructible.hpp"
#include "pminimal/error.hpp"
#include "pminimal/hensel.hpp"
#include "pminimal/oracle.hpp"
#include "pminimal/parse.hpp"
#include "pminimal/prepare.hpp"
#include "pminimal/valued.hpp"

using namespace pminimal;
namespace o = pminimal::oracle;

namespace {

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS " : "FAIL ") << name << " - " << detail << std::endl;
  if (!ok) ++failures;
}

// Runs one criterion; an escaping exception is a failure.
void criterion(const std::string& name, const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail += std::string(" exception: ") + e.what();
  }
  report(name, ok, detail);
}

std::mt19937_64 rng(20240521);

long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

Rational random_nonzero_rational() {
  long a = 0;
  while (a == 0) a = uniform(-100000, 100000);
  return Rational(a) / uniform(1, 100000);
}

FieldElement random_element(const FieldContext& ctx) {
  if (ctx.kind == FieldKind::kQp) return FieldElement::rational(ctx.prime, random_nonzero_rational());
  const long val = uniform(-6, 6);
  std::vector<Rational> coeffs(static_cast<std::size_t>(uniform(1, 4)));
  for (auto& c : coeffs) c = ctx.kind == FieldKind::kLaurentFp ? Rational(uniform(0, ctx.prime - 1)) : Rational(uniform(-9, 9)) / uniform(1, 9);
  if (coeffs[0] == 0) coeffs[0] = 1;
  return LaurentSeries::exact(ctx.kind == FieldKind::kLaurentFp ? ctx.prime : 0, val, std::move(coeffs));
}

std::vector<FieldContext> contexts() {
  return {FieldContext::qp(2), FieldContext::qp(3), FieldContext::qp(5), FieldContext::laurent_fp(5),
          FieldContext::laurent_q()};
}

std::string str(const Rational& x) { return to_string(x); }

SplitPoly poly(const char* text) { return parse_split_poly(text); }

std::vector<Rational> roots_and_negatives(const std::vector<SplitPoly>& fs) {
  std::vector<Rational> extra;
  for (const auto& f : fs) {
    for (const auto& r : f.factors()) {
      extra.push_back(r.root);
      extra.push_back(-r.root);
      extra.push_back(r.root + 1);
    }
  }
  return extra;
}

ConstructibleFunction on(const ConstructibleFunction& f, const Cell& c) {
  return mul(f, ConstructibleFunction::indicator(c));
}

std::function<std::optional<Rational>(const Rational&)> oracle_abs_power(const SplitPoly& f, long p, long s) {
  return [f, p, s](const Rational& t) -> std::optional<Rational> {
    const Rational y = o::evaluate(f, t);
    if (y == 0) return std::nullopt;
    return power_of(p, -s * o::valuation(y, p));
  };
}

Rational absolute(const Rational& x) { return x < 0 ? Rational(-x) : x; }

// ---------------------------------------------------------------- criteria

bool valuation_axioms(std::string& detail) {
  long checked = 0;
  long bad = 0;
  for (const auto& ctx : contexts()) {
    for (int i = 0; i < 10000; ++i) {
      const FieldElement x = random_element(ctx);
      const FieldElement y = random_element(ctx);
      const long vx = valuation(x).value();
      const long vy = valuation(y).value();
      if (valuation(mul(x, y)).value() != vx + vy) ++bad;
      const FieldElement s = add(x, y);
      if (!s.is_exact_zero()) {
        const long vs = valuation(s).value();
        if (vs < std::min(vx, vy)) ++bad;
        if (vx != vy && vs != std::min(vx, vy)) ++bad;
      }
      ++checked;
    }
  }
  detail = std::to_string(checked) + " pairs over Q_2, Q_3, Q_5, F_5((t)), Q((t)); " + std::to_string(bad) + " violations";
  return bad == 0;
}

bool ac_homomorphism(std::string& detail) {
  long checked = 0;
  long bad = 0;
  for (const auto& ctx : contexts()) {
    for (int i = 0; i < 10000; ++i) {
      const FieldElement x = random_element(ctx);
      const FieldElement y = random_element(ctx);
      if (!(ac(mul(x, y)) == residue_mul(ac(x), ac(y)))) ++bad;
      if (valuation(x).value() == 0 && !(ac(x) == residue(x))) ++bad;
      ++checked;
    }
  }
  const bool zero_ok = ac(FieldElement::rational(5, 0)).value == 0;
  detail = std::to_string(checked) + " pairs; " + std::to_string(bad) + " violations; ac(0) = 0: " + (zero_ok ? "yes" : "no");
  return bad == 0 && zero_ok;
}

bool hensel(std::string& detail) {
  int lifted = 0;
  int bad = 0;
  const long target = 30;
  while (lifted < 50) {
    const long p = std::vector<long>{2, 3, 5, 7}[static_cast<std::size_t>(uniform(0, 3))];
    const long degree = uniform(2, 4);
    std::vector<Rational> c(static_cast<std::size_t>(degree + 1));
    for (auto& x : c) x = uniform(-20, 20);
    if (c.back() == 0) c.back() = 1;
    const Rational a = uniform(-50, 50);
    const Poly raw(c);
    const Rational d = raw.derivative()(a);
    if (d == 0) continue;
    const long vd = valuation_p(d, p);
    // shift the constant term so that v(f(a)) = 2 v(f'(a)) + 1 + j
    const long k = 2 * vd + 1 + uniform(0, 3);
    c[0] += -raw(a) + Rational(ipow(p, static_cast<unsigned>(k))) * (uniform(1, 4) * p + 1);
    const Poly f(c);
    const PAdicNumber r = hensel_lift(f, a, p, target);
    const Rational rep = r.representative();
    const Rational value = f(rep);
    const bool root = value == 0 || valuation_p(value, p) >= target;
    const bool near = rep - a == 0 || valuation_p(rep - a, p) > vd;
    if (!root || !near) ++bad;
    ++lifted;
  }
  bool guard = false;
  try {
    hensel_lift(Poly(std::vector<Rational>{-2, 0, 1}), 1, 5, 10);
  } catch (const Error& e) {
    guard = e.kind() == ErrorKind::kHenselConditionFailed;
  }
  detail = std::to_string(lifted) + " lifts to p^30, " + std::to_string(bad) + " failures; condition guard " +
           (guard ? "raised" : "missing");
  return bad == 0 && guard;
}

bool power_predicates(std::string& detail) {
  long checked = 0;
  long bad = 0;
  for (long p : {2, 3, 5, 7}) {
    const auto points = o::default_grid(p).points();
    for (long n : {2, 3, 4}) {
      for (const auto& x : points) {
        if (x == 0) continue;
        if (is_nth_power(x, n, p) != o::is_nth_power(x, n, p)) ++bad;
        ++checked;
      }
    }
  }
  std::ostringstream idx;
  bool index_ok = true;
  for (long p : {3, 5, 7, 11}) {
    const long oracle_value = o::power_index(p, 2);
    index_ok = index_ok && oracle_value == 4 && power_index(p, 2) == oracle_value;
    idx << " [" << p << ",2]=" << power_index(p, 2);
  }
  const long i22 = o::power_index(2, 2);
  const long i33 = o::power_index(3, 3);
  index_ok = index_ok && i22 == 8 && power_index(2, 2) == i22 && i33 == 9 && power_index(3, 3) == i33;
  idx << " [2,2]=" << power_index(2, 2) << " [3,3]=" << power_index(3, 3);
  detail = std::to_string(checked) + " grid checks, " + std::to_string(bad) + " disagreements; index" + idx.str() +
           " (oracle agrees: " + (index_ok ? "yes" : "no") + ")";
  return bad == 0 && index_ok;
}

std::vector<Cell> bounded_cell_corpus() {
  std::vector<Cell> base = {
      Cell{5, 0, 2, 0, 1, 1},     Cell{5, 0, 5, 0, 1, 2},     Cell{5, 0, 4, 2, 5, 2},   Cell{5, 1, 3, -1, 2, 2},
      Cell{3, 0, 3, -1, 1, 1},    Cell{3, 2, 4, 0, 3, 3},     Cell{3, 0, 5, -2, 2, 2},  Cell{2, 0, 4, -1, 1, 1},
      Cell{2, 0, 6, 0, 3, 2},     Cell{2, 1, 5, 1, 5, 2},     Cell{2, 0, 7, 0, 1, 4},   Cell{7, 0, 3, -1, 3, 2},
      Cell{7, 3, 2, 0, 1, 1},     Cell{5, Rational(1, 5), 2, -1, 1, 1}, Cell{3, 0, 1, 3, 1, 1},
      Cell{5, 0, 3, 1, 5, 2}};
  std::vector<Cell> corpus = base;
  for (const auto& c : base) {
    for (long m : {2, 3}) {
      for (auto& sub : refine_by_coset(c, m)) corpus.push_back(std::move(sub));
    }
  }
  return corpus;
}

long resolving_depth(const Cell& c) {
  long v = 0;
  for (long n = c.n; n % c.prime == 0; n /= c.prime) ++v;
  const auto last = last_level(c);
  const long deepest = last ? *last : *c.hi + 1;
  return std::max(deepest + 2 * v + 1, *c.hi + 2);
}

bool cell_measure_agreement(std::string& detail) {
  long checked = 0;
  long bad = 0;
  long empties = 0;
  for (const auto& c : bounded_cell_corpus()) {
    const long k = resolving_depth(c);
    const Rational exact = cell_measure(c).value;
    const Rational brute = o::measure(c, k);
    if (exact != brute) ++bad;
    if (o::measure(c, k + 1) != brute) ++bad;
    if (cell_is_empty(c)) {
      ++empties;
      if (brute != 0) ++bad;
    }
    ++checked;
  }
  // half-bounded cells: the center class is the only unresolved one
  long tails = 0;
  for (const Cell& c : {Cell{5, 0, std::nullopt, 0, 1, 1}, Cell{5, 0, std::nullopt, 0, 1, 2},
                        Cell{3, 1, std::nullopt, -1, 2, 2}, Cell{2, 0, std::nullopt, 0, 3, 2}}) {
    const long k = *c.hi + 7;
    if (absolute(cell_measure(c).value - o::measure(c, k)) > power_of(c.prime, -k)) ++bad;
    ++tails;
  }
  detail = std::to_string(checked) + " bounded cells exact (" + std::to_string(empties) + " empty), " +
           std::to_string(tails) + " half-bounded within p^-k; " + std::to_string(bad) + " mismatches";
  return bad == 0;
}

bool preparation(std::string& detail) {
  const std::vector<std::vector<SplitPoly>> corpus = {
      {poly("t")},
      {poly("t-1")},
      {poly("t*(t-1)")},
      {poly("(t-1)*(t+1)")},
      {poly("t^2*(t-3)")},
      {poly("t"), poly("t-1")},
      {poly("t*(t-1)"), poly("(t-1)*(t+1)"), poly("t^2*(t-3)")}};
  long runs = 0;
  long points = 0;
  long partition_bad = 0;
  long identity_bad = 0;
  for (long p : {3, 5, 7}) {
    for (const auto& fs : corpus) {
      const auto prepared = prepare(fs, p);
      std::vector<Cell> cells;
      for (const auto& c : prepared) cells.push_back(c.cell);
      const auto grid = o::default_grid(p, roots_and_negatives(fs));
      const auto partition = o::partition_check(cells, grid);
      partition_bad += partition.violation_count;
      for (const auto& t : grid.points()) {
        for (const auto& pc : prepared) {
          if (!o::contains(pc.cell, t)) continue;
          for (std::size_t j = 0; j < fs.size(); ++j) {
            const Rational y = o::evaluate(fs[j], t);
            if (pc.cell.lambda == 0) {
              if (y != pc.functions[j].h) ++identity_bad;
              continue;
            }
            if (y == 0) {
              ++identity_bad;
              continue;
            }
            // v(f_j(t)) = v(h_j) + a_j (v(t - gamma) - v(lambda)) / n
            const long k = o::valuation(t - pc.cell.center, p);
            const long num = pc.functions[j].a * (k - o::valuation(pc.cell.lambda, p));
            if (num % pc.cell.n != 0 || o::valuation(y, p) != o::valuation(pc.functions[j].h, p) + num / pc.cell.n) {
              ++identity_bad;
            }
          }
        }
        ++points;
      }
      ++runs;
    }
  }
  detail = std::to_string(runs) + " preparations, " + std::to_string(points) + " grid points; partition violations " +
           std::to_string(partition_bad) + ", identity violations " + std::to_string(identity_bad);
  return partition_bad == 0 && identity_bad == 0;
}

bool decomposition(std::string& detail) {
  const std::vector<const char*> formulas = {
      "abs(t) < abs(1) & pow(2, t)",
      "!pow(2, t)",
      "abs(t-1) < abs(t)",
      "abs(t) <= abs(t-1)",
      "t*(t-1) = 0",
      "pow(3, t-1) | t = 0",
      "!(abs(t) < abs(1/3) | pow(2, t+1))",
      "pow(2, t*(t-1)) & !(t*(t-1) = 0)",
      "abs(t^2*(t-3)) < abs(3*(t+1)) & !pow(2, t)",
      "(pow(2, t) | pow(3, t)) & abs(t) <= abs(1)",
      "!!(abs(t+1) <= abs(t-1)) & !(t-1 = 0)",
      "pow(4, t) | (abs(t) < abs(t-1) & pow(2, 3*t))",
  };
  long checked = 0;
  long bad = 0;
  long cells = 0;
  for (long p : {3, 5}) {
    for (const char* text : formulas) {
      const Formula phi = parse_formula(text);
      const auto out = decompose(phi, p);
      cells += static_cast<long>(out.size());
      std::vector<Rational> extra = {1, -1, 3, -3, 2, Rational(1, 3)};
      const auto report = o::partition_check(out, o::default_grid(p, extra),
                                             [&](const Rational& t) { return o::evaluate(phi, t, p); });
      checked += report.checked;
      bad += report.violation_count;
    }
  }
  detail = std::to_string(formulas.size()) + " formulas over p = 3, 5 (" + std::to_string(cells) + " cells), " +
           std::to_string(checked) + " point checks, " + std::to_string(bad) + " disagreements";
  return bad == 0;
}

bool integration(std::string& detail) {
  std::ostringstream msg;
  bool ok = true;
  const SplitPoly t = poly("t");
  for (long p : {2, 3, 5}) {
    const Cell R = valuation_ring_cell(p);
    const Cell M = maximal_ideal_cell(p);
    const auto v = from_prepared(t, prepare({t}, p), GeneratorMode::kValuation, 0, VanishingPolicy::kDrop);
    const auto abs_t = abs_power(t, p, 1);
    const auto abs_t2 = abs_power(t, p, 2);
    struct Case {
      const char* name;
      IntegralValue value;
      Rational expected;
      std::function<std::optional<Rational>(const Rational&)> g;
      Cell domain;
      std::function<Rational(long)> bound;
    };
    const std::vector<Case> cases = {
        {"v(t)|R", integrate(on(v, R)), Rational(1, p - 1),
         [p](const Rational& x) -> std::optional<Rational> {
           if (x == 0) return std::nullopt;
           return Rational(o::valuation(x, p));
         },
         R, [p](long k) -> Rational { return Rational(k + 1) * power_of(p, -k); }},
        {"|t||M", integrate(on(abs_t, M)), Rational(1, p * (p + 1)), oracle_abs_power(t, p, 1), M,
         [p](long k) -> Rational { return power_of(p, -k); }},
        {"|t|^2|R", integrate(on(abs_t2, R)), Rational(p - 1, p) / (1 - power_of(p, -3)), oracle_abs_power(t, p, 2), R,
         [p](long k) -> Rational { return power_of(p, -k); }},
    };
    for (const auto& c : cases) {
      const bool exact = c.value.integrable && c.value.value == c.expected;
      const long k1 = p == 2 ? 10 : 6;
      const long k2 = k1 + 2;
      const Rational e1 = absolute(o::integrate(c.g, c.domain, k1) - c.value.value);
      const Rational e2 = absolute(o::integrate(c.g, c.domain, k2) - c.value.value);
      const bool within = e1 <= c.bound(k1) && e2 <= c.bound(k2) && c.bound(k2) < c.bound(k1);
      ok = ok && exact && within;
      if (!exact || !within) {
        msg << " " << c.name << "@" << p << "=" << c.value.to_string() << " (oracle errors " << str(e1) << ", " << str(e2)
            << ");";
      }
    }
  }
  msg << " closed forms 1/(p-1), 1/(p(p+1)), (1-1/p)/(1-p^-3) for p = 2, 3, 5 within tail bounds;";

  struct ZetaCase {
    const char* text;
    long p;
    long depth;
  };
  for (const ZetaCase& zc : {ZetaCase{"t", 5, 7}, ZetaCase{"t^2", 5, 7}, ZetaCase{"t*(t-1)", 3, 12}}) {
    const SplitPoly f = poly(zc.text);
    const Cell R = valuation_ring_cell(zc.p);
    const RationalFunctionT z = igusa_zeta(f, zc.p, R);
    msg << " Z[" << zc.text << ",p=" << zc.p << "] = " << z.to_string() << ";";
    for (long s = 1; s <= 3; ++s) {
      const Rational at = z(power_of(zc.p, -s));
      const IntegralValue direct = integrate(on(abs_power(f, zc.p, s), R));
      const Rational brute = o::integrate(oracle_abs_power(f, zc.p, s), R, zc.depth);
      const Rational bound = Rational(f.degree()) * power_of(zc.p, -zc.depth);
      const bool good = direct.integrable && at == direct.value && absolute(at - brute) <= bound;
      if (!good) {
        ok = false;
        msg << " s=" << s << " mismatch (Z=" << str(at) << ", integral=" << direct.to_string() << ", oracle=" << str(brute)
            << ");";
      }
    }
  }
  detail = msg.str();
  return ok;
}

bool divergence(std::string& detail) {
  const IntegralValue v = integrate(on(abs_power(poly("t"), 5, -1), maximal_ideal_cell(5)));
  std::istringstream in;
  std::ostringstream plain_out;
  std::ostringstream paper_out;
  std::ostringstream err;
  const int c1 = cli::run({"integrate", "--prime", "5", "--domain", "M", "--exponent", "-1", "t"}, in, plain_out, err);
  const int c2 = cli::run({"integrate", "--prime", "5", "--domain", "M", "--exponent", "-1", "--paper-convention-ilz", "t"},
                          in, paper_out, err);
  detail = "library: " + v.to_string() + "; cli: '" + plain_out.str().substr(0, plain_out.str().size() - 1) +
           "', with --paper-convention-ilz: '" + paper_out.str().substr(0, paper_out.str().size() - 1) + "'";
  return !v.integrable && c1 == 0 && c2 == 0 && plain_out.str() == "NON_INTEGRABLE\n" && paper_out.str() == "0\n";
}

std::string run_cli(const std::vector<std::string>& args, int* code = nullptr) {
  std::istringstream in;
  std::ostringstream out;
  std::ostringstream err;
  const int c = cli::run(args, in, out, err);
  if (code) *code = c;
  return out.str();
}

bool cli_contract(std::string& detail) {
  const std::vector<std::vector<std::string>> commands = {
      {"prepare", "--prime", "3", "--format", "json", "t*(t-1)"},
      {"prepare", "--prime", "5", "--modulus", "2", "--format", "json", "t", "t-1"},
      {"decompose", "--prime", "5", "--format", "json", "!pow(2,t)"},
      {"zeta", "--prime", "3", "--format", "json", "t*(t-1)"},
      {"refine", "--prime", "5", "--m", "2", "--format", "json", R"({"center":"0","lo":null,"hi":0,"lambda":"1","n":1})"},
      {"cosets", "--prime", "2", "--n", "2", "--format", "json"},
      {"integrate", "--prime", "2", "--mode", "v", "--format", "json", "t"},
  };
  long identical = 0;
  for (const auto& args : commands) {
    int code = 0;
    const std::string first = run_cli(args, &code);
    if (code == 0 && !first.empty() && first == run_cli(args)) ++identical;
  }
  // JSON fed back: decompose output measured, refine output refined again
  const std::string cells = run_cli({"decompose", "--prime", "5", "--format", "json", "abs(t) < abs(1) & !pow(2,t)"});
  const std::string measured = run_cli({"measure", "--prime", "5", cells});
  const std::string refined = run_cli({"refine", "--prime", "5", "--m", "2", "--format", "json", cells});
  const bool refeed = measured == "11/60\n" && run_cli({"measure", "--prime", "5", refined}) == measured &&
                      run_cli({"refine", "--prime", "5", "--m", "2", "--format", "json", refined}) == refined;

  long round_trips = 0;
  long round_bad = 0;
  for (const char* text : {"t", "t-1", "t*(t-1)", "(t-1)*(t+1)", "t^2*(t-3)", "3/2*(t-1)^2*(t+4)", "-t*(t+1/2)", "7"}) {
    const SplitPoly f = poly(text);
    if (!(parse_split_poly(render(f)) == f)) ++round_bad;
    ++round_trips;
  }
  for (const char* text : {"abs(t) < abs(1) & pow(2, t)", "!pow(2,t)", "abs(t-1) < abs(t)", "t*(t-1) = 0",
                           "!(abs(t) < abs(1/3) | pow(2, t+1))", "(pow(2, t) | pow(3, t)) & abs(t) <= abs(1)"}) {
    const Formula phi = parse_formula(text);
    if (!(parse_formula(render(phi)) == phi)) ++round_bad;
    ++round_trips;
  }
  const bool zeta_text = run_cli({"zeta", "--prime", "5", "t"}) == "Z(T) = (4/5)/(1 - T/5)\n";
  const bool index_text = run_cli({"index", "--prime", "2", "--n", "2"}) == "8\n";
  detail = std::to_string(identical) + "/" + std::to_string(commands.size()) + " commands byte-identical; JSON re-feed " +
           (refeed ? "stable" : "unstable") + "; " + std::to_string(round_trips - round_bad) + "/" +
           std::to_string(round_trips) + " render round trips; zeta/index text " + (zeta_text && index_text ? "ok" : "wrong");
  return identical == static_cast<long>(commands.size()) && refeed && round_bad == 0 && zeta_text && index_text;
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  criterion("valuation-axioms", valuation_axioms);
  criterion("ac-homomorphism", ac_homomorphism);
  criterion("hensel-lifting", hensel);
  criterion("power-predicates", power_predicates);
  criterion("cell-measure", cell_measure_agreement);
  criterion("preparation", preparation);
  criterion("decomposition", decomposition);
  criterion("integration-closure", integration);
  criterion("divergence", divergence);
  criterion("cli-contract", cli_contract);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.1f s", seconds);
  report("runtime", seconds < 120.0, std::string(buffer) + " (budget 120 s)");
  return failures == 0 ? 0 : 1;
}
