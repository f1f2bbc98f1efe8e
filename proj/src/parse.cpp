#include "pminimal/parse.hpp"

#include <cctype>
#include <map>
#include <optional>

#include "pminimal/error.hpp"

namespace pminimal {

namespace {

struct Value {
  Poly expanded;
  std::optional<SplitPoly> split;
};

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.degree() < 0 || b.degree() < 0) return Poly();
  std::vector<Rational> c(a.coeffs().size() + b.coeffs().size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs().size(); ++j) c[i + j] += a.coeffs()[i] * b.coeffs()[j];
  }
  return Poly(std::move(c));
}

Poly poly_add(const Poly& a, const Poly& b, const Rational& sign) {
  std::vector<Rational> c(std::max(a.coeffs().size(), b.coeffs().size()), Rational(0));
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) c[i] += a.coeffs()[i];
  for (std::size_t i = 0; i < b.coeffs().size(); ++i) c[i] += sign * b.coeffs()[i];
  return Poly(std::move(c));
}

// Recovers a split form for constants and linear polynomials.
void settle(Value& v) {
  if (v.split) return;
  const long d = v.expanded.degree();
  if (d == 0) v.split = SplitPoly::constant(v.expanded.coeffs()[0]);
  if (d == 1) {
    const auto& c = v.expanded.coeffs();
    v.split = SplitPoly(c[1], {{-c[0] / c[1], 1}});
  }
}

SplitPoly split_mul(const SplitPoly& a, const SplitPoly& b) {
  std::vector<RootFactor> factors = a.factors();
  factors.insert(factors.end(), b.factors().begin(), b.factors().end());
  return SplitPoly(a.unit() * b.unit(), std::move(factors));
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::size_t pos() const { return pos_; }
  void reset(std::size_t pos) { pos_ = pos; }

  [[noreturn]] void fail(const std::string& what) const {
    skip();
    const std::string found = pos_ < text_.size() ? "'" + std::string(1, text_[pos_]) + "'" : "end of input";
    throw SyntaxError(pos_ + 1, what + ", found " + found);
  }

  void skip() const {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end() const {
    skip();
    return pos_ >= text_.size();
  }

  bool peek(std::string_view s) const {
    skip();
    return text_.substr(pos_, s.size()) == s;
  }

  bool accept(std::string_view s) {
    if (!peek(s)) return false;
    pos_ += s.size();
    return true;
  }

  void expect(std::string_view s) {
    if (!accept(s)) fail("expected '" + std::string(s) + "'");
  }

  void expect_end() {
    if (!at_end()) fail("unexpected trailing input");
  }

  bool peek_digit() const {
    skip();
    return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
  }

  Integer integer() {
    if (!peek_digit()) fail("expected a nonnegative integer");
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return Integer(std::string(text_.substr(start, pos_ - start)));
  }

  long small_integer() {
    const std::size_t start = pos_;
    Integer v = integer();
    if (!v.fits_slong_p() || v > 1000000) {
      pos_ = start;
      skip();
      throw SyntaxError(pos_ + 1, "integer too large");
    }
    return v.get_si();
  }

  Rational number() {
    Integer num = integer();
    if (peek("/")) {
      const std::size_t save = pos_;
      accept("/");
      if (!peek_digit()) {
        pos_ = save;
        return Rational(num);
      }
      const std::size_t den_pos = pos_;
      Integer den = integer();
      if (den == 0) {
        pos_ = den_pos;
        skip();
        throw SyntaxError(pos_ + 1, "zero denominator");
      }
      Rational r(num, den);
      r.canonicalize();
      return r;
    }
    return Rational(num);
  }

  // ---- polynomials

  Value sum() {
    Value acc = product();
    for (;;) {
      Rational sign;
      if (accept("+")) {
        sign = 1;
      } else if (peek("-")) {
        accept("-");
        sign = -1;
      } else {
        break;
      }
      Value rhs = product();
      acc.expanded = poly_add(acc.expanded, rhs.expanded, sign);
      acc.split.reset();
    }
    return acc;
  }

  Value product() {
    Value acc = unary();
    while (accept("*")) {
      Value rhs = unary();
      acc.expanded = poly_mul(acc.expanded, rhs.expanded);
      if (acc.split && rhs.split) {
        acc.split = split_mul(*acc.split, *rhs.split);
      } else {
        acc.split.reset();
      }
    }
    return acc;
  }

  Value unary() {
    if (accept("-")) {
      Value v = unary();
      v.expanded = poly_add(Poly(), v.expanded, -1);
      if (v.split) v.split = SplitPoly(-v.split->unit(), v.split->factors());
      return v;
    }
    return power();
  }

  Value power() {
    Value base = primary();
    if (!accept("^")) return base;
    const long e = small_integer();
    Value out;
    out.expanded = Poly(std::vector<Rational>{1});
    for (long i = 0; i < e; ++i) out.expanded = poly_mul(out.expanded, base.expanded);
    if (base.split) {
      Rational unit = 1;
      for (long i = 0; i < e; ++i) unit *= base.split->unit();
      std::vector<RootFactor> factors;
      if (e > 0) {
        for (auto f : base.split->factors()) factors.push_back({f.root, f.multiplicity * e});
      }
      out.split = SplitPoly(unit, std::move(factors));
    }
    return out;
  }

  Value primary() {
    if (accept("(")) {
      Value v = sum();
      expect(")");
      settle(v);
      return v;
    }
    if (accept("t")) return {Poly(std::vector<Rational>{0, 1}), SplitPoly::linear(0)};
    if (peek_digit()) {
      const Rational c = number();
      Value v{Poly(std::vector<Rational>{c}), std::nullopt};
      if (c != 0) v.split = SplitPoly::constant(c);
      return v;
    }
    fail("expected a number, 't' or '('");
  }

  // ---- formulas

  Formula disjunction() {
    Formula acc = conjunction();
    while (accept("|")) acc = Formula::disj(std::move(acc), conjunction());
    return acc;
  }

  Formula conjunction() {
    Formula acc = negation();
    while (accept("&")) acc = Formula::conj(std::move(acc), negation());
    return acc;
  }

  Formula negation() {
    if (accept("!")) return Formula::negation(negation());
    if (peek("(")) {
      const std::size_t save = pos_;
      try {
        accept("(");
        Formula inner = disjunction();
        expect(")");
        return inner;
      } catch (const SyntaxError& first) {
        pos_ = save;
        try {
          return atom();
        } catch (const SyntaxError& second) {
          throw first.column() >= second.column() ? first : second;
        }
      }
    }
    return atom();
  }

  SplitPoly formula_poly() {
    const std::size_t start = pos_;
    Value v = sum();
    settle(v);
    if (v.split) return *v.split;
    if (v.expanded.degree() < 0) {
      pos_ = start;
      skip();
      throw SyntaxError(pos_ + 1, "the zero polynomial is not allowed here");
    }
    return split(v.expanded);
  }

  Formula atom() {
    if (accept("abs")) {
      expect("(");
      SplitPoly f = formula_poly();
      expect(")");
      bool strict = true;
      if (accept("<=")) {
        strict = false;
      } else {
        expect("<");
      }
      expect("abs");
      expect("(");
      SplitPoly g = formula_poly();
      expect(")");
      return strict ? Formula::abs_lt(std::move(f), std::move(g)) : Formula::abs_le(std::move(f), std::move(g));
    }
    if (accept("pow")) {
      expect("(");
      skip();
      const std::size_t n_pos = pos_;
      const long n = small_integer();
      if (n < 1) throw SyntaxError(n_pos + 1, "pow exponent must be >= 1");
      expect(",");
      SplitPoly f = formula_poly();
      expect(")");
      return Formula::pow(n, std::move(f));
    }
    SplitPoly f = formula_poly();
    expect("=");
    skip();
    if (!accept("0")) fail("expected '0'");
    return Formula::eqz(std::move(f));
  }

 private:
  std::string_view text_;
  mutable std::size_t pos_ = 0;
};

std::string render_root_factor(const RootFactor& f) {
  std::string s;
  if (f.root == 0) {
    s = "t";
  } else if (f.root > 0) {
    s = "(t-" + to_string(f.root) + ")";
  } else {
    s = "(t+" + to_string(Rational(-f.root)) + ")";
  }
  if (f.multiplicity > 1) s += "^" + std::to_string(f.multiplicity);
  return s;
}

}  // namespace

std::variant<SplitPoly, Poly> parse_poly(std::string_view text) {
  Parser parser(text);
  Value v = parser.sum();
  parser.expect_end();
  settle(v);
  if (v.split) return *v.split;
  return v.expanded;
}

SplitPoly parse_split_poly(std::string_view text) {
  auto parsed = parse_poly(text);
  if (auto* s = std::get_if<SplitPoly>(&parsed)) return *s;
  const Poly& p = std::get<Poly>(parsed);
  if (p.degree() < 0) throw Error(ErrorKind::kInvalidArgument, "the zero polynomial is not allowed here");
  return split(p);
}

Poly parse_expanded_poly(std::string_view text) {
  auto parsed = parse_poly(text);
  if (auto* s = std::get_if<SplitPoly>(&parsed)) return s->expand();
  return std::get<Poly>(parsed);
}

Formula parse_formula(std::string_view text) {
  Parser parser(text);
  Formula phi = parser.disjunction();
  parser.expect_end();
  return phi;
}

LaurentSeries parse_laurent(std::string_view text, long prime, std::optional<long> precision) {
  Parser parser(text);
  std::map<long, Rational> terms;
  bool first = true;
  while (first || !parser.at_end()) {
    Rational sign = 1;
    if (parser.accept("-")) {
      sign = -1;
    } else if (!first) {
      parser.expect("+");
    }
    first = false;
    Rational c = 1;
    long k = 0;
    bool has_coeff = false;
    if (parser.peek_digit()) {
      c = parser.number();
      has_coeff = true;
    }
    if (has_coeff && !parser.accept("*")) {
      terms[0] += sign * c;
      continue;
    }
    parser.expect("t");
    k = 1;
    if (parser.accept("^")) {
      const bool negative = parser.accept("-");
      k = parser.small_integer();
      if (negative) k = -k;
    }
    terms[k] += sign * c;
  }
  std::map<long, Rational> nonzero;
  for (const auto& [k, c] : terms) {
    Rational r = c;
    if (prime > 0) r = mod_rational(c, Integer(prime));
    if (r != 0) nonzero[k] = r;
  }
  if (nonzero.empty()) {
    return precision ? LaurentSeries::truncated(prime, 0, {}, 0) : LaurentSeries::exact_zero(prime);
  }
  const long lo = nonzero.begin()->first;
  const long hi = nonzero.rbegin()->first;
  std::vector<Rational> coeffs(static_cast<std::size_t>(hi - lo + 1), Rational(0));
  for (const auto& [k, c] : nonzero) coeffs[static_cast<std::size_t>(k - lo)] = c;
  if (precision) {
    coeffs.resize(std::min(coeffs.size(), static_cast<std::size_t>(*precision)), Rational(0));
    return LaurentSeries::truncated(prime, lo, std::move(coeffs), *precision);
  }
  return LaurentSeries::exact(prime, lo, std::move(coeffs));
}

std::string render(const SplitPoly& f) {
  if (f.factors().empty()) return to_string(f.unit());
  std::string out;
  if (f.unit() == -1) {
    out = "-";
  } else if (f.unit() != 1) {
    out = to_string(f.unit()) + "*";
  }
  bool first = true;
  for (const auto& factor : f.factors()) {
    if (!first) out += "*";
    first = false;
    out += render_root_factor(factor);
  }
  return out;
}

std::string render(const Poly& f) {
  if (f.degree() < 0) return "0";
  std::string out;
  for (long k = f.degree(); k >= 0; --k) {
    const Rational& c = f.coeffs()[static_cast<std::size_t>(k)];
    if (c == 0) continue;
    const bool negative = c < 0;
    const Rational a = negative ? Rational(-c) : c;
    if (out.empty()) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    if (k == 0) {
      out += to_string(a);
      continue;
    }
    if (a != 1) out += to_string(a) + "*";
    out += "t";
    if (k > 1) out += "^" + std::to_string(k);
  }
  return out;
}

std::string render(const Formula& phi) {
  switch (phi.kind()) {
    case Formula::Kind::kAbsLt:
      return "abs(" + render(phi.f()) + ") < abs(" + render(phi.g()) + ")";
    case Formula::Kind::kAbsLe:
      return "abs(" + render(phi.f()) + ") <= abs(" + render(phi.g()) + ")";
    case Formula::Kind::kPow:
      return "pow(" + std::to_string(phi.m()) + ", " + render(phi.f()) + ")";
    case Formula::Kind::kEqz:
      return render(phi.f()) + " = 0";
    case Formula::Kind::kAnd:
      return "(" + render(phi.children()[0]) + " & " + render(phi.children()[1]) + ")";
    case Formula::Kind::kOr:
      return "(" + render(phi.children()[0]) + " | " + render(phi.children()[1]) + ")";
    case Formula::Kind::kNot:
      return "!" + render(phi.children()[0]);
  }
  return "";
}

}  // namespace pminimal
