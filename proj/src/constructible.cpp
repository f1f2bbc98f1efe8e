#include "pminimal/constructible.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "pminimal/error.hpp"

namespace pminimal {

namespace {

Rational binomial(long n, long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(r);
}

Rational rpow(const Rational& x, long k) {
  if (k < 0) return rpow(1 / x, -k);
  Rational r = 1;
  for (long i = 0; i < k; ++i) r *= x;
  return r;
}

std::vector<Term> normalize_terms(std::vector<Term> terms) {
  std::map<std::pair<long, long>, Rational> merged;
  for (const auto& t : terms) merged[{t.d, t.e}] += t.q;
  std::vector<Term> out;
  for (const auto& [key, q] : merged) {
    if (q != 0) out.push_back({q, key.first, key.second});
  }
  return out;
}

Rational evaluate_terms(const Cell& cell, const std::vector<Term>& terms, const Rational& t) {
  Rational sum = 0;
  if (cell.is_point()) {
    for (const auto& term : terms) sum += term.q;
    return sum;
  }
  const long k = valuation_p(t - cell.center, cell.prime);
  for (const auto& term : terms) sum += term.q * rpow(Rational(k), term.d) * power_of(cell.prime, -term.e * k);
  return sum;
}

std::vector<Piece> normalize_pieces(std::vector<Piece> pieces) {
  std::vector<Piece> out;
  for (auto& piece : pieces) {
    piece.terms = normalize_terms(std::move(piece.terms));
    if (!piece.terms.empty()) out.push_back(std::move(piece));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Piece& a, const Piece& b) { return canonical_compare(a.cell, b.cell) < 0; });
  return out;
}

}  // namespace

ConstructibleFunction::ConstructibleFunction(long p, std::vector<Piece> pieces) : prime_(p) {
  for (const auto& piece : pieces) {
    piece.cell.validate();
    if (piece.cell.prime != p) throw Error(ErrorKind::kFieldMismatch, "piece over a different prime");
    if (piece.cell.is_point()) {
      for (const auto& t : piece.terms) {
        if (t.d != 0 || t.e != 0) throw Error(ErrorKind::kInvalidArgument, "(0)-cell pieces must be constant");
      }
    }
    for (const auto& t : piece.terms) {
      if (t.d < 0) throw Error(ErrorKind::kInvalidArgument, "term degree must be >= 0");
    }
  }
  pieces_ = normalize_pieces(std::move(pieces));
}

ConstructibleFunction ConstructibleFunction::indicator(const Cell& cell) {
  return ConstructibleFunction(cell.prime, {Piece{cell, {Term{1, 0, 0}}}});
}

Rational ConstructibleFunction::operator()(const Rational& t) const {
  for (const auto& piece : pieces_) {
    if (cell_contains(piece.cell, t)) return evaluate_terms(piece.cell, piece.terms, t);
  }
  return 0;
}

ConstructibleFunction from_prepared(const SplitPoly& f, const std::vector<PreparedCell>& cells, GeneratorMode mode,
                                    std::size_t index, VanishingPolicy policy) {
  if (cells.empty()) throw Error(ErrorKind::kInvalidArgument, "empty preparation");
  const long p = cells.front().cell.prime;
  std::vector<Piece> pieces;
  for (const auto& pc : cells) {
    if (index >= pc.functions.size()) throw Error(ErrorKind::kInvalidArgument, "function index out of range");
    if (pc.cell.is_point()) {
      const Rational h = f(pc.cell.center);
      if (h == 0) {
        if (mode == GeneratorMode::kValuation && policy == VanishingPolicy::kReject) {
          throw Error(ErrorKind::kValuationOfZero, "f vanishes at " + to_string(pc.cell.center));
        }
        continue;
      }
      const long vh = valuation_p(h, p);
      if (mode == GeneratorMode::kAbs) {
        pieces.push_back({pc.cell, {{power_of(p, -vh), 0, 0}}});
      } else {
        pieces.push_back({pc.cell, {{Rational(vh), 0, 0}}});
      }
      continue;
    }
    const long vh = valuation_p(pc.coefficient(index), p);
    const long a = pc.exponent(index);
    if (mode == GeneratorMode::kAbs) {
      pieces.push_back({pc.cell, {{power_of(p, -vh), 0, a}}});
    } else {
      pieces.push_back({pc.cell, {{Rational(vh), 0, 0}, {Rational(a), 1, 0}}});
    }
  }
  return ConstructibleFunction(p, std::move(pieces));
}

ConstructibleFunction abs_power(const SplitPoly& f, long p, long s) {
  std::vector<Piece> pieces;
  for (const auto& pc : prepare({f}, p)) {
    if (pc.cell.is_point()) {
      const Rational h = pc.functions[0].h;
      if (h == 0) continue;
      pieces.push_back({pc.cell, {{power_of(p, -s * valuation_p(h, p)), 0, 0}}});
      continue;
    }
    const long vh = valuation_p(pc.coefficient(0), p);
    pieces.push_back({pc.cell, {{power_of(p, -s * vh), 0, s * pc.exponent(0)}}});
  }
  return ConstructibleFunction(p, std::move(pieces));
}

namespace {

// Terms of `piece` rewritten in the level coordinate of the refined cell rc,
// where target index i is piece's position among the refinement targets.
std::vector<Term> reexpress(const Piece& piece, const RefinedCell& rc, std::size_t i) {
  const Cell& cell = rc.prepared.cell;
  if (cell.is_point()) return {{evaluate_terms(piece.cell, piece.terms, cell.center), 0, 0}};
  const long p = cell.prime;
  const long slope = rc.prepared.exponent(i);
  const long offset = valuation_p(rc.prepared.coefficient(i), p);
  std::vector<Term> out;
  for (const auto& term : piece.terms) {
    const Rational scale = term.q * power_of(p, -term.e * offset);
    if (slope == 0) {
      out.push_back({scale * rpow(Rational(offset), term.d), 0, 0});
      continue;
    }
    // (offset + k)^d p^(-e k)
    for (long r = 0; r <= term.d; ++r) {
      out.push_back({scale * binomial(term.d, r) * rpow(Rational(offset), term.d - r), r, term.e});
    }
  }
  return out;
}

std::vector<Term> multiply_terms(const std::vector<Term>& a, const std::vector<Term>& b) {
  std::vector<Term> out;
  for (const auto& x : a) {
    for (const auto& y : b) out.push_back({x.q * y.q, x.d + y.d, x.e + y.e});
  }
  return out;
}

enum class Combine { kAdd, kMul, kLeftOnly };

ConstructibleFunction combine(const ConstructibleFunction& f, const ConstructibleFunction& g,
                              const std::vector<Cell>& extra, Combine how) {
  if (f.prime() != g.prime()) throw Error(ErrorKind::kFieldMismatch, "constructible functions over different primes");
  const long p = f.prime();
  std::vector<Cell> targets;
  for (const auto& piece : f.pieces()) targets.push_back(piece.cell);
  for (const auto& piece : g.pieces()) targets.push_back(piece.cell);
  targets.insert(targets.end(), extra.begin(), extra.end());
  if (targets.empty()) return ConstructibleFunction(p);
  const std::size_t nf = f.pieces().size();
  const std::size_t ng = g.pieces().size();

  std::vector<Piece> pieces;
  for (const auto& rc : refine_against({}, targets, p)) {
    std::optional<std::vector<Term>> left;
    std::optional<std::vector<Term>> right;
    for (std::size_t i = 0; i < nf && !left; ++i) {
      if (rc.inside[i]) left = reexpress(f.pieces()[i], rc, i);
    }
    for (std::size_t i = 0; i < ng && !right; ++i) {
      if (rc.inside[nf + i]) right = reexpress(g.pieces()[i], rc, nf + i);
    }
    std::vector<Term> terms;
    switch (how) {
      case Combine::kAdd:
        if (left) terms = *left;
        if (right) terms.insert(terms.end(), right->begin(), right->end());
        break;
      case Combine::kMul:
        if (left && right) terms = multiply_terms(*left, *right);
        break;
      case Combine::kLeftOnly:
        if (left) terms = *left;
        break;
    }
    if (!terms.empty()) pieces.push_back({rc.prepared.cell, std::move(terms)});
  }
  return ConstructibleFunction(p, std::move(pieces));
}

}  // namespace

ConstructibleFunction add(const ConstructibleFunction& f, const ConstructibleFunction& g) {
  return combine(f, g, {}, Combine::kAdd);
}

ConstructibleFunction mul(const ConstructibleFunction& f, const ConstructibleFunction& g) {
  return combine(f, g, {}, Combine::kMul);
}

ConstructibleFunction scale(const ConstructibleFunction& f, const Rational& c) {
  std::vector<Piece> pieces = f.pieces();
  for (auto& piece : pieces) {
    for (auto& t : piece.terms) t.q *= c;
  }
  return ConstructibleFunction(f.prime(), std::move(pieces));
}

ConstructibleFunction algebra(AlgebraOp op, const ConstructibleFunction& f, const ConstructibleFunction& g) {
  return op == AlgebraOp::kAdd ? add(f, g) : mul(f, g);
}

ConstructibleFunction refine(const ConstructibleFunction& f, const std::vector<Cell>& cells) {
  return combine(f, ConstructibleFunction(f.prime()), cells, Combine::kLeftOnly);
}

// ---------------------------------------------------------------- integrate

std::string IntegralValue::to_string(bool paper_convention) const {
  if (integrable) return pminimal::to_string(value);
  return paper_convention ? "0" : "NON_INTEGRABLE";
}

Rational polylog_sum(long i, const Rational& x) {
  if (i < 0 || i > kMaxLevelDegree) {
    throw Error(ErrorKind::kUnsupportedDegree, "level degree " + std::to_string(i) + " exceeds " +
                                                   std::to_string(kMaxLevelDegree));
  }
  // Stirling numbers of the second kind S(i, m).
  std::vector<std::vector<Rational>> stirling(static_cast<std::size_t>(i + 1),
                                              std::vector<Rational>(static_cast<std::size_t>(i + 1), Rational(0)));
  stirling[0][0] = 1;
  for (long a = 1; a <= i; ++a) {
    for (long b = 1; b <= a; ++b) {
      stirling[a][b] = stirling[a - 1][b - 1] + Rational(b) * stirling[a - 1][b];
    }
  }
  Rational sum = 0;
  Rational factorial = 1;
  for (long m = 0; m <= i; ++m) {
    if (m > 0) factorial *= m;
    sum += stirling[i][m] * factorial * rpow(x, m) / rpow(1 - x, m + 1);
  }
  return sum;
}

namespace {

// sum over admissible levels k of k^d * p^(-(e+1) k); nullopt if divergent.
std::optional<Rational> level_sum(const Cell& cell, long d, long e) {
  if (d > kMaxLevelDegree) {
    throw Error(ErrorKind::kUnsupportedDegree, "level degree " + std::to_string(d) + " exceeds " +
                                                   std::to_string(kMaxLevelDegree));
  }
  if (cell_is_empty(cell)) return Rational(0);
  const long p = cell.prime;
  const Rational y = power_of(p, -(e + 1));
  const auto first = first_level(cell);
  const auto last = last_level(cell);
  if (first && last) {
    Rational sum = 0;
    for (long k = *first; k <= *last; k += cell.n) sum += rpow(Rational(k), d) * rpow(y, k);
    return sum;
  }
  if (first) {
    if (e + 1 <= 0) return std::nullopt;
    const Rational x = rpow(y, cell.n);
    Rational sum = 0;
    for (long i = 0; i <= d; ++i) {
      sum += binomial(d, i) * rpow(Rational(*first), d - i) * rpow(Rational(cell.n), i) * polylog_sum(i, x);
    }
    return rpow(y, *first) * sum;
  }
  if (last) {
    if (e + 1 >= 0) return std::nullopt;
    const Rational x = rpow(y, -cell.n);
    Rational sum = 0;
    for (long i = 0; i <= d; ++i) {
      sum += binomial(d, i) * rpow(Rational(*last), d - i) * rpow(Rational(-cell.n), i) * polylog_sum(i, x);
    }
    return rpow(y, *last) * sum;
  }
  return std::nullopt;
}

}  // namespace

IntegralValue integrate(const ConstructibleFunction& f) {
  Rational total = 0;
  for (const auto& piece : f.pieces()) {
    if (piece.cell.is_point()) continue;
    const long p = piece.cell.prime;
    const Rational weight = Rational(p - 1, p) / unit_class_count(p, piece.cell.n);
    for (const auto& term : piece.terms) {
      const auto s = level_sum(piece.cell, term.d, term.e);
      if (!s) return IntegralValue::non_integrable();
      total += term.q * weight * *s;
    }
  }
  return {true, total};
}

// --------------------------------------------------------- RationalFunctionT

namespace {

Poly poly_add(const Poly& a, const Poly& b) {
  std::vector<Rational> c(std::max(a.coeffs().size(), b.coeffs().size()), Rational(0));
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) c[i] += a.coeffs()[i];
  for (std::size_t i = 0; i < b.coeffs().size(); ++i) c[i] += b.coeffs()[i];
  return Poly(std::move(c));
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.degree() < 0 || b.degree() < 0) return Poly();
  std::vector<Rational> c(a.coeffs().size() + b.coeffs().size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs().size(); ++j) c[i + j] += a.coeffs()[i] * b.coeffs()[j];
  }
  return Poly(std::move(c));
}

Poly poly_scale(const Poly& a, const Rational& s) {
  std::vector<Rational> c = a.coeffs();
  for (auto& x : c) x *= s;
  return Poly(std::move(c));
}

std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b) {
  std::vector<Rational> rem = a.coeffs();
  const auto& bc = b.coeffs();
  if (a.degree() < b.degree()) return {Poly(), a};
  std::vector<Rational> q(static_cast<std::size_t>(a.degree() - b.degree() + 1), Rational(0));
  for (long i = a.degree() - b.degree(); i >= 0; --i) {
    const Rational c = rem[static_cast<std::size_t>(i + b.degree())] / bc.back();
    q[static_cast<std::size_t>(i)] = c;
    for (std::size_t j = 0; j < bc.size(); ++j) rem[static_cast<std::size_t>(i) + j] -= c * bc[j];
  }
  return {Poly(std::move(q)), Poly(std::move(rem))};
}

Poly poly_gcd(Poly a, Poly b) {
  while (b.degree() >= 0) {
    Poly r = poly_divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.degree() < 0) return a;
  return poly_scale(a, 1 / a.coeffs().back());
}

Poly monomial(const Rational& c, long k) {
  std::vector<Rational> v(static_cast<std::size_t>(k + 1), Rational(0));
  v[static_cast<std::size_t>(k)] = c;
  return Poly(std::move(v));
}

std::string render_t_poly(const Poly& p) {
  if (p.degree() < 0) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t k = 0; k < p.coeffs().size(); ++k) {
    const Rational& c = p.coeffs()[k];
    if (c == 0) continue;
    if (first) {
      if (c < 0) out << "-";
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    first = false;
    const Integer num = abs(c.get_num());
    const Integer den = c.get_den();
    if (k == 0) {
      out << num.get_str();
    } else {
      if (num != 1) out << num.get_str() << "*";
      out << "T";
      if (k > 1) out << "^" << k;
    }
    if (den != 1) out << "/" << den.get_str();
  }
  return out.str();
}

}  // namespace

RationalFunctionT::RationalFunctionT(Poly num, Poly den) {
  if (den.degree() < 0) throw Error(ErrorKind::kDivisionByZero, "zero denominator");
  if (num.degree() < 0) {
    num_ = Poly();
    den_ = Poly(std::vector<Rational>{1});
    return;
  }
  const Poly g = poly_gcd(num, den);
  num = poly_divmod(num, g).first;
  den = poly_divmod(den, g).first;
  Rational lowest = 0;
  for (const auto& c : den.coeffs()) {
    if (c != 0) {
      lowest = c;
      break;
    }
  }
  num_ = poly_scale(num, 1 / lowest);
  den_ = poly_scale(den, 1 / lowest);
}

Rational RationalFunctionT::operator()(const Rational& t) const {
  const Rational d = den_(t);
  if (d == 0) throw Error(ErrorKind::kDivisionByZero, "pole at T = " + pminimal::to_string(t));
  return num_(t) / d;
}

RationalFunctionT operator+(const RationalFunctionT& a, const RationalFunctionT& b) {
  return RationalFunctionT(poly_add(poly_mul(a.num_, b.den_), poly_mul(b.num_, a.den_)), poly_mul(a.den_, b.den_));
}

std::string RationalFunctionT::to_string() const {
  return "(" + render_t_poly(num_) + ")/(" + render_t_poly(den_) + ")";
}

Cell valuation_ring_cell(long p) { return Cell{p, 0, std::nullopt, -1, 1, 1}; }
Cell maximal_ideal_cell(long p) { return Cell{p, 0, std::nullopt, 0, 1, 1}; }

RationalFunctionT igusa_zeta(const SplitPoly& f, long p, const Cell& domain) {
  domain.validate();
  if (domain.prime != p) throw Error(ErrorKind::kFieldMismatch, "domain over a different prime");
  if (domain.is_point()) return RationalFunctionT();
  if (cell_measure(domain).infinite) throw Error(ErrorKind::kInvalidArgument, "domain must have finite measure");

  RationalFunctionT total;
  for (const auto& rc : refine_against({f}, {domain}, p)) {
    if (!rc.inside[0] || rc.prepared.cell.is_point()) continue;
    const Cell& cell = rc.prepared.cell;
    const auto first = first_level(cell);
    if (!first) throw Error(ErrorKind::kInvalidArgument, "unbounded cell inside a finite-measure domain");
    const long a = rc.prepared.exponent(0);
    const long vh = valuation_p(rc.prepared.coefficient(0), p);
    const Rational weight = Rational(p - 1, p) / unit_class_count(p, cell.n);
    // weight * sum_k p^-k T^(vh + a k)
    auto term_at = [&](long k) -> std::pair<Rational, long> { return {weight * power_of(p, -k), vh + a * k}; };
    auto as_function = [](const Rational& c, long exponent, const Poly& den) {
      if (exponent >= 0) return RationalFunctionT(monomial(c, exponent), den);
      return RationalFunctionT(Poly(std::vector<Rational>{c}), poly_mul(den, monomial(1, -exponent)));
    };
    const Poly one(std::vector<Rational>{1});
    if (const auto last = last_level(cell)) {
      for (long k = *first; k <= *last; k += cell.n) {
        const auto [c, exponent] = term_at(k);
        total = total + as_function(c, exponent, one);
      }
    } else {
      const auto [c, exponent] = term_at(*first);
      // 1 - p^-n T^(a n)
      const Poly den = poly_add(one, monomial(-power_of(p, -cell.n), a * cell.n));
      total = total + as_function(c, exponent, den);
    }
  }
  return total;
}

}  // namespace pminimal
