#include "pminimal/cells.hpp"

#include <algorithm>
#include <sstream>

#include "pminimal/error.hpp"
#include "pminimal/hensel.hpp"

namespace pminimal {

Cell Cell::point(long p, const Rational& center) { return Cell{p, center, std::nullopt, std::nullopt, 0, 1}; }

Cell Cell::punctured(long p, const Rational& center, const Rational& lambda, long n) {
  return Cell{p, center, std::nullopt, std::nullopt, lambda, n};
}

void Cell::validate() const {
  if (!is_prime(prime)) throw Error(ErrorKind::kInvalidArgument, "cell prime is not prime");
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "cell modulus n must be >= 1");
  if (is_point() && (lo || hi)) throw Error(ErrorKind::kInvalidArgument, "(0)-cell cannot carry bounds");
}

std::string Measure::to_string() const { return infinite ? "INFINITE" : pminimal::to_string(value); }

namespace {

long lambda_valuation(const Cell& cell) { return valuation_p(cell.lambda, cell.prime); }

}  // namespace

bool level_admissible(const Cell& cell, long k) {
  if (cell.hi && k <= *cell.hi) return false;
  if (cell.lo && k >= *cell.lo) return false;
  return mod_floor(k - lambda_valuation(cell), cell.n) == 0;
}

std::optional<long> first_level(const Cell& cell) {
  if (!cell.hi) return std::nullopt;
  const long start = *cell.hi + 1;
  return start + mod_floor(lambda_valuation(cell) - start, cell.n);
}

std::optional<long> last_level(const Cell& cell) {
  if (!cell.lo) return std::nullopt;
  const long end = *cell.lo - 1;
  return end - mod_floor(end - lambda_valuation(cell), cell.n);
}

bool cell_contains(const Cell& cell, const Rational& t) {
  if (cell.is_point()) return t == cell.center;
  if (t == cell.center) return false;
  const Rational d = t - cell.center;
  const long k = valuation_p(d, cell.prime);
  if (cell.hi && k <= *cell.hi) return false;
  if (cell.lo && k >= *cell.lo) return false;
  return coset_of(d, cell.n, cell.prime) == coset_of(cell.lambda, cell.n, cell.prime);
}

bool cell_is_empty(const Cell& cell) {
  if (cell.is_point()) return false;
  const auto first = first_level(cell);
  const auto last = last_level(cell);
  if (first && last) return *first > *last;
  return false;
}

Rational level_measure(const Cell& cell, long k) {
  const long p = cell.prime;
  return power_of(p, -k) * Rational(p - 1, p) / unit_class_count(p, cell.n);
}

Measure cell_measure(const Cell& cell) {
  if (cell.is_point() || cell_is_empty(cell)) return Measure::finite(0);
  const auto first = first_level(cell);
  if (!first) return Measure::infinity();
  const long p = cell.prime;
  const Rational per_level = Rational(p - 1, p) / unit_class_count(p, cell.n);
  Rational sum = 0;
  if (const auto last = last_level(cell)) {
    for (long k = *first; k <= *last; k += cell.n) sum += power_of(p, -k);
  } else {
    sum = power_of(p, -*first) / (1 - power_of(p, -cell.n));
  }
  return Measure::finite(sum * per_level);
}

std::vector<Cell> refine_by_coset(const Cell& cell, long m) {
  if (cell.is_point()) throw Error(ErrorKind::kInvalidArgument, "cannot refine a (0)-cell by cosets");
  if (m < 1) throw Error(ErrorKind::kInvalidArgument, "coset modulus must be >= 1");
  const long target = lcm(cell.n, m);
  if (target == cell.n) return {cell};
  const CosetRep mine = coset_of(cell.lambda, cell.n, cell.prime);
  std::vector<Cell> out;
  for (const auto& rep : coset_reps(cell.prime, target)) {
    if (!(coset_of(rep.representative, cell.n, cell.prime) == mine)) continue;
    Cell sub = cell;
    sub.lambda = rep.representative;
    sub.n = target;
    if (!cell_is_empty(sub)) out.push_back(std::move(sub));
  }
  return out;
}

Rational canonical_lambda(const Cell& cell) {
  if (cell.is_point()) return 0;
  return coset_of(cell.lambda, cell.n, cell.prime).representative;
}

namespace {

std::strong_ordering compare_bound(const std::optional<long>& a, const std::optional<long>& b) {
  if (a.has_value() != b.has_value()) return a.has_value() ? std::strong_ordering::greater : std::strong_ordering::less;
  if (!a) return std::strong_ordering::equal;
  return *a <=> *b;
}

std::strong_ordering compare_rational(const Rational& a, const Rational& b) {
  const int c = cmp(a, b);
  return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

}  // namespace

std::strong_ordering canonical_compare(const Cell& a, const Cell& b) {
  if (auto c = compare_rational(a.center, b.center); c != 0) return c;
  if (auto c = compare_bound(a.hi, b.hi); c != 0) return c;
  if (auto c = compare_bound(a.lo, b.lo); c != 0) return c;
  if (auto c = compare_rational(canonical_lambda(a), canonical_lambda(b)); c != 0) return c;
  return a.n <=> b.n;
}

void sort_canonical(std::vector<Cell>& cells) {
  std::stable_sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return canonical_compare(a, b) < 0; });
}

namespace {

// "t - 3", "t + 1/2"
std::string shifted(const Rational& center) {
  if (center < 0) return "t + " + to_string(Rational(-center));
  return "t - " + to_string(center);
}

}  // namespace

std::string to_string(const Cell& cell) {
  std::ostringstream out;
  if (cell.is_point()) {
    out << "{" << to_string(cell.center) << "}";
    return out.str();
  }
  out << "{t : ";
  if (cell.hi || cell.lo) {
    if (cell.hi) out << *cell.hi << " < ";
    out << "v(" << shifted(cell.center) << ")";
    if (cell.lo) out << " < " << *cell.lo;
    out << ", ";
  }
  out << shifted(cell.center) << " in " << to_string(cell.lambda) << "*P" << cell.n << "}";
  return out.str();
}

}  // namespace pminimal
