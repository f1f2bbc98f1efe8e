#include "pminimal/oracle.hpp"

#include <cmath>
#include <map>
#include <tuple>
#include <mutex>
#include <utility>

#include "pminimal/error.hpp"

namespace pminimal::oracle {

namespace {

Integer int_pow(long p, long k) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
  return r;
}

Rational rat_pow(long p, long k) { return k >= 0 ? Rational(int_pow(p, k)) : Rational(Integer(1), int_pow(p, -k)); }

long strip(Integer& x, long p) {
  const Integer pp(p);
  return static_cast<long>(mpz_remove(x.get_mpz_t(), x.get_mpz_t(), pp.get_mpz_t()));
}

long vp_long(long n, long p) {
  long v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

// Residue mod p^k of a rational whose numerator and denominator are prime to p.
Integer unit_residue(const Rational& u, long p, long k) {
  const Integer m = int_pow(p, k);
  Integer inv;
  mpz_invert(inv.get_mpz_t(), u.get_den().get_mpz_t(), m.get_mpz_t());
  Integer r = u.get_num() * inv;
  mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
  return r;
}

const std::set<Integer>& cached_classes(long p, long n, long k) {
  static std::mutex mutex;
  static std::map<std::tuple<long, long, long>, std::set<Integer>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_tuple(p, n, k);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, nth_power_classes(p, n, k)).first;
  return it->second;
}

// Two digits beyond where n-th power classes stabilize, so the check does not
// lean on the library's own threshold.
long enumeration_depth(long p, long n) { return 2 * vp_long(n, p) + 3; }

}  // namespace

std::vector<Rational> SampleGrid::points() const {
  std::vector<Rational> out;
  const long bound = int_pow(prime, depth).get_si();
  for (long v = v_lo; v <= v_hi; ++v) {
    const Rational scale = rat_pow(prime, v);
    for (long u = 1; u < bound; ++u) {
      if (u % prime != 0) out.push_back(scale * u);
    }
  }
  out.emplace_back(0);
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

SampleGrid default_grid(long p, std::vector<Rational> extra) {
  SampleGrid g;
  g.prime = p;
  g.depth = p <= 5 ? 6 : 4;
  g.extra = std::move(extra);
  return g;
}

long valuation(const Rational& x, long p) {
  if (x == 0) throw Error(ErrorKind::kValuationOfZero, "oracle valuation of 0");
  Integer num = x.get_num();
  Integer den = x.get_den();
  return strip(num, p) - strip(den, p);
}

Rational evaluate(const SplitPoly& f, const Rational& t) {
  Rational r = f.unit();
  for (const auto& factor : f.factors()) {
    for (long i = 0; i < factor.multiplicity; ++i) r *= t - factor.root;
  }
  return r;
}

std::set<Integer> nth_power_classes(long p, long n, long k) {
  const Integer m = int_pow(p, k);
  std::set<Integer> out;
  for (Integer u = 1; u < m; ++u) {
    if (mpz_divisible_ui_p(u.get_mpz_t(), static_cast<unsigned long>(p))) continue;
    Integer r;
    mpz_powm_ui(r.get_mpz_t(), u.get_mpz_t(), static_cast<unsigned long>(n), m.get_mpz_t());
    out.insert(r);
  }
  return out;
}

bool is_nth_power(const Rational& x, long n, long p) {
  if (x == 0) return false;
  const long v = valuation(x, p);
  if (v % n != 0) return false;
  const long k = enumeration_depth(p, n);
  const Rational u = x * rat_pow(p, -v);
  return cached_classes(p, n, k).count(unit_residue(u, p, k)) > 0;
}

long power_index(long p, long n) {
  const long k = enumeration_depth(p, n);
  const long units = int_pow(p, k - 1).get_si() * (p - 1);
  return n * units / static_cast<long>(nth_power_classes(p, n, k).size());
}

bool contains(const Cell& cell, const Rational& t) {
  if (cell.lambda == 0) return t == cell.center;
  const Rational d = t - cell.center;
  if (d == 0) return false;
  const long v = valuation(d, cell.prime);
  if (cell.hi && !(*cell.hi < v)) return false;
  if (cell.lo && !(v < *cell.lo)) return false;
  return is_nth_power(d / cell.lambda, cell.n, cell.prime);
}

bool evaluate(const Formula& phi, const Rational& t, long p) {
  auto abs_less = [&](const SplitPoly& f, const SplitPoly& g, bool strict) {
    const Rational a = evaluate(f, t);
    const Rational b = evaluate(g, t);
    if (b == 0) return !strict && a == 0;
    if (a == 0) return true;
    const long va = valuation(a, p);
    const long vb = valuation(b, p);
    return strict ? va > vb : va >= vb;
  };
  switch (phi.kind()) {
    case Formula::Kind::kAbsLt:
      return abs_less(phi.f(), phi.g(), true);
    case Formula::Kind::kAbsLe:
      return abs_less(phi.f(), phi.g(), false);
    case Formula::Kind::kPow:
      return is_nth_power(evaluate(phi.f(), t), phi.m(), p);
    case Formula::Kind::kEqz:
      return evaluate(phi.f(), t) == 0;
    case Formula::Kind::kAnd:
      return oracle::evaluate(phi.children()[0], t, p) && oracle::evaluate(phi.children()[1], t, p);
    case Formula::Kind::kOr:
      return oracle::evaluate(phi.children()[0], t, p) || oracle::evaluate(phi.children()[1], t, p);
    case Formula::Kind::kNot:
      return !oracle::evaluate(phi.children()[0], t, p);
  }
  return false;
}

std::vector<Rational> class_representatives(const Cell& cell, long k) {
  if (cell.lambda == 0) return {cell.center};
  if (!cell.hi) throw Error(ErrorKind::kInvalidArgument, "oracle needs a cell with an upper bound on |t - center|");
  const long base = *cell.hi + 1;
  if (k < base) throw Error(ErrorKind::kInvalidArgument, "depth below the cell's ball radius");
  if ((k - base) * std::log2(static_cast<double>(cell.prime)) > 26) {
    throw Error(ErrorKind::kInvalidArgument, "oracle enumeration too large");
  }
  const long count = int_pow(cell.prime, k - base).get_si();
  const Rational step = rat_pow(cell.prime, base);
  std::vector<Rational> reps;
  reps.reserve(static_cast<std::size_t>(count));
  const long vl = valuation(cell.lambda, cell.prime);
  long level = k;
  while (((level - vl) % cell.n + cell.n) % cell.n != 0) ++level;
  reps.push_back(cell.center + rat_pow(cell.prime, level - vl) * cell.lambda);
  for (long j = 1; j < count; ++j) reps.push_back(cell.center + step * j);
  return reps;
}

Rational measure(const Cell& cell, long k) {
  long members = 0;
  for (const auto& t : class_representatives(cell, k)) members += contains(cell, t) ? 1 : 0;
  return Rational(members) * rat_pow(cell.prime, -k);
}

Rational integrate(const std::function<std::optional<Rational>(const Rational&)>& f, const Cell& domain, long k) {
  Rational sum = 0;
  for (const auto& t : class_representatives(domain, k)) {
    if (!contains(domain, t)) continue;
    if (const auto value = f(t)) sum += *value;
  }
  return sum * rat_pow(domain.prime, -k);
}

PartitionReport partition_check(const std::vector<Cell>& cells, const SampleGrid& grid,
                                const std::function<bool(const Rational&)>& predicate) {
  PartitionReport report;
  for (const auto& t : grid.points()) {
    long count = 0;
    for (const auto& cell : cells) count += contains(cell, t) ? 1 : 0;
    const long expected = predicate ? (predicate(t) ? 1 : 0) : 1;
    ++report.checked;
    if (count != expected) {
      report.ok = false;
      ++report.violation_count;
      if (report.violations.size() < 8) report.violations.push_back({t, count, expected});
    }
  }
  return report;
}

}  // namespace pminimal::oracle
