#include "pminimal/hensel.hpp"

#include <map>
#include <mutex>

namespace pminimal {

Poly::Poly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational Poly::operator()(const Rational& t) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

Poly Poly::derivative() const {
  std::vector<Rational> d;
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d.push_back(coeffs_[i] * static_cast<long>(i));
  return Poly(std::move(d));
}

PAdicNumber hensel_lift(const Poly& f, const Rational& a, long p, long target_precision) {
  if (target_precision < 1) throw Error(ErrorKind::kInvalidArgument, "target precision must be >= 1");
  if (f.degree() < 1) throw Error(ErrorKind::kHenselConditionFailed, "polynomial must have degree >= 1");
  const Poly df = f.derivative();
  Rational r = a;
  Rational fr = f(r);
  const Rational dfa = df(r);
  if (dfa == 0) throw Error(ErrorKind::kHenselConditionFailed, "f'(a) = 0");
  const long vd = valuation_p(dfa, p);
  if (fr != 0 && valuation_p(fr, p) <= 2 * vd) {
    throw Error(ErrorKind::kHenselConditionFailed,
                "v(f(a)) = " + std::to_string(valuation_p(fr, p)) + " <= 2 v(f'(a)) = " + std::to_string(2 * vd));
  }
  // |root - r| = |f(r) / f'(r)| and v(f'(r)) stays vd along the iteration.
  while (fr != 0) {
    const long vf = valuation_p(fr, p);
    if (vf - vd >= target_precision && vf >= target_precision) break;
    r -= fr / df(r);
    fr = f(r);
  }
  return PAdicNumber::from_residue(p, r, target_precision);
}

long power_test_exponent(long n, long p) {
  return 2 * valuation_p(Integer(n), p) + 1;
}

namespace {

// U / U^n computed modulo p^e.
struct UnitClassTable {
  long p = 0;
  long n = 0;
  long e = 0;
  Integer modulus;
  std::vector<Integer> reps;
  std::vector<int> class_of;  // indexed by residue; -1 for non-units
};

std::shared_ptr<const UnitClassTable> build_table(long p, long n) {
  auto table = std::make_shared<UnitClassTable>();
  table->p = p;
  table->n = n;
  table->e = power_test_exponent(n, p);
  table->modulus = ipow(p, static_cast<unsigned long>(table->e));
  const unsigned long m = table->modulus.get_ui();
  table->class_of.assign(m, -1);
  std::vector<unsigned long> powers;
  {
    std::vector<bool> seen(m, false);
    const Integer exponent(n);
    for (unsigned long u = 1; u < m; ++u) {
      if (u % static_cast<unsigned long>(p) == 0) continue;
      Integer r;
      const Integer base(u);
      mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(), table->modulus.get_mpz_t());
      const unsigned long ru = r.get_ui();
      if (!seen[ru]) {
        seen[ru] = true;
        powers.push_back(ru);
      }
    }
  }
  int next = 0;
  for (unsigned long u = 1; u < m; ++u) {
    if (u % static_cast<unsigned long>(p) == 0 || table->class_of[u] >= 0) continue;
    for (unsigned long h : powers) {
      const unsigned long member = static_cast<unsigned long>((static_cast<unsigned __int128>(u) * h) % m);
      table->class_of[member] = next;
    }
    table->reps.emplace_back(u);
    ++next;
  }
  return table;
}

std::shared_ptr<const UnitClassTable> table_for(long p, long n) {
  if (!is_prime(p)) throw Error(ErrorKind::kInvalidArgument, "not a prime: " + std::to_string(p));
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "n must be >= 1");
  static std::mutex mutex;
  static std::map<std::pair<long, long>, std::shared_ptr<const UnitClassTable>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{p, n}];
  if (!slot) slot = build_table(p, n);
  return slot;
}

}  // namespace

std::size_t unit_class_index(const Rational& unit, long n, long p) {
  const auto table = table_for(p, n);
  const Integer r = mod_rational(unit, table->modulus);
  const int c = table->class_of[r.get_ui()];
  if (c < 0) throw Error(ErrorKind::kInvalidArgument, "not a unit: " + to_string(unit));
  return static_cast<std::size_t>(c);
}

long unit_class_count(long p, long n) { return static_cast<long>(table_for(p, n)->reps.size()); }

bool is_nth_power(const Rational& x, long n, long p) {
  if (x == 0) throw Error(ErrorKind::kInvalidArgument, "0 is not in K^x");
  if (mod_floor(valuation_p(x, p), n) != 0) return false;
  return unit_class_index(unit_part(x, p), n, p) == 0;
}

std::vector<CosetRep> coset_reps(long p, long n) {
  const auto table = table_for(p, n);
  std::vector<CosetRep> out;
  for (long j = 0; j < n; ++j) {
    const Integer pj = ipow(p, static_cast<unsigned long>(j));
    for (const auto& r : table->reps) out.push_back({Rational(r * pj), n});
  }
  return out;
}

long power_index(long p, long n) { return n * unit_class_count(p, n); }

CosetRep coset_of(const Rational& x, long n, long p) {
  if (x == 0) throw Error(ErrorKind::kInvalidArgument, "0 is not in K^x");
  const auto table = table_for(p, n);
  const long j = mod_floor(valuation_p(x, p), n);
  const std::size_t c = unit_class_index(unit_part(x, p), n, p);
  return {Rational(table->reps[c] * ipow(p, static_cast<unsigned long>(j))), n};
}

}  // namespace pminimal
