#pragma once

// Hensel lifting and the power predicates P_n of Q_p.
//
// A unit u of Z_p is an n-th power iff its class modulo p^(2 v_p(n) + 1) is an
// n-th power of a unit there, so every question about cosets of P_n reduces to
// finite group tables modulo that power of p.

#include <memory>
#include <vector>

#include "pminimal/rational.hpp"
#include "pminimal/valued.hpp"

namespace pminimal {

// Dense polynomial with rational coefficients; coeffs[i] multiplies t^i.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rational> coeffs);

  const std::vector<Rational>& coeffs() const { return coeffs_; }
  // -1 for the zero polynomial.
  long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
  Rational operator()(const Rational& t) const;
  Poly derivative() const;

  friend bool operator==(const Poly&, const Poly&) = default;

 private:
  std::vector<Rational> coeffs_;
};

struct CosetRep {
  Rational representative;
  long n = 1;

  friend bool operator==(const CosetRep&, const CosetRep&) = default;
};

// Newton iteration from a, under v(f(a)) > 2 v(f'(a)). The result is the unique
// root r with v(r - a) > v(f'(a)), known modulo p^target_precision.
PAdicNumber hensel_lift(const Poly& f, const Rational& a, long p, long target_precision);

// 2 v_p(n) + 1.
long power_test_exponent(long n, long p);

bool is_nth_power(const Rational& x, long n, long p);

// Representatives of Q_p^x / P_n: unit class representatives r (smallest
// positive integers of their class, ascending) times p^j for j = 0..n-1, j-major.
std::vector<CosetRep> coset_reps(long p, long n);

long power_index(long p, long n);

// The representative lambda from coset_reps(p, n) with x in lambda P_n.
CosetRep coset_of(const Rational& x, long n, long p);

// Index of x's class within the unit classes of coset_reps, i.e. U / U^n.
// Requires x to be a p-adic unit.
std::size_t unit_class_index(const Rational& unit, long n, long p);

// Number of classes in U / U^n (the unit part of the index).
long unit_class_count(long p, long n);

}  // namespace pminimal
