#pragma once

// One-variable cells
//
//   { t in Q_p : v(t - center) < lo, hi < v(t - center), t - center in lambda P_n }
//
// with each valuation bound optional. lambda = 0 gives the point {center}.

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "pminimal/rational.hpp"

namespace pminimal {

struct Cell {
  long prime = 2;
  Rational center;
  std::optional<long> lo;  // v(t - center) < lo
  std::optional<long> hi;  // hi < v(t - center)
  Rational lambda;
  long n = 1;

  static Cell point(long p, const Rational& center);
  // All t != center with t - center in lambda P_n, no bounds.
  static Cell punctured(long p, const Rational& center, const Rational& lambda = 1, long n = 1);

  bool is_point() const { return lambda == 0; }

  // Throws kInvalidArgument when the field combination is malformed.
  void validate() const;

  friend bool operator==(const Cell&, const Cell&) = default;
};

// Extended rational: a rational or +infinity.
struct Measure {
  bool infinite = false;
  Rational value;

  static Measure finite(const Rational& r) { return {false, r}; }
  static Measure infinity() { return {true, 0}; }
  friend bool operator==(const Measure&, const Measure&) = default;
  std::string to_string() const;
};

bool cell_contains(const Cell& cell, const Rational& t);
bool cell_is_empty(const Cell& cell);
Measure cell_measure(const Cell& cell);

// Splits the coset lambda P_n into cosets of P_lcm(n, m); empty parts are dropped.
std::vector<Cell> refine_by_coset(const Cell& cell, long m);

// Smallest admissible level v(t - center) of a (1)-cell, nullopt when the
// cell is unbounded below in valuation (no hi).
std::optional<long> first_level(const Cell& cell);
// Largest admissible level, nullopt when there is no lo.
std::optional<long> last_level(const Cell& cell);
bool level_admissible(const Cell& cell, long k);

// mu({t in cell : v(t - center) = k}) for an admissible level k:
// p^-k (1 - 1/p) / [U : U^n].
Rational level_measure(const Cell& cell, long k);

// lambda reduced to its representative in coset_reps(p, n); 0 for (0)-cells.
Rational canonical_lambda(const Cell& cell);

// Center, then hi, then lo (absent first), then canonical lambda.
std::strong_ordering canonical_compare(const Cell& a, const Cell& b);
void sort_canonical(std::vector<Cell>& cells);

std::string to_string(const Cell& cell);

}  // namespace pminimal
