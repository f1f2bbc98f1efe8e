#pragma once

// Brute-force verifiers over residue rings and truncated sums. Nothing here
// calls into the symbolic modules; only their plain data types are shared.

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pminimal/cells.hpp"
#include "pminimal/prepare.hpp"
#include "pminimal/rational.hpp"

namespace pminimal::oracle {

// All p^v * u with v_lo <= v <= v_hi and 1 <= u < p^depth coprime to p, then 0,
// then the extra points.
struct SampleGrid {
  long prime = 2;
  long v_lo = -4;
  long v_hi = 4;
  long depth = 6;
  std::vector<Rational> extra;

  std::vector<Rational> points() const;
};

// Window [-4, 4]; depth 6 for p <= 5, else 4.
SampleGrid default_grid(long p, std::vector<Rational> extra = {});

long valuation(const Rational& x, long p);
Rational evaluate(const SplitPoly& f, const Rational& t);

// Residues u^n mod p^k over all units u mod p^k.
std::set<Integer> nth_power_classes(long p, long n, long k);
bool is_nth_power(const Rational& x, long n, long p);
// n * [U : U^n], counted from the enumerated classes.
long power_index(long p, long n);

bool contains(const Cell& cell, const Rational& t);
bool evaluate(const Formula& phi, const Rational& t, long p);

// Class representatives of depth-k cosets t + p^k R meeting the ball
// |t - center| <= p^-(hi+1), one per class. The center's own class is
// represented by a member of the coset lambda P_n at level >= k. A (0)-cell
// has the single representative center.
std::vector<Rational> class_representatives(const Cell& cell, long k);

// (number of depth-k classes whose representative lies in the cell) * p^-k.
Rational measure(const Cell& cell, long k);

// sum over depth-k classes in domain of f(rep) * p^-k; nullopt values count as 0.
Rational integrate(const std::function<std::optional<Rational>(const Rational&)>& f, const Cell& domain, long k);

struct Violation {
  Rational point;
  long count = 0;
  long expected = 1;
};

struct PartitionReport {
  bool ok = true;
  long checked = 0;
  long violation_count = 0;
  std::vector<Violation> violations;  // first few only
};

// Every grid point lies in exactly one cell, or, with a predicate, in one
// cell exactly when the predicate holds and in none otherwise.
PartitionReport partition_check(const std::vector<Cell>& cells, const SampleGrid& grid,
                                const std::function<bool(const Rational&)>& predicate = nullptr);

}  // namespace pminimal::oracle
