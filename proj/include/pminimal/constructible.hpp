#pragma once

// Constructible functions in one variable and their integrals.
//
// A function is a list of pieces on pairwise disjoint cells; on a piece with
// center gamma it equals sum_terms q * k^d * p^(-e k), k = v(t - gamma).
// Pieces on (0)-cells carry constant terms only (d = e = 0).

#include <optional>
#include <string>
#include <vector>

#include "pminimal/cells.hpp"
#include "pminimal/hensel.hpp"
#include "pminimal/prepare.hpp"
#include "pminimal/rational.hpp"

namespace pminimal {

struct Term {
  Rational q;
  long d = 0;
  long e = 0;

  friend bool operator==(const Term&, const Term&) = default;
};

struct Piece {
  Cell cell;
  std::vector<Term> terms;

  friend bool operator==(const Piece&, const Piece&) = default;
};

class ConstructibleFunction {
 public:
  explicit ConstructibleFunction(long p) : prime_(p) {}
  // Pieces must lie on pairwise disjoint cells over p.
  ConstructibleFunction(long p, std::vector<Piece> pieces);

  static ConstructibleFunction indicator(const Cell& cell);

  long prime() const { return prime_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  bool is_zero() const { return pieces_.empty(); }

  Rational operator()(const Rational& t) const;

  friend bool operator==(const ConstructibleFunction&, const ConstructibleFunction&) = default;

 private:
  long prime_;
  std::vector<Piece> pieces_;
};

enum class GeneratorMode { kValuation, kAbs };
enum class VanishingPolicy { kReject, kDrop };

// v(f) (kValuation) or |f| (kAbs) from a preparation containing f at position
// `index`. Under kValuation a (0)-cell where f vanishes raises
// kValuationOfZero unless policy is kDrop.
ConstructibleFunction from_prepared(const SplitPoly& f, const std::vector<PreparedCell>& cells, GeneratorMode mode,
                                    std::size_t index = 0, VanishingPolicy policy = VanishingPolicy::kReject);

// |f|^s on Q_p minus the zeros of f.
ConstructibleFunction abs_power(const SplitPoly& f, long p, long s);

enum class AlgebraOp { kAdd, kMul };

ConstructibleFunction add(const ConstructibleFunction& f, const ConstructibleFunction& g);
ConstructibleFunction mul(const ConstructibleFunction& f, const ConstructibleFunction& g);
ConstructibleFunction scale(const ConstructibleFunction& f, const Rational& c);
ConstructibleFunction algebra(AlgebraOp op, const ConstructibleFunction& f, const ConstructibleFunction& g);

// Re-expresses f on a common refinement with `cells` (same function, finer pieces).
ConstructibleFunction refine(const ConstructibleFunction& f, const std::vector<Cell>& cells);

struct IntegralValue {
  bool integrable = true;
  Rational value;

  static IntegralValue non_integrable() { return {false, 0}; }
  friend bool operator==(const IntegralValue&, const IntegralValue&) = default;
  // "NON_INTEGRABLE" or the rational; paper_convention renders divergence as 0.
  std::string to_string(bool paper_convention = false) const;
};

// Largest d accepted in k^d terms by the closed-form kernel.
inline constexpr long kMaxLevelDegree = 12;

IntegralValue integrate(const ConstructibleFunction& f);

// sum_{j >= 0} j^i x^j for |x| < 1, exact.
Rational polylog_sum(long i, const Rational& x);

// Quotient of polynomials in T with the denominator's lowest nonzero
// coefficient equal to 1 and gcd(num, den) = 1.
class RationalFunctionT {
 public:
  RationalFunctionT() : num_(std::vector<Rational>{}), den_(std::vector<Rational>{1}) {}
  RationalFunctionT(Poly num, Poly den);

  const Poly& numerator() const { return num_; }
  const Poly& denominator() const { return den_; }

  Rational operator()(const Rational& t) const;

  friend RationalFunctionT operator+(const RationalFunctionT& a, const RationalFunctionT& b);
  friend bool operator==(const RationalFunctionT&, const RationalFunctionT&) = default;

  // "(num)/(den)" in ascending powers, e.g. "(4/5)/(1 - T/5)".
  std::string to_string() const;

 private:
  Poly num_;
  Poly den_;
};

// Z(T) with Z(p^-s) = integral over domain of |f(t)|^s |dt| for real s > 0.
RationalFunctionT igusa_zeta(const SplitPoly& f, long p, const Cell& domain);

// The valuation ring R as a cell (its center 0 has measure zero).
Cell valuation_ring_cell(long p);
// The maximal ideal M minus 0.
Cell maximal_ideal_cell(long p);

}  // namespace pminimal
