#pragma once

// Cell decomposition with preparation for polynomials that split over Q, and
// decomposition of quantifier-free Macintyre formulas into cells.
//
// On every (1)-cell A with center gamma and coset lambda P_n the output
// certifies, for each input f_j,
//
//   f_j(t) in u_j (1 + p^e R) * h_j * ((t - gamma) / lambda)^(a_j / n),   t in A,
//
// so that v(f_j(t)) = v(h_j) + a_j (v(t - gamma) - v(lambda)) / n. The ratio
// a_j / n is always an integer here, and u_j = 1.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pminimal/cells.hpp"
#include "pminimal/hensel.hpp"
#include "pminimal/rational.hpp"

namespace pminimal {

struct RootFactor {
  Rational root;
  long multiplicity = 1;

  friend bool operator==(const RootFactor&, const RootFactor&) = default;
};

// c * prod (t - root_i)^(multiplicity_i), roots pairwise distinct, sorted.
class SplitPoly {
 public:
  SplitPoly() = default;
  // Merges repeated roots and sorts; throws kInvalidArgument for c = 0 or
  // multiplicity < 1.
  SplitPoly(Rational unit, std::vector<RootFactor> factors);

  static SplitPoly linear(const Rational& root) { return SplitPoly(1, {{root, 1}}); }
  static SplitPoly constant(const Rational& c) { return SplitPoly(c, {}); }

  const Rational& unit() const { return unit_; }
  const std::vector<RootFactor>& factors() const { return factors_; }
  long degree() const;
  long multiplicity(const Rational& root) const;

  Rational operator()(const Rational& t) const;
  Poly expand() const;

  friend bool operator==(const SplitPoly&, const SplitPoly&) = default;

 private:
  Rational unit_ = 1;
  std::vector<RootFactor> factors_;
};

// Factors a rational polynomial into linear factors over Q, or throws
// kUnsupportedPolynomial.
SplitPoly split(const Poly& f);

struct FunctionPreparation {
  Rational h;
  long a = 0;
  // Certificate u (1 + p^e R); unit == 0 marks a (0)-cell where f vanishes.
  Rational unit = 1;
  long e = 1;

  friend bool operator==(const FunctionPreparation&, const FunctionPreparation&) = default;
};

struct PreparedCell {
  Cell cell;
  std::vector<FunctionPreparation> functions;

  // a_j / n.
  long exponent(std::size_t j) const;
  // h_j / lambda^(a_j / n): the constant H with f_j(t) ~ H (t - gamma)^(a_j / n).
  Rational coefficient(std::size_t j) const;
  // v(f_j(t)) predicted at level k = v(t - gamma) of a (1)-cell.
  long valuation_at_level(std::size_t j, long k) const;

  friend bool operator==(const PreparedCell&, const PreparedCell&) = default;
};

// Partition of Q_p into cells preparing every f in fs. Every (1)-cell has
// n divisible by coset_modulus and certificates good enough to decide P_m
// for every m dividing coset_modulus. Output in canonical cell order.
std::vector<PreparedCell> prepare(const std::vector<SplitPoly>& fs, long p, long coset_modulus = 1);

// Quantifier-free formula in one variable t.
class Formula {
 public:
  enum class Kind { kAbsLt, kAbsLe, kPow, kEqz, kAnd, kOr, kNot };

  static Formula abs_lt(SplitPoly f, SplitPoly g);
  static Formula abs_le(SplitPoly f, SplitPoly g);
  static Formula pow(long m, SplitPoly f);
  static Formula eqz(SplitPoly f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula negation(Formula a);

  Kind kind() const { return kind_; }
  const SplitPoly& f() const { return f_; }
  const SplitPoly& g() const { return g_; }
  long m() const { return m_; }
  const std::vector<Formula>& children() const { return children_; }

  friend bool operator==(const Formula&, const Formula&) = default;

 private:
  Kind kind_ = Kind::kEqz;
  SplitPoly f_;
  SplitPoly g_;
  long m_ = 1;
  std::vector<Formula> children_;
};

// Direct exact evaluation of the formula at t.
bool evaluate(const Formula& phi, const Rational& t, long p);

// Pairwise disjoint cells whose union is {t in Q_p : phi(t)}, canonical order.
std::vector<Cell> decompose(const Formula& phi, long p);

// Preparation of fs refined so that each output cell lies inside or outside
// each target cell. functions[fs.size() + i] prepares t - targets[i].center.
struct RefinedCell {
  PreparedCell prepared;
  std::vector<bool> inside;
};

std::vector<RefinedCell> refine_against(const std::vector<SplitPoly>& fs, const std::vector<Cell>& targets, long p,
                                        long coset_modulus = 1);

// Splits a (1)-cell's level window at the given cut levels: the pieces hold
// levels [.., c1), [c1, c2), ... Pieces without admissible levels are dropped.
std::vector<Cell> split_window(const Cell& cell, std::vector<long> cuts);

}  // namespace pminimal
