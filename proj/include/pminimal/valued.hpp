#pragma once

// Valued fields with value group Z: Q_p (exact rationals and finite-precision
// p-adic approximations) and Laurent series fields F_p((t)), Q((t)).
//
// Every element knows its field context; mixing contexts raises
// ErrorKind::kFieldMismatch. Approximate values track how many digits are
// known, and an answer that depends on unknown digits raises
// ErrorKind::kPrecisionExhausted instead of guessing.

#include <compare>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pminimal/error.hpp"
#include "pminimal/rational.hpp"

namespace pminimal {

// Element of Z ∪ {∞}.
class Valuation {
 public:
  constexpr Valuation() = default;  // ∞
  constexpr explicit Valuation(long v) : value_(v) {}
  static constexpr Valuation infinity() { return Valuation(); }

  bool is_infinite() const { return !value_.has_value(); }
  // Throws kValuationOfZero for ∞.
  long value() const;

  friend Valuation operator+(Valuation a, Valuation b);
  friend bool operator==(Valuation a, Valuation b) = default;
  friend std::strong_ordering operator<=>(Valuation a, Valuation b);

  std::string to_string() const;

 private:
  std::optional<long> value_;
};

Valuation min(Valuation a, Valuation b);

enum class FieldKind { kQp, kLaurentFp, kLaurentQ };

struct FieldContext {
  FieldKind kind = FieldKind::kQp;
  long prime = 0;  // p for Q_p and F_p((t)); 0 for Q((t))

  static FieldContext qp(long p);
  static FieldContext laurent_fp(long p);
  static FieldContext laurent_q();

  std::string name() const;
  friend bool operator==(const FieldContext&, const FieldContext&) = default;
};

// Element of a residue field: F_p when prime > 0, Q when prime == 0.
struct ResidueElement {
  long prime = 0;
  Rational value;

  friend bool operator==(const ResidueElement&, const ResidueElement&) = default;
};

ResidueElement residue_mul(const ResidueElement& a, const ResidueElement& b);

// x = p^val * unit, with unit known modulo p^precision.
//
// precision == 0 (unit == 0) encodes O(p^val): all known digits are zero.
class PAdicNumber {
 public:
  enum class Kind { kExactZero, kApprox };

  static PAdicNumber exact_zero(long p);
  // Relative precision: the unit is kept modulo p^precision.
  static PAdicNumber from_rational(long p, const Rational& x, long precision);
  // x ≡ residue (mod p^abs_precision); residue may be any rational with
  // p-integral reduction. A residue divisible by p^abs_precision yields O(p^abs_precision).
  static PAdicNumber from_residue(long p, const Rational& residue, long abs_precision);
  static PAdicNumber big_oh(long p, long abs_precision);

  long prime() const { return prime_; }
  Kind kind() const { return kind_; }
  bool is_exact_zero() const { return kind_ == Kind::kExactZero; }
  bool digits_exhausted() const { return kind_ == Kind::kApprox && precision_ == 0; }
  long val() const { return val_; }
  const Integer& unit() const { return unit_; }
  long precision() const { return precision_; }
  // val + precision; meaningless for exact zero.
  long absolute_precision() const { return val_ + precision_; }

  // Integer representative in [0, p^abs) of x mod p^abs. Requires val >= 0 for a
  // nonnegative integer result; otherwise returns the rational p^val * unit.
  Rational representative() const;

  // Vals match and units agree modulo p^min(m, both precisions).
  bool equal_at(const PAdicNumber& other, long m) const;

  std::string to_string() const;

 private:
  long prime_ = 2;
  Kind kind_ = Kind::kExactZero;
  long val_ = 0;
  Integer unit_ = 0;
  long precision_ = 0;
};

// Laurent series over F_p (prime > 0) or Q (prime == 0).
//
// coeffs[i] is the coefficient of t^(val + i), coeffs[0] != 0. precision is
// the number of known coefficients; nullopt means the series is an exact
// Laurent polynomial. Empty coeffs with precision 0 encodes O(t^val).
class LaurentSeries {
 public:
  static LaurentSeries exact_zero(long prime);
  static LaurentSeries exact(long prime, long val, std::vector<Rational> coeffs);
  static LaurentSeries truncated(long prime, long val, std::vector<Rational> coeffs, long precision);
  static LaurentSeries constant(long prime, const Rational& c);

  long prime() const { return prime_; }
  FieldContext context() const;
  bool is_exact() const { return !precision_.has_value(); }
  bool is_exact_zero() const { return is_exact() && coeffs_.empty(); }
  bool digits_exhausted() const { return !is_exact() && coeffs_.empty(); }
  long val() const { return val_; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  std::optional<long> precision() const { return precision_; }
  // Exponent of the first unknown coefficient; nullopt for exact series.
  std::optional<long> absolute_precision() const;

  // Coefficient of t^k (zero outside the stored range; caller checks precision).
  Rational coeff(long k) const;

  std::string to_string() const;
  friend bool operator==(const LaurentSeries&, const LaurentSeries&) = default;

 private:
  void normalize();

  long prime_ = 0;
  long val_ = 0;
  std::vector<Rational> coeffs_;
  std::optional<long> precision_;
};

// Exact rational regarded as an element of Q_p.
struct ExactRational {
  long prime = 2;
  Rational value;
};

class FieldElement {
 public:
  using Repr = std::variant<ExactRational, PAdicNumber, LaurentSeries>;

  FieldElement(ExactRational x) : repr_(std::move(x)) {}
  FieldElement(PAdicNumber x) : repr_(std::move(x)) {}
  FieldElement(LaurentSeries x) : repr_(std::move(x)) {}

  static FieldElement rational(long p, const Rational& x) { return ExactRational{p, x}; }

  const Repr& repr() const { return repr_; }
  FieldContext context() const;
  bool is_exact_zero() const;
  std::string to_string() const;

 private:
  Repr repr_;
};

enum class ArithOp { kAdd, kMul, kNeg, kInv };

inline constexpr long kDefaultSeriesPrecision = 20;

Valuation valuation(const FieldElement& x);
ResidueElement residue(const FieldElement& x);
ResidueElement ac(const FieldElement& x);

FieldElement add(const FieldElement& x, const FieldElement& y);
FieldElement mul(const FieldElement& x, const FieldElement& y);
FieldElement neg(const FieldElement& x);
// series_precision bounds the expansion of 1/x for exact non-monomial Laurent x.
FieldElement inv(const FieldElement& x, long series_precision = kDefaultSeriesPrecision);
FieldElement arith(ArithOp op, const FieldElement& x, const std::optional<FieldElement>& y = std::nullopt);

// x/y if y != 0 and v(x) >= v(y), else 0.
FieldElement restricted_div(const FieldElement& x, const FieldElement& y);

// Zero of x's field (exact).
FieldElement zero_like(const FieldElement& x);

}  // namespace pminimal
