#include "pminimal/valued.hpp"

#include <algorithm>
#include <sstream>

namespace pminimal {

// ---------------------------------------------------------------- Valuation

long Valuation::value() const {
  if (!value_) throw Error(ErrorKind::kValuationOfZero, "valuation is infinite");
  return *value_;
}

Valuation operator+(Valuation a, Valuation b) {
  if (a.is_infinite() || b.is_infinite()) return Valuation::infinity();
  return Valuation(*a.value_ + *b.value_);
}

std::strong_ordering operator<=>(Valuation a, Valuation b) {
  if (a.is_infinite() || b.is_infinite()) {
    return static_cast<int>(a.is_infinite()) <=> static_cast<int>(b.is_infinite());
  }
  return *a.value_ <=> *b.value_;
}

std::string Valuation::to_string() const {
  return value_ ? std::to_string(*value_) : std::string("INF");
}

Valuation min(Valuation a, Valuation b) { return a <= b ? a : b; }

// ------------------------------------------------------------- FieldContext

FieldContext FieldContext::qp(long p) {
  if (!is_prime(p)) throw Error(ErrorKind::kInvalidArgument, "not a prime: " + std::to_string(p));
  return {FieldKind::kQp, p};
}

FieldContext FieldContext::laurent_fp(long p) {
  if (!is_prime(p)) throw Error(ErrorKind::kInvalidArgument, "not a prime: " + std::to_string(p));
  return {FieldKind::kLaurentFp, p};
}

FieldContext FieldContext::laurent_q() { return {FieldKind::kLaurentQ, 0}; }

std::string FieldContext::name() const {
  switch (kind) {
    case FieldKind::kQp: return "Q_" + std::to_string(prime);
    case FieldKind::kLaurentFp: return "F_" + std::to_string(prime) + "((t))";
    case FieldKind::kLaurentQ: return "Q((t))";
  }
  return "?";
}

ResidueElement residue_mul(const ResidueElement& a, const ResidueElement& b) {
  if (a.prime != b.prime) throw Error(ErrorKind::kFieldMismatch, "residue fields differ");
  if (a.prime == 0) return {0, a.value * b.value};
  const Integer p(a.prime);
  Integer v = (Integer(a.value.get_num()) * Integer(b.value.get_num())) % p;
  return {a.prime, Rational(v)};
}

// -------------------------------------------------------------- PAdicNumber

namespace {

Integer mod_positive(const Integer& x, const Integer& m) {
  Integer r = x % m;
  if (r < 0) r += m;
  return r;
}

PAdicNumber padic_from_integer_digits(long p, long at, const Integer& digits, long abs_precision);

}  // namespace

PAdicNumber PAdicNumber::exact_zero(long p) {
  PAdicNumber x;
  x.prime_ = p;
  return x;
}

PAdicNumber PAdicNumber::big_oh(long p, long abs_precision) {
  PAdicNumber x;
  x.prime_ = p;
  x.kind_ = Kind::kApprox;
  x.val_ = abs_precision;
  x.unit_ = 0;
  x.precision_ = 0;
  return x;
}

PAdicNumber PAdicNumber::from_rational(long p, const Rational& value, long precision) {
  if (precision < 1) throw Error(ErrorKind::kInvalidArgument, "precision must be >= 1");
  if (value == 0) return exact_zero(p);
  PAdicNumber x;
  x.prime_ = p;
  x.kind_ = Kind::kApprox;
  x.val_ = valuation_p(value, p);
  x.precision_ = precision;
  x.unit_ = mod_rational(unit_part(value, p), ipow(p, static_cast<unsigned long>(precision)));
  return x;
}

PAdicNumber PAdicNumber::from_residue(long p, const Rational& residue, long abs_precision) {
  if (residue == 0 || valuation_p(residue, p) >= abs_precision) return big_oh(p, abs_precision);
  const long v = valuation_p(residue, p);
  return from_rational(p, residue, abs_precision - v);
}

Rational PAdicNumber::representative() const {
  if (kind_ == Kind::kExactZero || precision_ == 0) return 0;
  return power_of(prime_, val_) * Rational(unit_);
}

bool PAdicNumber::equal_at(const PAdicNumber& other, long m) const {
  if (prime_ != other.prime_) return false;
  if (kind_ != other.kind_) return false;
  if (kind_ == Kind::kExactZero) return true;
  if (val_ != other.val_) return false;
  const long k = std::min({m, precision_, other.precision_});
  if (k <= 0) return true;
  const Integer mod = ipow(prime_, static_cast<unsigned long>(k));
  return mod_positive(unit_, mod) == mod_positive(other.unit_, mod);
}

std::string PAdicNumber::to_string() const {
  if (kind_ == Kind::kExactZero) return "0";
  const std::string big_o = "O(" + std::to_string(prime_) + "^" + std::to_string(absolute_precision()) + ")";
  if (precision_ == 0) return big_o;
  std::ostringstream out;
  if (val_ != 0) out << prime_ << "^" << val_ << "*";
  out << unit_.get_str() << " + " << big_o;
  return out.str();
}

namespace {

PAdicNumber padic_from_integer_digits(long p, long at, const Integer& digits, long abs_precision) {
  // digits * p^at known modulo p^abs_precision
  if (abs_precision <= at || digits == 0) return PAdicNumber::big_oh(p, abs_precision);
  const long extra = valuation_p(digits, p);
  const long v = at + extra;
  if (v >= abs_precision) return PAdicNumber::big_oh(p, abs_precision);
  return PAdicNumber::from_rational(p, Rational(digits) * power_of(p, at), abs_precision - v);
}

PAdicNumber padic_add(const PAdicNumber& a, const PAdicNumber& b) {
  if (a.is_exact_zero()) return b;
  if (b.is_exact_zero()) return a;
  const long p = a.prime();
  const long abs_prec = std::min(a.absolute_precision(), b.absolute_precision());
  const long m = std::min(a.val(), b.val());
  if (abs_prec <= m) return PAdicNumber::big_oh(p, abs_prec);
  const Integer mod = ipow(p, static_cast<unsigned long>(abs_prec - m));
  Integer s = a.unit() * ipow(p, static_cast<unsigned long>(a.val() - m)) +
              b.unit() * ipow(p, static_cast<unsigned long>(b.val() - m));
  s = mod_positive(s, mod);
  return padic_from_integer_digits(p, m, s, abs_prec);
}

PAdicNumber padic_mul(const PAdicNumber& a, const PAdicNumber& b) {
  if (a.is_exact_zero() || b.is_exact_zero()) return PAdicNumber::exact_zero(a.prime());
  const long p = a.prime();
  const long n = std::min(a.precision(), b.precision());
  const long v = a.val() + b.val();
  if (n == 0) return PAdicNumber::big_oh(p, v);
  const Integer mod = ipow(p, static_cast<unsigned long>(n));
  return PAdicNumber::from_rational(p, Rational(mod_positive(a.unit() * b.unit(), mod)) * power_of(p, v), n);
}

PAdicNumber padic_neg(const PAdicNumber& a) {
  if (a.is_exact_zero() || a.digits_exhausted()) return a;
  const Integer mod = ipow(a.prime(), static_cast<unsigned long>(a.precision()));
  return PAdicNumber::from_rational(a.prime(), Rational(mod_positive(-a.unit(), mod)) * power_of(a.prime(), a.val()),
                                    a.precision());
}

PAdicNumber padic_inv(const PAdicNumber& a) {
  if (a.is_exact_zero()) throw Error(ErrorKind::kDivisionByZero, "inverse of exact zero");
  if (a.digits_exhausted()) throw Error(ErrorKind::kPrecisionExhausted, "inverse of " + a.to_string());
  const Integer mod = ipow(a.prime(), static_cast<unsigned long>(a.precision()));
  Integer u;
  mpz_invert(u.get_mpz_t(), a.unit().get_mpz_t(), mod.get_mpz_t());
  return PAdicNumber::from_rational(a.prime(), Rational(u) * power_of(a.prime(), -a.val()), a.precision());
}

// Embeds an exact rational with enough digits to not limit an operation with `other`.
PAdicNumber embed_against(const ExactRational& x, const PAdicNumber& other) {
  if (x.value == 0) return PAdicNumber::exact_zero(x.prime);
  if (other.is_exact_zero()) return PAdicNumber::from_rational(x.prime, x.value, kDefaultSeriesPrecision);
  const long v = valuation_p(x.value, x.prime);
  const long n = std::max({other.precision(), other.absolute_precision() - v, 1L});
  return PAdicNumber::from_rational(x.prime, x.value, n);
}

}  // namespace

// ------------------------------------------------------------ LaurentSeries

namespace {

Rational reduce_coeff(long prime, const Rational& c) {
  if (prime == 0) return c;
  return Rational(mod_rational(c, Integer(prime)));
}

Rational coeff_inverse(long prime, const Rational& c) {
  if (prime == 0) return 1 / c;
  Integer u;
  const Integer pz(prime);
  Integer cz = c.get_num();
  mpz_invert(u.get_mpz_t(), cz.get_mpz_t(), pz.get_mpz_t());
  return Rational(u);
}

}  // namespace

void LaurentSeries::normalize() {
  for (auto& c : coeffs_) c = reduce_coeff(prime_, c);
  if (precision_ && static_cast<long>(coeffs_.size()) > *precision_) coeffs_.resize(static_cast<std::size_t>(*precision_));
  if (precision_) {
    // Pad so that coeffs_ holds exactly precision_ entries before stripping.
    coeffs_.resize(static_cast<std::size_t>(*precision_), Rational(0));
  }
  std::size_t lead = 0;
  while (lead < coeffs_.size() && coeffs_[lead] == 0) ++lead;
  if (lead == coeffs_.size()) {
    if (precision_) {
      val_ += *precision_;
      precision_ = 0;
    } else {
      val_ = 0;
    }
    coeffs_.clear();
    return;
  }
  coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<long>(lead));
  val_ += static_cast<long>(lead);
  if (precision_) {
    *precision_ -= static_cast<long>(lead);
  } else {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }
}

LaurentSeries LaurentSeries::exact_zero(long prime) {
  LaurentSeries s;
  s.prime_ = prime;
  return s;
}

LaurentSeries LaurentSeries::exact(long prime, long val, std::vector<Rational> coeffs) {
  LaurentSeries s;
  s.prime_ = prime;
  s.val_ = val;
  s.coeffs_ = std::move(coeffs);
  s.normalize();
  return s;
}

LaurentSeries LaurentSeries::truncated(long prime, long val, std::vector<Rational> coeffs, long precision) {
  if (precision < 0) throw Error(ErrorKind::kInvalidArgument, "negative precision");
  LaurentSeries s;
  s.prime_ = prime;
  s.val_ = val;
  s.coeffs_ = std::move(coeffs);
  s.precision_ = precision;
  s.normalize();
  return s;
}

LaurentSeries LaurentSeries::constant(long prime, const Rational& c) { return exact(prime, 0, {c}); }

FieldContext LaurentSeries::context() const {
  return prime_ == 0 ? FieldContext::laurent_q() : FieldContext::laurent_fp(prime_);
}

std::optional<long> LaurentSeries::absolute_precision() const {
  if (!precision_) return std::nullopt;
  return val_ + *precision_;
}

Rational LaurentSeries::coeff(long k) const {
  const long i = k - val_;
  if (i < 0 || i >= static_cast<long>(coeffs_.size())) return 0;
  return coeffs_[static_cast<std::size_t>(i)];
}

std::string LaurentSeries::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const Rational& c = coeffs_[i];
    if (c == 0) continue;
    const long k = val_ + static_cast<long>(i);
    Rational mag = abs(c);
    if (!first) out << (c < 0 ? " - " : " + ");
    else if (c < 0) out << "-";
    first = false;
    if (k == 0) {
      out << pminimal::to_string(mag);
    } else {
      if (mag != 1) out << pminimal::to_string(mag) << "*";
      out << "t";
      if (k != 1) out << "^" << k;
    }
  }
  if (precision_) {
    if (!first) out << " + ";
    out << "O(t^" << *absolute_precision() << ")";
  } else if (first) {
    out << "0";
  }
  return out.str();
}

namespace {

LaurentSeries series_add(const LaurentSeries& a, const LaurentSeries& b) {
  if (a.is_exact_zero()) return b;
  if (b.is_exact_zero()) return a;
  const long prime = a.prime();
  const auto abs_a = a.absolute_precision();
  const auto abs_b = b.absolute_precision();
  std::optional<long> abs_prec;
  if (abs_a && abs_b) abs_prec = std::min(*abs_a, *abs_b);
  else if (abs_a) abs_prec = abs_a;
  else if (abs_b) abs_prec = abs_b;
  const long m = std::min(a.val(), b.val());
  const long end = abs_prec ? *abs_prec
                            : std::max(a.val() + static_cast<long>(a.coeffs().size()),
                                       b.val() + static_cast<long>(b.coeffs().size()));
  std::vector<Rational> coeffs;
  for (long k = m; k < end; ++k) coeffs.push_back(a.coeff(k) + b.coeff(k));
  if (abs_prec) {
    if (*abs_prec <= m) return LaurentSeries::truncated(prime, *abs_prec, {}, 0);
    return LaurentSeries::truncated(prime, m, std::move(coeffs), *abs_prec - m);
  }
  return LaurentSeries::exact(prime, m, std::move(coeffs));
}

LaurentSeries series_mul(const LaurentSeries& a, const LaurentSeries& b) {
  const long prime = a.prime();
  if (a.is_exact_zero() || b.is_exact_zero()) return LaurentSeries::exact_zero(prime);
  const long v = a.val() + b.val();
  std::optional<long> n;
  if (a.precision() && b.precision()) n = std::min(*a.precision(), *b.precision());
  else if (a.precision()) n = a.precision();
  else if (b.precision()) n = b.precision();
  const auto& ca = a.coeffs();
  const auto& cb = b.coeffs();
  const std::size_t len = n ? static_cast<std::size_t>(*n) : ca.size() + cb.size() - 1;
  std::vector<Rational> out(len, Rational(0));
  for (std::size_t i = 0; i < ca.size() && i < len; ++i) {
    for (std::size_t j = 0; j < cb.size() && i + j < len; ++j) out[i + j] += ca[i] * cb[j];
  }
  if (n) return LaurentSeries::truncated(prime, v, std::move(out), *n);
  return LaurentSeries::exact(prime, v, std::move(out));
}

LaurentSeries series_neg(const LaurentSeries& a) {
  std::vector<Rational> out;
  for (const auto& c : a.coeffs()) out.push_back(-c);
  if (a.precision()) {
    if (a.digits_exhausted()) return a;
    return LaurentSeries::truncated(a.prime(), a.val(), std::move(out), *a.precision());
  }
  return LaurentSeries::exact(a.prime(), a.val(), std::move(out));
}

LaurentSeries series_inv(const LaurentSeries& a, long series_precision) {
  if (a.is_exact_zero()) throw Error(ErrorKind::kDivisionByZero, "inverse of exact zero");
  if (a.digits_exhausted()) throw Error(ErrorKind::kPrecisionExhausted, "inverse of " + a.to_string());
  const long prime = a.prime();
  const auto& c = a.coeffs();
  const Rational b0 = coeff_inverse(prime, c[0]);
  if (a.is_exact() && c.size() == 1) return LaurentSeries::exact(prime, -a.val(), {b0});
  const long n = a.precision() ? *a.precision() : series_precision;
  std::vector<Rational> b(static_cast<std::size_t>(n), Rational(0));
  b[0] = b0;
  for (long k = 1; k < n; ++k) {
    Rational s = 0;
    for (long i = 1; i <= k && i < static_cast<long>(c.size()); ++i) {
      s += c[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(k - i)];
    }
    b[static_cast<std::size_t>(k)] = reduce_coeff(prime, -b0 * s);
  }
  return LaurentSeries::truncated(prime, -a.val(), std::move(b), n);
}

}  // namespace

// ------------------------------------------------------------- FieldElement

FieldContext FieldElement::context() const {
  return std::visit(
      [](const auto& x) -> FieldContext {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, LaurentSeries>) {
          return x.context();
        } else if constexpr (std::is_same_v<T, PAdicNumber>) {
          return FieldContext::qp(x.prime());
        } else {
          return FieldContext::qp(x.prime);
        }
      },
      repr_);
}

bool FieldElement::is_exact_zero() const {
  return std::visit(
      [](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ExactRational>) {
          return x.value == 0;
        } else {
          return x.is_exact_zero();
        }
      },
      repr_);
}

std::string FieldElement::to_string() const {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ExactRational>) {
          return pminimal::to_string(x.value);
        } else {
          return x.to_string();
        }
      },
      repr_);
}

namespace {

void require_same_field(const FieldElement& x, const FieldElement& y) {
  if (!(x.context() == y.context())) {
    throw Error(ErrorKind::kFieldMismatch, x.context().name() + " vs " + y.context().name());
  }
}

// Both operands as PAdicNumber for mixed exact/approximate Q_p operations.
std::pair<PAdicNumber, PAdicNumber> as_padic_pair(const FieldElement& x, const FieldElement& y) {
  const auto* px = std::get_if<PAdicNumber>(&x.repr());
  const auto* py = std::get_if<PAdicNumber>(&y.repr());
  if (px && py) return {*px, *py};
  if (px) return {*px, embed_against(std::get<ExactRational>(y.repr()), *px)};
  return {embed_against(std::get<ExactRational>(x.repr()), *py), *py};
}

ResidueElement fp(long p, const Integer& v) { return {p, Rational(v)}; }

}  // namespace

Valuation valuation(const FieldElement& x) {
  return std::visit(
      [](const auto& e) -> Valuation {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, ExactRational>) {
          if (e.value == 0) return Valuation::infinity();
          return Valuation(valuation_p(e.value, e.prime));
        } else {
          if (e.is_exact_zero()) return Valuation::infinity();
          if (e.digits_exhausted()) {
            throw Error(ErrorKind::kPrecisionExhausted, "valuation not determined for " + e.to_string());
          }
          return Valuation(e.val());
        }
      },
      x.repr());
}

ResidueElement residue(const FieldElement& x) {
  return std::visit(
      [](const auto& e) -> ResidueElement {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, ExactRational>) {
          if (e.value == 0) return fp(e.prime, 0);
          if (valuation_p(e.value, e.prime) < 0) {
            throw Error(ErrorKind::kNotInValuationRing, pminimal::to_string(e.value));
          }
          return fp(e.prime, mod_rational(e.value, Integer(e.prime)));
        } else if constexpr (std::is_same_v<T, PAdicNumber>) {
          if (e.is_exact_zero()) return fp(e.prime(), 0);
          if (e.digits_exhausted()) {
            if (e.val() >= 1) return fp(e.prime(), 0);
            throw Error(ErrorKind::kPrecisionExhausted, "residue not determined for " + e.to_string());
          }
          if (e.val() < 0) throw Error(ErrorKind::kNotInValuationRing, e.to_string());
          if (e.val() > 0) return fp(e.prime(), 0);
          return fp(e.prime(), e.unit() % Integer(e.prime()));
        } else {
          if (e.is_exact_zero()) return {e.prime(), Rational(0)};
          if (e.digits_exhausted()) {
            if (e.val() >= 1) return {e.prime(), Rational(0)};
            throw Error(ErrorKind::kPrecisionExhausted, "residue not determined for " + e.to_string());
          }
          if (e.val() < 0) throw Error(ErrorKind::kNotInValuationRing, e.to_string());
          if (e.val() > 0) return {e.prime(), Rational(0)};
          return {e.prime(), e.coeffs().front()};
        }
      },
      x.repr());
}

ResidueElement ac(const FieldElement& x) {
  return std::visit(
      [](const auto& e) -> ResidueElement {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, ExactRational>) {
          if (e.value == 0) return fp(e.prime, 0);
          return fp(e.prime, mod_rational(unit_part(e.value, e.prime), Integer(e.prime)));
        } else if constexpr (std::is_same_v<T, PAdicNumber>) {
          if (e.is_exact_zero()) return fp(e.prime(), 0);
          if (e.digits_exhausted()) {
            throw Error(ErrorKind::kPrecisionExhausted, "angular component not determined for " + e.to_string());
          }
          return fp(e.prime(), e.unit() % Integer(e.prime()));
        } else {
          if (e.is_exact_zero()) return {e.prime(), Rational(0)};
          if (e.digits_exhausted()) {
            throw Error(ErrorKind::kPrecisionExhausted, "angular component not determined for " + e.to_string());
          }
          return {e.prime(), e.coeffs().front()};
        }
      },
      x.repr());
}

FieldElement add(const FieldElement& x, const FieldElement& y) {
  require_same_field(x, y);
  if (const auto* lx = std::get_if<LaurentSeries>(&x.repr())) {
    return series_add(*lx, std::get<LaurentSeries>(y.repr()));
  }
  const auto* ex = std::get_if<ExactRational>(&x.repr());
  const auto* ey = std::get_if<ExactRational>(&y.repr());
  if (ex && ey) return ExactRational{ex->prime, ex->value + ey->value};
  auto [a, b] = as_padic_pair(x, y);
  return padic_add(a, b);
}

FieldElement mul(const FieldElement& x, const FieldElement& y) {
  require_same_field(x, y);
  if (const auto* lx = std::get_if<LaurentSeries>(&x.repr())) {
    return series_mul(*lx, std::get<LaurentSeries>(y.repr()));
  }
  const auto* ex = std::get_if<ExactRational>(&x.repr());
  const auto* ey = std::get_if<ExactRational>(&y.repr());
  if (ex && ey) return ExactRational{ex->prime, ex->value * ey->value};
  auto [a, b] = as_padic_pair(x, y);
  return padic_mul(a, b);
}

FieldElement neg(const FieldElement& x) {
  return std::visit(
      [](const auto& e) -> FieldElement {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, ExactRational>) {
          return ExactRational{e.prime, -e.value};
        } else if constexpr (std::is_same_v<T, PAdicNumber>) {
          return padic_neg(e);
        } else {
          return series_neg(e);
        }
      },
      x.repr());
}

FieldElement inv(const FieldElement& x, long series_precision) {
  return std::visit(
      [series_precision](const auto& e) -> FieldElement {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, ExactRational>) {
          if (e.value == 0) throw Error(ErrorKind::kDivisionByZero, "inverse of exact zero");
          return ExactRational{e.prime, 1 / e.value};
        } else if constexpr (std::is_same_v<T, PAdicNumber>) {
          return padic_inv(e);
        } else {
          return series_inv(e, series_precision);
        }
      },
      x.repr());
}

FieldElement arith(ArithOp op, const FieldElement& x, const std::optional<FieldElement>& y) {
  auto second = [&]() -> const FieldElement& {
    if (!y) throw Error(ErrorKind::kInvalidArgument, "binary operation needs two operands");
    return *y;
  };
  switch (op) {
    case ArithOp::kAdd: return add(x, second());
    case ArithOp::kMul: return mul(x, second());
    case ArithOp::kNeg: return neg(x);
    case ArithOp::kInv: return inv(x);
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown operation");
}

FieldElement zero_like(const FieldElement& x) {
  if (const auto* l = std::get_if<LaurentSeries>(&x.repr())) return LaurentSeries::exact_zero(l->prime());
  return ExactRational{x.context().prime, 0};
}

FieldElement restricted_div(const FieldElement& x, const FieldElement& y) {
  require_same_field(x, y);
  if (y.is_exact_zero()) return zero_like(x);
  if (valuation(x) >= valuation(y)) return mul(x, inv(y));
  return zero_like(x);
}

}  // namespace pminimal
