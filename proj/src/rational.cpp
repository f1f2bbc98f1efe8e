#include "pminimal/rational.hpp"

#include <cctype>
#include <numeric>
#include <stdexcept>

#include "pminimal/error.hpp"

namespace pminimal {

const char* error_tag(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kPrecisionExhausted: return "precision-exhausted";
    case ErrorKind::kNotInValuationRing: return "not in valuation ring";
    case ErrorKind::kDivisionByZero: return "division by zero";
    case ErrorKind::kFieldMismatch: return "field-mismatch";
    case ErrorKind::kHenselConditionFailed: return "hensel-condition-failed";
    case ErrorKind::kUnsupportedPolynomial: return "unsupported-polynomial";
    case ErrorKind::kValuationOfZero: return "valuation-of-zero";
    case ErrorKind::kUnsupportedDegree: return "unsupported-degree";
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kSyntax: return "syntax error";
  }
  return "error";
}

long valuation_p(const Integer& x, long p) {
  if (x == 0) throw Error(ErrorKind::kValuationOfZero, "valuation of 0");
  Integer y = abs(x);
  const Integer prime(p);
  long v = 0;
  while (mpz_divisible_p(y.get_mpz_t(), prime.get_mpz_t()) != 0) {
    mpz_divexact(y.get_mpz_t(), y.get_mpz_t(), prime.get_mpz_t());
    ++v;
  }
  return v;
}

long valuation_p(const Rational& x, long p) {
  return valuation_p(Integer(x.get_num()), p) - valuation_p(Integer(x.get_den()), p);
}

Rational unit_part(const Rational& x, long p) {
  return x * power_of(p, -valuation_p(x, p));
}

Integer ipow(long p, unsigned long k) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), k);
  return r;
}

Rational power_of(long p, long k) {
  if (k >= 0) return Rational(ipow(p, static_cast<unsigned long>(k)));
  Rational r(Integer(1), ipow(p, static_cast<unsigned long>(-k)));
  r.canonicalize();
  return r;
}

Integer mod_rational(const Rational& x, const Integer& m) {
  Integer inv;
  Integer den = x.get_den();
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()) == 0) {
    if (m == 1) return 0;
    throw Error(ErrorKind::kNotInValuationRing, "denominator not invertible modulo " + m.get_str());
  }
  Integer r = (Integer(x.get_num()) * inv) % m;
  if (r < 0) r += m;
  return r;
}

bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

std::string to_string(const Rational& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

std::optional<Rational> parse_rational(std::string_view text) {
  auto digits_ok = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
      if (std::isdigit(static_cast<unsigned char>(c)) == 0) return false;
    }
    return true;
  };
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!digits_ok(num) || !digits_ok(den)) return std::nullopt;
  Integer n(std::string(num), 10);
  Integer d(std::string(den), 10);
  if (d == 0) return std::nullopt;
  Rational r(negative ? Integer(-n) : n, d);
  r.canonicalize();
  return r;
}

long gcd(long a, long b) { return std::gcd(a, b); }
long lcm(long a, long b) { return std::lcm(a, b); }

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long mod_floor(long a, long b) { return a - b * floor_div(a, b); }

}  // namespace pminimal
