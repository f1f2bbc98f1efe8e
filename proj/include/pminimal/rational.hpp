#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace pminimal {

using Integer = mpz_class;
using Rational = mpq_class;

struct Prime {
  long value;
};

// p-adic valuation of a nonzero integer / rational.
long valuation_p(const Integer& x, long p);
long valuation_p(const Rational& x, long p);

// x * p^(-v_p(x)) for nonzero x.
Rational unit_part(const Rational& x, long p);

// p^k for any integer k (negative allowed).
Rational power_of(long p, long k);
Integer ipow(long p, unsigned long k);

// x mod m for a rational x whose denominator is invertible mod m. Result in [0, m).
Integer mod_rational(const Rational& x, const Integer& m);

bool is_prime(long p);

// lowest terms, "a/b" with "/b" omitted when b = 1.
std::string to_string(const Rational& x);

// Accepts "a", "-a", "a/b". Returns nullopt on malformed input or zero denominator.
std::optional<Rational> parse_rational(std::string_view text);

long gcd(long a, long b);
long lcm(long a, long b);

// Floor division for integers (rounds toward negative infinity).
long floor_div(long a, long b);
long mod_floor(long a, long b);

}  // namespace pminimal
