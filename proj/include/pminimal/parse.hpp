#pragma once

// Surface syntax for polynomials, formulas and Laurent polynomials.
//
//   poly    := sum ; products of constants and linear factors give a SplitPoly
//   formula := or
//   or      := and ('|' and)*
//   and     := not ('&' not)*
//   not     := '!' not | '(' formula ')' | atom
//   atom    := 'abs(' poly ')' ('<' | '<=') 'abs(' poly ')' | 'pow(' int ',' poly ')' | poly '=' '0'
//
// Columns in syntax errors are 1-based.

#include <string>
#include <string_view>
#include <variant>

#include "pminimal/hensel.hpp"
#include "pminimal/prepare.hpp"
#include "pminimal/valued.hpp"

namespace pminimal {

std::variant<SplitPoly, Poly> parse_poly(std::string_view text);

// parse_poly, then splits an expanded result over Q (kUnsupportedPolynomial
// when it has no such factorization).
SplitPoly parse_split_poly(std::string_view text);
Poly parse_expanded_poly(std::string_view text);

Formula parse_formula(std::string_view text);

// Finite sum of c * t^k with integer k; returns an exact LaurentSeries over
// the given residue prime (0 for Q) with truncation precision when given.
LaurentSeries parse_laurent(std::string_view text, long prime, std::optional<long> precision = std::nullopt);

std::string render(const SplitPoly& f);
std::string render(const Poly& f);
std::string render(const Formula& phi);

}  // namespace pminimal
