#include <doctest.h>

#include <functional>

#include "pminimal/error.hpp"
#include "pminimal/parse.hpp"

using namespace pminimal;

namespace {

long syntax_column(const std::function<void()>& f) {
  try {
    f();
  } catch (const SyntaxError& e) {
    return static_cast<long>(e.column());
  }
  return -1;
}

}  // namespace

TEST_SUITE("parse") {
  TEST_CASE("polynomials") {
    const auto f = parse_poly("(t)*(t-1)");
    REQUIRE(std::holds_alternative<SplitPoly>(f));
    CHECK(std::get<SplitPoly>(f) == SplitPoly(1, {{0, 1}, {1, 1}}));
    const auto g = parse_poly("t^2-6");
    REQUIRE(std::holds_alternative<Poly>(g));
    CHECK(std::get<Poly>(g) == Poly(std::vector<Rational>{-6, 0, 1}));
    CHECK(std::get<SplitPoly>(parse_poly("3/2*(t-1)^2*(t+4)")) == SplitPoly(Rational(3, 2), {{1, 2}, {-4, 1}}));
    CHECK(std::get<SplitPoly>(parse_poly(" - t * ( t + 1/2 ) ")) == SplitPoly(-1, {{0, 1}, {Rational(-1, 2), 1}}));
    CHECK(std::get<SplitPoly>(parse_poly("2*t - 1")) == SplitPoly(2, {{Rational(1, 2), 1}}));
    CHECK(std::get<SplitPoly>(parse_poly("7")) == SplitPoly::constant(7));
    CHECK(std::get<Poly>(parse_poly("0")).degree() == -1);
    CHECK(std::get<SplitPoly>(parse_poly("t^0")) == SplitPoly::constant(1));
    CHECK(parse_split_poly("t^2 - 1") == SplitPoly(1, {{-1, 1}, {1, 1}}));
    CHECK_THROWS_WITH_AS(parse_split_poly("t^2 - 2"), doctest::Contains("unsupported-polynomial"), Error);
    CHECK(parse_expanded_poly("t*(t-1)") == Poly(std::vector<Rational>{0, -1, 1}));
  }

  TEST_CASE("polynomial syntax errors") {
    CHECK(syntax_column([] { parse_poly("t^-1"); }) == 3);
    CHECK(syntax_column([] { parse_poly("(t-1"); }) == 5);
    CHECK(syntax_column([] { parse_poly("t + x"); }) == 5);
    CHECK(syntax_column([] { parse_poly(""); }) == 1);
    CHECK(syntax_column([] { parse_poly("1/0"); }) == 3);
    CHECK(syntax_column([] { parse_poly("t t"); }) == 3);
  }

  TEST_CASE("formulas") {
    const SplitPoly t = SplitPoly::linear(0);
    CHECK(parse_formula("abs(t) < abs(1) & pow(2, t)") ==
          Formula::conj(Formula::abs_lt(t, SplitPoly::constant(1)), Formula::pow(2, t)));
    CHECK(parse_formula("!pow(2,t)") == Formula::negation(Formula::pow(2, t)));
    CHECK(parse_formula("abs(t-1) <= abs(t)") == Formula::abs_le(SplitPoly::linear(1), t));
    CHECK(parse_formula("t*(t-1) = 0") == Formula::eqz(SplitPoly(1, {{0, 1}, {1, 1}})));
    CHECK(parse_formula("(t-1) = 0") == Formula::eqz(SplitPoly::linear(1)));
    CHECK(parse_formula("pow(2,t) | pow(3,t) & t = 0") ==
          Formula::disj(Formula::pow(2, t), Formula::conj(Formula::pow(3, t), Formula::eqz(t))));
    CHECK(parse_formula("(pow(2,t) | pow(3,t)) & t = 0") ==
          Formula::conj(Formula::disj(Formula::pow(2, t), Formula::pow(3, t)), Formula::eqz(t)));
    CHECK(parse_formula("!!t = 0") == Formula::negation(Formula::negation(Formula::eqz(t))));
  }

  TEST_CASE("formula syntax errors") {
    CHECK(syntax_column([] { parse_formula("abs(t <"); }) == 7);
    CHECK(syntax_column([] { parse_formula("pow(0, t)"); }) == 5);
    CHECK(syntax_column([] { parse_formula("pow(2, t"); }) == 9);
    CHECK(syntax_column([] { parse_formula("t = 1"); }) == 5);
    CHECK(syntax_column([] { parse_formula("pow(2,t) &"); }) == 11);
  }

  TEST_CASE("laurent polynomials") {
    const LaurentSeries s = parse_laurent("3*t^-2 + t", 5);
    CHECK(s.val() == -2);
    CHECK(s.coeff(-2) == 3);
    CHECK(s.coeff(1) == 1);
    CHECK(parse_laurent("7 + t", 5).coeff(0) == 2);
    CHECK(parse_laurent("5", 5).is_exact_zero());
    CHECK(parse_laurent("-1/2*t", 0).coeff(1) == Rational(-1, 2));
    const LaurentSeries trunc = parse_laurent("1 + t", 5, 3);
    CHECK(trunc.precision() == 3);
  }

  TEST_CASE("render round trip") {
    const std::vector<SplitPoly> polys = {
        SplitPoly::linear(0),
        SplitPoly::linear(1),
        SplitPoly(1, {{0, 1}, {1, 1}}),
        SplitPoly(1, {{1, 1}, {-1, 1}}),
        SplitPoly(1, {{0, 2}, {3, 1}}),
        SplitPoly(Rational(-3, 2), {{Rational(1, 3), 2}, {-4, 1}}),
        SplitPoly(-1, {{Rational(-7, 5), 1}}),
        SplitPoly::constant(Rational(-2, 9))};
    CHECK(render(polys[2]) == "t*(t-1)");
    CHECK(render(polys[4]) == "t^2*(t-3)");
    for (const auto& f : polys) CHECK(parse_split_poly(render(f)) == f);
    const Poly g(std::vector<Rational>{-6, 0, 1});
    CHECK(render(g) == "t^2 - 6");
    CHECK(std::get<Poly>(parse_poly(render(g))) == g);

    const SplitPoly t = SplitPoly::linear(0);
    const std::vector<Formula> formulas = {
        Formula::abs_lt(SplitPoly::linear(1), t),
        Formula::abs_le(t, SplitPoly::constant(Rational(1, 5))),
        Formula::negation(Formula::pow(2, t)),
        Formula::conj(Formula::abs_lt(t, SplitPoly::constant(1)), Formula::pow(3, polys[2])),
        Formula::disj(Formula::eqz(polys[3]), Formula::negation(Formula::conj(Formula::pow(2, t), Formula::eqz(t)))),
        Formula::negation(Formula::negation(Formula::eqz(SplitPoly::linear(1))))};
    for (const auto& phi : formulas) CHECK(parse_formula(render(phi)) == phi);
  }
}
