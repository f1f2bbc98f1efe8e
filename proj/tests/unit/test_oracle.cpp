#include <doctest.h>

#include "pminimal/error.hpp"
#include "pminimal/oracle.hpp"

using namespace pminimal;
namespace o = pminimal::oracle;

TEST_SUITE("oracle") {
  TEST_CASE("power classes") {
    const auto squares = o::nth_power_classes(5, 2, 2);
    CHECK(squares.size() == 10);
    for (long c : {1, 4, 6, 9, 11}) CHECK(squares.count(Integer(c)) == 1);
    CHECK(o::nth_power_classes(2, 2, 3) == std::set<Integer>{1});
    CHECK(o::nth_power_classes(3, 1, 1) == std::set<Integer>{1, 2});
    CHECK(o::nth_power_classes(2, 2, 7).count(Integer(17)) == 1);
  }

  TEST_CASE("index by enumeration") {
    CHECK(o::power_index(5, 2) == 4);
    CHECK(o::power_index(2, 2) == 8);
    CHECK(o::power_index(3, 3) == 9);
    CHECK(o::power_index(7, 1) == 1);
  }

  TEST_CASE("independent predicates") {
    CHECK(o::valuation(Rational(50, 3), 5) == 2);
    CHECK(o::is_nth_power(17, 2, 2));
    CHECK_FALSE(o::is_nth_power(50, 2, 5));
    CHECK(o::evaluate(SplitPoly(2, {{1, 2}}), 3) == 8);
    CHECK(o::contains(Cell{5, 0, std::nullopt, 0, 1, 1}, 5));
    CHECK_FALSE(o::contains(Cell{5, 0, std::nullopt, 0, 1, 1}, 0));
  }

  TEST_CASE("measure examples") {
    CHECK(o::measure(Cell{5, 0, std::nullopt, 0, 1, 1}, 3) == Rational(1, 5));
    CHECK(o::measure(Cell::point(5, 0), 4) == Rational(1, 625));
    CHECK(o::measure(Cell{5, 0, 5, 0, 1, 2}, 7) == Rational(4, 5) / 2 * (Rational(1, 25) + Rational(1, 625)));
    CHECK_THROWS_AS(o::measure(Cell::punctured(5, 0), 3), Error);
    // squares in M: at k = 6 the class of the center stands in for all levels >= 6
    const Rational squares = o::measure(Cell{5, 0, std::nullopt, 0, 1, 2}, 6);
    const Rational exact = Rational(1, 60);
    CHECK(squares == Rational(261, 15625));
    CHECK(squares != exact);
    CHECK(abs(squares - exact) <= power_of(5, -6));
    CHECK(cell_measure(Cell{5, 0, std::nullopt, 0, 1, 2}).value == exact);
  }

  TEST_CASE("self consistency and depth monotonicity") {
    const Cell whole{3, 0, 4, -1, 1, 1};
    const std::vector<Cell> parts = {Cell{3, 0, 4, -1, 1, 2}, Cell{3, 0, 4, -1, 2, 2}, Cell{3, 0, 4, -1, 3, 2},
                                     Cell{3, 0, 4, -1, 6, 2}};
    for (long k = 6; k <= 8; ++k) {
      Rational sum = 0;
      for (const auto& c : parts) sum += o::measure(c, k);
      CHECK(sum == o::measure(whole, k));
      CHECK(o::measure(whole, k) == o::measure(whole, 6));
    }
  }

  TEST_CASE("truncated integrals") {
    const Cell ring{5, 0, std::nullopt, -1, 1, 1};
    CHECK(o::integrate([](const Rational&) { return std::optional<Rational>(1); }, ring, 3) == 1);
    const Rational abs_sum = o::integrate(
        [](const Rational& t) -> std::optional<Rational> {
          if (t == 0) return std::nullopt;
          return power_of(5, -o::valuation(t, 5));
        },
        ring, 6);
    const Rational exact = Rational(5, 6);
    CHECK(abs(abs_sum - exact) <= power_of(5, -6));
    const Rational v_sum = o::integrate(
        [](const Rational& t) -> std::optional<Rational> { return Rational(o::valuation(t, 2)); },
        Cell{2, 0, std::nullopt, -1, 1, 1}, 16);
    CHECK(abs(v_sum - 1) <= Rational(17) * power_of(2, -16));
  }

  TEST_CASE("partition check") {
    const auto grid = o::default_grid(5);
    CHECK(grid.depth == 6);
    CHECK(o::default_grid(7).depth == 4);
    CHECK(o::default_grid(11).depth == 4);
    o::SampleGrid small{3, -1, 1, 2, {}};
    CHECK(small.points().size() == 3 * 6 + 1);
    const std::vector<Cell> ok = {Cell::point(3, 0), Cell::punctured(3, 0)};
    CHECK(o::partition_check(ok, small).ok);
    const auto dup = o::partition_check({Cell::punctured(3, 0), Cell::punctured(3, 0)}, small);
    CHECK_FALSE(dup.ok);
    REQUIRE_FALSE(dup.violations.empty());
    CHECK(dup.violations[0].count == 2);
    const auto pred = o::partition_check({Cell::point(3, 0)}, small, [](const Rational& t) { return t == 0; });
    CHECK(pred.ok);
  }

  TEST_CASE("formula evaluation") {
    const Formula phi = Formula::negation(Formula::pow(2, SplitPoly::linear(0)));
    CHECK(o::evaluate(phi, 0, 5));
    CHECK(o::evaluate(phi, 2, 5));
    CHECK_FALSE(o::evaluate(phi, 4, 5));
    CHECK(o::evaluate(Formula::abs_lt(SplitPoly::linear(1), SplitPoly::linear(0)), 6, 5));
  }
}
