#include <doctest.h>

#include <random>

#include "pminimal/error.hpp"
#include "pminimal/cells.hpp"

using namespace pminimal;

namespace {

Cell cell(long p, Rational center, std::optional<long> lo, std::optional<long> hi, Rational lambda, long n) {
  return Cell{p, std::move(center), lo, hi, std::move(lambda), n};
}

}  // namespace

TEST_SUITE("cells") {
  TEST_CASE("membership") {
    const Cell m = cell(5, 0, std::nullopt, 0, 1, 1);
    CHECK_FALSE(cell_contains(m, Rational(1, 5)));
    CHECK(cell_contains(m, 5));
    CHECK_FALSE(cell_contains(m, 0));
    CHECK(cell_contains(Cell::point(5, 1), 1));
    CHECK_FALSE(cell_contains(Cell::point(5, 1), 2));
    const Cell sq = cell(5, 0, std::nullopt, std::nullopt, 2, 2);
    CHECK(cell_contains(sq, 2));
    CHECK(cell_contains(sq, 50));
    CHECK_FALSE(cell_contains(sq, 4));
    CHECK_FALSE(cell_contains(sq, 10));
  }

  TEST_CASE("validation") {
    CHECK_THROWS_AS(cell(5, 0, 1, std::nullopt, 0, 1).validate(), Error);
    CHECK_THROWS_AS(cell(5, 0, std::nullopt, std::nullopt, 1, 0).validate(), Error);
    CHECK_NOTHROW(cell(5, 0, 3, 1, 1, 2).validate());
  }

  TEST_CASE("emptiness") {
    CHECK(cell_is_empty(cell(5, 0, 1, 3, 1, 1)));
    CHECK_FALSE(cell_is_empty(cell(5, 0, 3, 1, 1, 2)));
    CHECK(cell_contains(cell(5, 0, 3, 1, 1, 2), 25));
    CHECK_FALSE(cell_is_empty(cell(5, 0, 4, 2, 5, 2)));
    CHECK(cell_contains(cell(5, 0, 4, 2, 5, 2), 125));
    CHECK(cell_is_empty(cell(5, 0, 3, 1, 5, 2)));
    CHECK_FALSE(cell_is_empty(Cell::point(3, 7)));
  }

  TEST_CASE("measure") {
    CHECK(cell_measure(cell(5, 0, std::nullopt, 0, 1, 1)) == Measure::finite(Rational(1, 5)));
    CHECK(cell_measure(cell(5, 0, std::nullopt, 0, 1, 2)) == Measure::finite(Rational(1, 60)));
    CHECK(cell_measure(Cell::point(5, 0)) == Measure::finite(0));
    CHECK(cell_measure(cell(5, 0, std::nullopt, -1, 1, 1)) == Measure::finite(1));
    CHECK(cell_measure(cell(5, 0, 1, std::nullopt, 1, 1)).infinite);
    CHECK(cell_measure(cell(5, 0, 1, std::nullopt, 1, 1)).to_string() == "INFINITE");
    CHECK(cell_measure(cell(3, 0, 1, -1, 1, 1)) == Measure::finite(Rational(2, 3)));
    CHECK(cell_measure(cell(2, 0, 1, -1, 1, 2)) == Measure::finite(Rational(1, 8)));
  }

  TEST_CASE("refine by coset") {
    const Cell m = cell(5, 0, std::nullopt, 0, 1, 1);
    const auto parts = refine_by_coset(m, 2);
    REQUIRE(parts.size() == 4);
    std::vector<Rational> lambdas;
    for (const auto& c : parts) {
      CHECK(c.n == 2);
      lambdas.push_back(c.lambda);
    }
    CHECK(lambdas == std::vector<Rational>{1, 2, 5, 10});
    // a one-level window keeps the two odd-valuation cosets only
    const auto window = refine_by_coset(cell(5, 0, 2, 0, 1, 1), 2);
    REQUIRE(window.size() == 2);
    CHECK(window[0].lambda == 5);
    CHECK(window[1].lambda == 10);
    CHECK(refine_by_coset(m, 1) == std::vector<Cell>{m});
    const Cell squares = cell(5, 0, std::nullopt, std::nullopt, 1, 2);
    CHECK(refine_by_coset(squares, 2) == std::vector<Cell>{squares});
  }

  TEST_CASE("refinement preserves measure and partitions") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<long> num(-2000, 2000);
    std::uniform_int_distribution<long> den(1, 400);
    const std::vector<Cell> corpus = {
        cell(5, 0, std::nullopt, 0, 1, 1), cell(3, 1, 4, -2, 1, 1), cell(2, Rational(1, 2), 6, 0, 3, 2),
        cell(7, 0, std::nullopt, -1, 3, 2), cell(3, 2, 5, 0, 3, 1)};
    for (const auto& a : corpus) {
      for (long m : {2, 3, 4}) {
        const auto parts = refine_by_coset(a, m);
        Rational total = 0;
        for (const auto& c : parts) total += cell_measure(c).value;
        CHECK(total == cell_measure(a).value);
        for (int i = 0; i < 100; ++i) {
          Rational t(num(rng), den(rng));
          t.canonicalize();
          int hits = 0;
          for (const auto& c : parts) hits += cell_contains(c, t) ? 1 : 0;
          CHECK(hits == (cell_contains(a, t) ? 1 : 0));
        }
      }
    }
  }

  TEST_CASE("levels") {
    const Cell c = cell(5, 0, 7, 0, 5, 2);
    CHECK(first_level(c) == 1);
    CHECK(last_level(c) == 5);
    CHECK(level_admissible(c, 3));
    CHECK_FALSE(level_admissible(c, 2));
    CHECK(level_measure(c, 1) == Rational(4, 5) / 5 / 2);
    CHECK_FALSE(first_level(cell(5, 0, 7, std::nullopt, 1, 1)).has_value());
  }

  TEST_CASE("canonical order") {
    std::vector<Cell> cells = {cell(5, 1, std::nullopt, 0, 1, 1), Cell::point(5, 1), cell(5, 0, std::nullopt, 0, 1, 1),
                               cell(5, 0, std::nullopt, std::nullopt, 2, 2), Cell::point(5, 0)};
    sort_canonical(cells);
    CHECK(cells[0] == Cell::point(5, 0));
    CHECK(cells[1].lambda == 2);
    CHECK(cells[2].hi == 0);
    CHECK(cells[3] == Cell::point(5, 1));
    CHECK(canonical_lambda(cell(5, 0, std::nullopt, std::nullopt, 8, 2)) == 2);
  }

  TEST_CASE("rendering") {
    CHECK(to_string(Cell::point(5, Rational(1, 2))) == "{1/2}");
    CHECK(to_string(cell(5, 0, 2, 0, 5, 2)) == "{t : 0 < v(t - 0) < 2, t - 0 in 5*P2}");
    CHECK(to_string(cell(5, Rational(-1) / 2, std::nullopt, 0, 1, 1)) == "{t : 0 < v(t + 1/2), t + 1/2 in 1*P1}");
  }
}
