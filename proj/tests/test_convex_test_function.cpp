#include <doctest.h>

#include "cxorder/convex_test_function.hpp"
#include "test_support.hpp"

using namespace cxorder;

TEST_CASE("evaluation") {
  const auto angle = ConvexTestFunction::angle(Rational(1, 2));
  CHECK(angle(0) == Rational(0));
  CHECK(angle(Rational(1, 2)) == Rational(0));
  CHECK(angle(1) == Rational(1, 2));
  CHECK(ConvexTestFunction::monomial(4)(Rational(1, 2)) == Rational(1, 16));
  CHECK(ConvexTestFunction::affine(2, -3)(2) == Rational(-4));

  // |t - 1| + 1 written with one breakpoint
  const auto pl = ConvexTestFunction::piecewise_linear(2, {Rational(1)}, {Rational(-1), Rational(1)});
  CHECK(pl(0) == Rational(2));
  CHECK(pl(1) == Rational(1));
  CHECK(pl(3) == Rational(3));
}

TEST_CASE("names and json") {
  CHECK(ConvexTestFunction::angle(4).name() == "angle(4)");
  CHECK(ConvexTestFunction::monomial(2).name() == "monomial(2)");
  CHECK(ConvexTestFunction::affine(1, Rational(1, 2)).name() == "affine(1,1/2)");
  const nlohmann::json j = ConvexTestFunction::angle(Rational(1, 3));
  CHECK(j.dump() == R"({"corner":"1/3","kind":"angle"})");
  const nlohmann::json m = ConvexTestFunction::monomial(6);
  CHECK(m["degree"] == 6);
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(ConvexTestFunction::monomial(3), std::invalid_argument);
  CHECK_THROWS_AS(ConvexTestFunction::monomial(0), std::invalid_argument);
  CHECK_THROWS_AS(ConvexTestFunction::piecewise_linear(0, {Rational(1)}, {Rational(1)}), std::invalid_argument);
  CHECK_THROWS_AS(ConvexTestFunction::piecewise_linear(0, {Rational(2), Rational(1)}, {0, 1, 2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ConvexTestFunction::piecewise_linear(0, {Rational(1)}, {Rational(1), Rational(0)}),
                  std::invalid_argument);
}

TEST_CASE("expectation") {
  CHECK(expectation(binomial(2, Rational(1, 2)), ConvexTestFunction::monomial(2)) == Rational(3, 2));
  CHECK(expectation(bernoulli(Rational(1, 3)), ConvexTestFunction::affine(1, 3)) == Rational(2));
}

TEST_CASE("builtin family") {
  const auto family = builtin_test_family(4, {});
  CHECK(family.size() == 5 + 3 + 5);
  CHECK(family[0].name() == "angle(0)");
  CHECK(family[4].name() == "angle(1)");
  CHECK(family[5].name() == "monomial(2)");

  TestFamilyOptions only_pl;
  only_pl.angles = false;
  only_pl.monomials = false;
  only_pl.piecewise_linear_count = 3;
  only_pl.seed = 9;
  const auto a = builtin_test_family(4, only_pl);
  const auto b = builtin_test_family(4, only_pl);
  REQUIRE(a.size() == 3);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].name() == b[i].name());
  only_pl.seed = 10;
  CHECK(builtin_test_family(4, only_pl)[0].name() != a[0].name());
}

TEST_CASE("every family member is convex on a fine grid") {
  TestFamilyOptions options;
  options.piecewise_linear_count = 40;
  std::vector<Rational> grid;
  for (int k = 0; k <= 60; ++k) grid.emplace_back(k, 60);
  for (const auto& f : builtin_test_family(6, options)) {
    CAPTURE(f.name());
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
      CHECK(f(grid[i - 1]) + f(grid[i + 1]) >= Rational(2) * f(grid[i]));
    }
  }
}

TEST_CASE("random piecewise-linear breakpoints lie in (0,1)") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto f = random_piecewise_linear(seed);
    const auto& pl = std::get<ConvexTestFunction::PiecewiseLinear>(f.variant());
    CHECK(!pl.breakpoints.empty());
    CHECK(pl.breakpoints.size() <= 4);
    for (const auto& b : pl.breakpoints) {
      CHECK(b > Rational(0));
      CHECK(b < Rational(1));
    }
  }
}
