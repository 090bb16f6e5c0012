#include <doctest.h>

#include "cxorder/cx_order.hpp"
#include "cxorder/convex_test_function.hpp"
#include "test_support.hpp"

using namespace cxorder;
using cxorder::testing::Rng;

namespace {

const Rational kHalf(1, 2);

DiscreteDistribution atoms(std::vector<Atom> a) { return DiscreteDistribution::from_atoms(std::move(a)); }

DiscreteDistribution counter_lhs() {
  const Rational q(1, 4);
  return atoms({{1, q}, {3, q}, {5, q}, {7, q}});
}

DiscreteDistribution counter_rhs() {
  const Rational e(1, 8);
  return atoms({{0, e}, {2, e}, {4, kHalf}, {6, e}, {8, e}});
}

DiscreteDistribution two_point_0_2() { return atoms({{0, kHalf}, {2, kHalf}}); }

DiscreteDistribution binomial_mixture_quarter() {
  const Rational w[] = {kHalf, kHalf};
  const DiscreteDistribution parts[] = {binomial(2, Rational(1, 4)), binomial(2, Rational(3, 4))};
  return mixture(w, parts);
}

Rational interval_low(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  return min(a.min_support(), b.min_support());
}
Rational interval_high(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  return max(a.max_support(), b.max_support());
}

}  // namespace

TEST_CASE("sign_changes discards zeros") {
  const std::vector<Rational> a{1, 0, -2, 3};
  CHECK(sign_changes(a) == 2);
  const std::vector<Rational> zeros{0, 0, 0};
  CHECK(sign_changes(zeros) == 0);
  const std::vector<Rational> psi{Rational(1, 16), Rational(-1, 16), Rational(1, 16)};
  CHECK(sign_changes(psi) == 2);
  CHECK(sign_changes(std::vector<Rational>{}) == 0);
  const std::vector<Rational> same{-1, 0, -3};
  CHECK(sign_changes(same) == 0);
}

TEST_CASE("oracle examples") {
  const auto b = binomial(3, Rational(2, 5));
  const auto self = cx_compare_oracle(b, b);
  CHECK(self.holds);
  CHECK(self.means_equal);
  CHECK_FALSE(self.witness.has_value());

  const auto counter = cx_compare_oracle(counter_lhs(), counter_rhs());
  CHECK_FALSE(counter.holds);
  CHECK(counter.means_equal);
  REQUIRE(counter.witness.has_value());
  CHECK(*counter.witness == Rational(4));
  CHECK(stop_loss(counter_lhs(), 4) == Rational(1));
  CHECK(stop_loss(counter_rhs(), 4) == Rational(3, 4));

  // stop-loss at 0,1,2: (1, 1/4, 0) against (1, 1/2, 0)
  CHECK(cx_compare_oracle(binomial(2, kHalf), two_point_0_2()).holds);
  CHECK_FALSE(cx_compare_oracle(two_point_0_2(), binomial(2, kHalf)).holds);

  const auto shifted = cx_compare_oracle(dirac(0), dirac(1));
  CHECK_FALSE(shifted.holds);
  CHECK_FALSE(shifted.means_equal);
  CHECK_FALSE(shifted.witness.has_value());
  CHECK(shifted.mean_gap == Rational(1));
}

TEST_CASE("ohlin examples") {
  // cdfs at 1: 1/4 vs 5/16, at 2: 3/4 vs 11/16
  const auto lhs = binomial(2, kHalf);
  const auto rhs = binomial_mixture_quarter();
  CHECK(cdf(lhs, 1) == Rational(1, 4));
  CHECK(cdf(rhs, 1) == Rational(5, 16));
  CHECK(cdf(lhs, 2) == Rational(3, 4));
  CHECK(cdf(rhs, 2) == Rational(11, 16));
  const auto r = ohlin_check(lhs, rhs);
  CHECK(r.applies);
  CHECK_FALSE(r.identical);
  REQUIRE(r.crossing.has_value());
  // F_lhs - F_rhs < 0 on (0,1] and > 0 on (1,2], so x0 = 1 is the only valid crossing
  CHECK(*r.crossing == Rational(1));

  const auto same = ohlin_check(lhs, lhs);
  CHECK(same.identical);
  CHECK(same.applies);
  CHECK_FALSE(same.crossing.has_value());

  CHECK_FALSE(ohlin_check(counter_lhs(), counter_rhs()).applies);
  CHECK_FALSE(ohlin_check(dirac(0), bernoulli(kHalf)).applies);
}

TEST_CASE("crossing points") {
  CHECK(crossing_points(StepCdf(counter_lhs()), StepCdf(counter_rhs())) == std::vector<Rational>{1, 4, 7});
  const auto b = binomial(4, Rational(1, 3));
  CHECK(crossing_points(StepCdf(b), StepCdf(b)).empty());
  CHECK(crossing_points(StepCdf(binomial(2, kHalf)), StepCdf(binomial_mixture_quarter())) ==
        std::vector<Rational>{1});
}

TEST_CASE("levin-steckin examples") {
  const auto b = binomial(2, kHalf);
  const auto same = levin_steckin_check(StepCdf(b), StepCdf(b), 0, 2);
  CHECK(same.endpoints_equal);
  CHECK(same.integrals_equal);
  CHECK(same.partial_integrals_dominated);

  const auto pair = levin_steckin_check(StepCdf(b), StepCdf(two_point_0_2()), 0, 2);
  CHECK(pair.holds());

  // Partial integrals of F over [0,x]: equal at 2 (1/4 and 1/4) and 3 (1/2 and
  // 1/2); at 4 the lhs reaches 1 against 3/4.
  const auto counter = levin_steckin_check(StepCdf(counter_lhs()), StepCdf(counter_rhs()), 0, 8);
  CHECK(counter.endpoints_equal);
  CHECK(counter.integrals_equal);
  CHECK_FALSE(counter.partial_integrals_dominated);
  REQUIRE(counter.first_violation.has_value());
  CHECK(*counter.first_violation == Rational(4));
  CHECK_FALSE(counter.holds());

  // unequal means break the integral condition
  const auto moved = levin_steckin_check(StepCdf(dirac(1)), StepCdf(dirac(2)), 0, 3);
  CHECK_FALSE(moved.integrals_equal);
}

TEST_CASE("levin-steckin preconditions") {
  const auto b = binomial(2, kHalf);
  CHECK_THROWS_AS(levin_steckin_check(StepCdf(b), StepCdf(b), 0, 1), PreconditionError);
  CHECK_THROWS_AS(levin_steckin_check(StepCdf(b), StepCdf(b), 1, 2), PreconditionError);
  CHECK_THROWS_AS(levin_steckin_check(StepCdf(b), StepCdf(b), 2, 0), PreconditionError);
}

TEST_CASE("szostok on the non-binomial pair") {
  const auto r = szostok_decision(StepCdf(counter_lhs()), StepCdf(counter_rhs()), 0, 8);
  CHECK(r.sign_change_points == std::vector<Rational>{1, 4, 7});
  CHECK(r.areas == std::vector<Rational>{Rational(1, 8), Rational(3, 8), Rational(3, 8), Rational(1, 8)});
  CHECK(r.parity_ok);
  CHECK(r.first_segment_ok);
  CHECK_FALSE(r.partial_sums_ok);
  CHECK_FALSE(r.decision);
  REQUIRE(r.partial_sums.size() == 1);
  CHECK(r.partial_sums[0].even_sum == Rational(1, 8));
  CHECK(r.partial_sums[0].odd_sum == Rational(3, 8));
}

TEST_CASE("szostok single crossing and identical") {
  const auto r = szostok_decision(StepCdf(binomial(2, kHalf)), StepCdf(binomial_mixture_quarter()), 0, 2);
  CHECK(r.sign_change_points.size() == 1);
  CHECK(r.areas.size() == 2);
  CHECK(r.partial_sums.empty());
  CHECK(r.decision);

  const auto b = binomial(3, Rational(1, 5));
  const auto same = szostok_decision(StepCdf(b), StepCdf(b), 0, 3);
  CHECK(same.sign_change_points.empty());
  CHECK(same.areas == std::vector<Rational>{0});
  CHECK(same.decision);
}

TEST_CASE("szostok m = 3 with A0 >= A1 agrees with the oracle") {
  // lhs = (d1 + 2 d2 + d3 + 2 d5)/6, rhs = (d0 + d1 + d3 + 2 d4 + d6)/6, both with mean 3.
  // F_rhs - F_lhs on the unit segments of [0,6]: +1/6, +1/6, -1/6, -1/6, +1/6, -1/6.
  const Rational s(1, 6);
  const Rational t(1, 3);
  const auto lhs = atoms({{1, s}, {2, t}, {3, s}, {5, t}});
  const auto rhs = atoms({{0, s}, {1, s}, {3, s}, {4, t}, {6, s}});
  REQUIRE(mean(lhs) == mean(rhs));
  const auto r = szostok_decision(StepCdf(lhs), StepCdf(rhs), 0, 6);
  CHECK(r.sign_change_points == std::vector<Rational>{2, 4, 5});
  CHECK(r.areas == std::vector<Rational>{t, t, s, s});
  CHECK(r.parity_ok);
  CHECK(r.partial_sums_ok);
  CHECK(r.decision);
  CHECK(cx_compare_oracle(lhs, rhs).holds);
}

TEST_CASE("szostok standing hypotheses") {
  // unequal means: nonzero total integral
  CHECK_THROWS_AS(szostok_decision(StepCdf(dirac(1)), StepCdf(bernoulli(kHalf)), 0, 1), PreconditionError);
  CHECK_THROWS_AS(szostok_decision(StepCdf(dirac(1)), StepCdf(dirac(1)), 2, 3), PreconditionError);
  // negative first segment is a decision, not an error
  const auto r = szostok_decision(StepCdf(two_point_0_2()), StepCdf(binomial(2, kHalf)), 0, 2);
  CHECK_FALSE(r.first_segment_ok);
  CHECK_FALSE(r.decision);
}

TEST_CASE("verdict invariants and equivalences on random equal-mean pairs") {
  Rng rng(31337);
  int holds = 0;
  int ohlin_applies = 0;
  int m3_decided = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto [lhs, rhs] = cxorder::testing::random_equal_mean_pair(rng);
    const auto v = cx_compare_oracle(lhs, rhs);
    CHECK(v.means_equal);
    if (v.holds) {
      ++holds;
      CHECK_FALSE(v.witness.has_value());
    } else {
      REQUIRE(v.witness.has_value());
      CHECK(stop_loss(lhs, *v.witness) > stop_loss(rhs, *v.witness));
    }

    const auto o = ohlin_check(lhs, rhs);
    if (o.applies) {
      ++ohlin_applies;
      CHECK(v.holds);
    }

    const Rational a = 0;
    const Rational b = 10;
    const auto ls = levin_steckin_check(StepCdf(lhs), StepCdf(rhs), a, b);
    CHECK(ls.holds() == v.holds);
    const auto sz = szostok_decision(StepCdf(lhs), StepCdf(rhs), a, b);
    CHECK(sz.decision == v.holds);
    CHECK(sz.areas.size() == sz.sign_change_points.size() + 1);
    if (sz.sign_change_points.size() == 3 && sz.decision) ++m3_decided;
  }
  // the corpus has to exercise both outcomes and the multi-crossing branch
  CHECK(holds > 100);
  CHECK(holds < 900);
  CHECK(ohlin_applies > 50);
  CHECK(m3_decided > 0);
}

TEST_CASE("crossing count equals sampled sign changes") {
  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const auto lhs = cxorder::testing::random_distribution(rng, 5);
    const auto rhs = cxorder::testing::random_distribution(rng, 5);
    std::vector<Rational> grid = lhs.support();
    for (const auto& s : rhs.support()) grid.push_back(s);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::vector<Rational> sampled;
    sampled.push_back(cdf(rhs, grid.front() - 1) - cdf(lhs, grid.front() - 1));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      sampled.push_back(cdf(rhs, grid[i]) - cdf(lhs, grid[i]));
      const Rational next = i + 1 < grid.size() ? (grid[i] + grid[i + 1]) / 2 : grid[i] + 1;
      sampled.push_back(cdf(rhs, next) - cdf(lhs, next));
    }
    CHECK(crossing_points(StepCdf(lhs), StepCdf(rhs)).size() == static_cast<std::size_t>(sign_changes(sampled)));
  }
}

TEST_CASE("scale invariance of the verdict") {
  Rng rng(4242);
  for (int trial = 0; trial < 200; ++trial) {
    const auto [lhs, rhs] = cxorder::testing::random_equal_mean_pair(rng);
    const Rational a = cxorder::testing::random_rational(rng, 1, 9, 7);
    CHECK(cx_compare_oracle(lhs, rhs).holds == cx_compare_oracle(scale(lhs, a), scale(rhs, a)).holds);
  }
}

TEST_CASE("oracle soundness against convex test functions") {
  Rng rng(606);
  int checked = 0;
  for (int trial = 0; trial < 300 && checked < 60; ++trial) {
    const auto [lhs, rhs] = cxorder::testing::random_equal_mean_pair(rng);
    if (!cx_compare_oracle(lhs, rhs).holds) continue;
    ++checked;
    const auto l = cxorder::testing::atoms_map(lhs);
    const auto r = cxorder::testing::atoms_map(rhs);
    std::vector<ConvexTestFunction> family;
    for (std::int64_t c = 0; c <= 10; ++c) family.push_back(ConvexTestFunction::angle(c));
    family.push_back(ConvexTestFunction::monomial(2));
    family.push_back(ConvexTestFunction::monomial(4));
    for (int k = 0; k < 50; ++k) family.push_back(cxorder::testing::random_convex_pl(rng, 0, 10));
    for (const auto& f : family) {
      CAPTURE(f.name());
      CHECK(cxorder::testing::brute_expectation(l, f) <= cxorder::testing::brute_expectation(r, f));
    }
  }
  CHECK(checked == 60);
}

TEST_CASE("json field names") {
  const nlohmann::json v = cx_compare_oracle(counter_lhs(), counter_rhs());
  CHECK(v.dump() == R"({"holds":false,"mean_gap":"0","means_equal":true,"witness":"4"})");
  const nlohmann::json o = ohlin_check(dirac(1), dirac(1));
  CHECK(o.dump() == R"({"applies":true,"crossing":null,"identical":true})");
  const nlohmann::json s = szostok_decision(StepCdf(counter_lhs()), StepCdf(counter_rhs()), 0, 8);
  for (const char* key : {"sign_change_points", "areas", "parity_ok", "partial_sums_ok", "decision"}) {
    CHECK(s.contains(key));
  }
  CHECK(s["areas"].dump() == R"(["1/8","3/8","3/8","1/8"])");
}
