#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cxorder/convex_test_function.hpp"
#include "cxorder/cx_order.hpp"
#include "cxorder/distribution.hpp"

namespace cxorder {

/// The analyzed pair disagreed with a reference value.
class CounterexampleMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// X+Y with X ~ (d1+d3)/2, Y ~ (d0+d4)/2, against the half-half mixture of
/// the laws of X1+X2 and Y1+Y2 (independent copies).
std::pair<DiscreteDistribution, DiscreteDistribution> build_counterexample();

struct CounterexampleReport {
  DiscreteDistribution lhs;
  DiscreteDistribution rhs;
  std::vector<Rational> sign_change_points;
  std::vector<Rational> areas;
  bool szostok_decision = true;
  SzostokReport szostok;
  LevinSteckinResult levin_steckin;
  CxVerdict oracle_verdict;
  ConvexTestFunction witness_function;
  Rational witness_lhs_expectation;
  Rational witness_rhs_expectation;
};

/// Runs every decision procedure on the pair and checks the reference values:
/// crossings (1,4,7), areas (1/8,3/8,3/8,1/8), failure by all procedures, and
/// the angle at the oracle witness giving 1 against 3/4. Throws
/// CounterexampleMismatch on any disagreement.
CounterexampleReport analyze_counterexample();

void to_json(nlohmann::json& j, const CounterexampleReport& r);
/// Two-column `field,value` CSV; list values are comma-joined inside quotes.
std::string to_csv(const CounterexampleReport& r);

}  // namespace cxorder
