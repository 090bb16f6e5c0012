#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "cxorder/distribution.hpp"

namespace cxorder {

// All procedures in this header phrase the question "lhs <=_cx rhs".
// Distribution functions are left-continuous, F(x) = P(X < x).

/// A decision procedure was called outside its preconditions (measures not
/// concentrated on [a,b], a >= b, unequal endpoint values, nonzero total
/// integral of the difference).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Number of sign changes of a sequence once zero terms are discarded.
int sign_changes(std::span<const Rational> values);

struct CxVerdict {
  bool holds = false;
  bool means_equal = false;
  /// Smallest t with stop_loss(lhs,t) > stop_loss(rhs,t); only when means agree.
  std::optional<Rational> witness;
  /// mean(rhs) - mean(lhs).
  Rational mean_gap;
};

/// Exact decision by stop-loss dominance over the union of both supports.
///
/// On finitely supported measures X <=_cx Y iff E X = E Y and
/// E(X-t)_+ <= E(Y-t)_+ at every support point of either measure; the
/// stop-loss transforms are piecewise linear with kinks only there.
CxVerdict cx_compare_oracle(const DiscreteDistribution& lhs, const DiscreteDistribution& rhs);

struct OhlinReport {
  bool applies = false;
  std::optional<Rational> crossing;
  bool identical = false;
};

/// Single-crossing test: equal means and F_lhs - F_rhs <= 0 below some x0,
/// >= 0 above it. Comparisons are nonstrict; x0 itself is unconstrained.
/// Reported crossing is the right end of the last segment where the
/// difference is negative.
OhlinReport ohlin_check(const DiscreteDistribution& lhs, const DiscreteDistribution& rhs);

/// Points of sign change of F_rhs - F_lhs. Each point is the right end of the
/// last constancy interval (s_i, s_{i+1}] carrying the old sign.
std::vector<Rational> crossing_points(const StepCdf& lhs, const StepCdf& rhs);

struct LevinSteckinResult {
  bool endpoints_equal = false;
  bool integrals_equal = false;
  bool partial_integrals_dominated = false;
  /// First grid point x in (a,b) with int_a^x F_lhs > int_a^x F_rhs.
  std::optional<Rational> first_violation;

  [[nodiscard]] bool holds() const { return endpoints_equal && integrals_equal && partial_integrals_dominated; }
};

/// Levin-Steckin conditions on [a,b]. F(b) is read as the right limit
/// P(X <= b) so mass sitting at b is accounted for.
LevinSteckinResult levin_steckin_check(const StepCdf& lhs, const StepCdf& rhs, const Rational& a, const Rational& b);

struct PartialSumCheck {
  Rational even_sum;  // A_0 + A_2 + ... + A_{2j-2}
  Rational odd_sum;   // A_1 + A_3 + ... + A_{2j-1}
  bool ok = false;
};

struct SzostokReport {
  std::vector<Rational> sign_change_points;
  std::vector<Rational> areas;
  bool parity_ok = false;
  bool partial_sums_ok = false;
  bool first_segment_ok = false;
  std::vector<PartialSumCheck> partial_sums;
  bool decision = false;
};

/// Sign-change lemma on [a,b] with F = F_rhs - F_lhs.
///
/// Throws PreconditionError when the standing hypotheses fail (support
/// outside [a,b], F(a) != 0, F(b) != 0, or int_a^b F != 0). A negative first
/// segment is not an error: it yields first_segment_ok = false and
/// decision = false. Identical distribution functions (m = 0) decide true.
SzostokReport szostok_decision(const StepCdf& lhs, const StepCdf& rhs, const Rational& a, const Rational& b);

void to_json(nlohmann::json& j, const CxVerdict& v);
void to_json(nlohmann::json& j, const OhlinReport& r);
void to_json(nlohmann::json& j, const LevinSteckinResult& r);
void to_json(nlohmann::json& j, const SzostokReport& r);

}  // namespace cxorder
