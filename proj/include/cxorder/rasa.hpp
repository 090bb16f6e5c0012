#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cxorder/convex_test_function.hpp"
#include "cxorder/cx_order.hpp"
#include "cxorder/distribution.hpp"

namespace cxorder {

/// Input rejected because it makes the requested object degenerate (for
/// example an all-equal parameter vector for the psi pattern).
class DegenerateInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Bernstein fundamental polynomial C(n,i) x^i (1-x)^(n-i).
Rational bernstein(unsigned n, unsigned i, const Rational& x);

/// The quadratic Bernstein form
///   sum_{i,j} (b_i(x) b_j(x) + b_i(y) b_j(y) - 2 b_i(x) b_j(y)) f((i+j)/2n),
/// evaluated term by term.
Rational rasa_form(unsigned n, const Rational& x, const Rational& y, const ConvexTestFunction& f);

/// The m-variable form
///   sum_{i_1..i_m} (sum_r prod_s b_{i_s}(x_r) - m prod_s b_{i_s}(x_s)) f((i_1+..+i_m)/mn),
/// evaluated by enumerating all (n+1)^m index tuples.
Rational rasa_form_general(unsigned n, std::span<const Rational> xs, const ConvexTestFunction& f);

/// lhs: law of (X_(1)+..+X_(m))/(mn). rhs: equal-weight mixture over i of the
/// laws of (X_(i),1+..+X_(i),m)/(mn). Parameters 0 and 1 give Dirac laws.
struct RasaPair {
  DiscreteDistribution lhs;
  DiscreteDistribution rhs;
  unsigned n = 0;
  unsigned m = 0;
  std::vector<Rational> xs;
};

RasaPair rasa_pair(unsigned n, const Rational& x, const Rational& y);
RasaPair generalized_pair(unsigned n, std::span<const Rational> xs);

/// Unscaled X+Y against (F_{X1+X2} + F_{Y1+Y2})/2 via the stop-loss oracle.
CxVerdict verify_theorem_main(unsigned n, const Rational& x, const Rational& y);

/// Exact law of a sum of independent Bernoulli(p_i).
DiscreteDistribution poisson_binomial(std::span<const Rational> ps);

/// poisson_binomial(ps) against binomial(n, mean of ps).
CxVerdict verify_hoeffding(std::span<const Rational> ps);

struct PsiPattern {
  std::vector<Rational> values;  // psi_k, k = 0..mn
  std::vector<int> pattern;      // signs of the nonzero psi_k, in order
  int change_count = 0;

  /// "+-+" style rendering of `pattern`.
  [[nodiscard]] std::string pattern_string() const;
};

/// psi_k = (1/m) sum_i x_i^k (1-x_i)^(mn-k) - xbar^k (1-xbar)^(mn-k).
/// Parameters may lie anywhere in [0,1]; an all-equal vector throws
/// DegenerateInputError.
PsiPattern psi_sign_pattern(unsigned n, std::span<const Rational> xs);

struct GeneralizedVerdict {
  CxVerdict sum_vs_binomial;      // X_(1)+..+X_(m) <=_cx B(mn, xbar)
  CxVerdict binomial_vs_mixture;  // B(mn, xbar) <=_cx mixture of m-fold sums
  CxVerdict sum_vs_mixture;       // X_(1)+..+X_(m) <=_cx the same mixture

  [[nodiscard]] bool all_hold() const {
    return sum_vs_binomial.holds && binomial_vs_mixture.holds && sum_vs_mixture.holds;
  }
};

/// The three relations on the unscaled distributions, each decided
/// independently by the stop-loss oracle.
GeneralizedVerdict verify_generalized(unsigned n, std::span<const Rational> xs);

/// Every rational in [0,1] with denominator <= bound, ascending.
std::vector<Rational> unit_interval_grid(unsigned bound);

/// Nondecreasing m-tuples drawn from sorted `values`, in lexicographic order.
std::vector<std::vector<Rational>> sorted_tuples(std::span<const Rational> values, unsigned m);

void to_json(nlohmann::json& j, const PsiPattern& p);
void to_json(nlohmann::json& j, const GeneralizedVerdict& v);

}  // namespace cxorder
