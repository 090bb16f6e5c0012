#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cxorder/distribution.hpp"

namespace cxorder {

/// Exactly evaluable convex function used to probe convex-order inequalities.
class ConvexTestFunction {
 public:
  struct Angle {
    Rational corner;  // t -> max(t - corner, 0)
  };
  struct Monomial {
    unsigned degree;  // even, >= 2
  };
  struct PiecewiseLinear {
    Rational intercept;                // value of the first linear piece at t = 0
    std::vector<Rational> breakpoints;  // strictly increasing
    std::vector<Rational> slopes;       // breakpoints.size() + 1, nondecreasing
  };
  struct Affine {
    Rational alpha;  // t -> alpha + beta t
    Rational beta;
  };

  static ConvexTestFunction angle(Rational corner);
  /// Throws std::invalid_argument unless degree is even and >= 2.
  static ConvexTestFunction monomial(unsigned degree);
  /// Throws std::invalid_argument on unsorted breakpoints or decreasing slopes.
  static ConvexTestFunction piecewise_linear(Rational intercept, std::vector<Rational> breakpoints,
                                             std::vector<Rational> slopes);
  static ConvexTestFunction affine(Rational alpha, Rational beta);

  [[nodiscard]] Rational operator()(const Rational& t) const;
  [[nodiscard]] std::string name() const;
  [[nodiscard]] const auto& variant() const { return variant_; }

 private:
  using Variant = std::variant<Angle, Monomial, PiecewiseLinear, Affine>;
  explicit ConvexTestFunction(Variant v) : variant_(std::move(v)) {}

  Variant variant_;
};

/// E f(X), exact.
Rational expectation(const DiscreteDistribution& d, const ConvexTestFunction& f);

struct TestFamilyOptions {
  bool angles = true;
  bool monomials = true;
  unsigned piecewise_linear_count = 5;
  std::uint64_t seed = 1;
};

/// Built-in family on [0,1]: angles at every k/grid_denominator, even
/// monomials t^2, t^4, t^6, and seeded random piecewise-linear convex
/// functions with rational breakpoints in (0,1).
std::vector<ConvexTestFunction> builtin_test_family(unsigned grid_denominator, const TestFamilyOptions& options);

/// Seeded random piecewise-linear convex function with breakpoints in (0,1).
ConvexTestFunction random_piecewise_linear(std::uint64_t seed, unsigned max_breakpoints = 4);

void to_json(nlohmann::json& j, const ConvexTestFunction& f);

}  // namespace cxorder
