#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cxorder/rational.hpp"

namespace cxorder {

/// Raised when a distribution would violate its invariants or an operation's
/// parameters are out of range.
class DistributionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Atom {
  Rational support;
  Rational mass;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Finitely supported probability measure on the rationals.
///
/// Atoms are kept sorted by support with strictly positive masses summing to
/// exactly one; two distributions compare equal iff their atom lists match.
class DiscreteDistribution {
 public:
  /// Sorts, merges equal support points and validates. Zero-mass atoms are
  /// dropped; negative masses or a total other than 1 throw DistributionError.
  static DiscreteDistribution from_atoms(std::vector<Atom> atoms);

  [[nodiscard]] std::span<const Atom> atoms() const { return atoms_; }
  [[nodiscard]] std::size_t size() const { return atoms_.size(); }
  [[nodiscard]] const Rational& min_support() const { return atoms_.front().support; }
  [[nodiscard]] const Rational& max_support() const { return atoms_.back().support; }
  [[nodiscard]] std::vector<Rational> support() const;
  /// Mass at `x`, zero when `x` is not a support point.
  [[nodiscard]] Rational mass_at(const Rational& x) const;

  friend bool operator==(const DiscreteDistribution&, const DiscreteDistribution&) = default;

 private:
  explicit DiscreteDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {}

  std::vector<Atom> atoms_;
};

DiscreteDistribution dirac(const Rational& c);
DiscreteDistribution bernoulli(const Rational& p);
DiscreteDistribution binomial(unsigned n, const Rational& p);

/// Law of the sum of independent draws from `a` and `b`.
DiscreteDistribution convolve(const DiscreteDistribution& a, const DiscreteDistribution& b);

/// Law of the sum of `count` independent copies of `d`; count >= 1.
DiscreteDistribution convolve_power(const DiscreteDistribution& d, unsigned count);

/// The measure sum_i weights[i] * parts[i].
DiscreteDistribution mixture(std::span<const Rational> weights, std::span<const DiscreteDistribution> parts);

/// Law of X / a for a > 0.
DiscreteDistribution scale(const DiscreteDistribution& d, const Rational& a);

Rational mean(const DiscreteDistribution& d);

/// F(x) = P(X < x); left-continuous.
Rational cdf(const DiscreteDistribution& d, const Rational& x);

/// E (X - t)_+.
Rational stop_loss(const DiscreteDistribution& d, const Rational& t);

/// Evaluation view of a distribution as its left-continuous distribution
/// function F(x) = P(X < x).
class StepCdf {
 public:
  explicit StepCdf(DiscreteDistribution d) : dist_(std::move(d)) {}

  [[nodiscard]] Rational operator()(const Rational& x) const { return cdf(dist_, x); }
  /// P(X <= x), the right limit of F at x.
  [[nodiscard]] Rational right_limit(const Rational& x) const;

  [[nodiscard]] const DiscreteDistribution& distribution() const { return dist_; }

 private:
  DiscreteDistribution dist_;
};

/// Multi-line human-readable rendering, masses also shown in decimal.
std::string describe(const DiscreteDistribution& d, int digits = 6);

}  // namespace cxorder
