#include "cxorder/convex_test_function.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

#include "cxorder/distribution_io.hpp"

namespace cxorder {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Bounded draw from a std::mt19937_64 stream. std::uniform_int_distribution is
// implementation-defined, so it would break cross-platform report identity.
std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<std::int64_t>(rng() % span);
}

}  // namespace

ConvexTestFunction ConvexTestFunction::angle(Rational corner) { return ConvexTestFunction(Angle{std::move(corner)}); }

ConvexTestFunction ConvexTestFunction::monomial(unsigned degree) {
  if (degree < 2 || degree % 2 != 0) throw std::invalid_argument("monomial degree must be even and >= 2");
  return ConvexTestFunction(Monomial{degree});
}

ConvexTestFunction ConvexTestFunction::piecewise_linear(Rational intercept, std::vector<Rational> breakpoints,
                                                        std::vector<Rational> slopes) {
  if (slopes.size() != breakpoints.size() + 1) {
    throw std::invalid_argument("piecewise_linear: need exactly one more slope than breakpoints");
  }
  if (std::adjacent_find(breakpoints.begin(), breakpoints.end(), std::greater_equal<>()) != breakpoints.end()) {
    throw std::invalid_argument("piecewise_linear: breakpoints must be strictly increasing");
  }
  if (!std::is_sorted(slopes.begin(), slopes.end())) {
    throw std::invalid_argument("piecewise_linear: slopes must be nondecreasing");
  }
  return ConvexTestFunction(PiecewiseLinear{std::move(intercept), std::move(breakpoints), std::move(slopes)});
}

ConvexTestFunction ConvexTestFunction::affine(Rational alpha, Rational beta) {
  return ConvexTestFunction(Affine{std::move(alpha), std::move(beta)});
}

Rational ConvexTestFunction::operator()(const Rational& t) const {
  return std::visit(overloaded{
                        [&](const Angle& f) { return t > f.corner ? t - f.corner : Rational(0); },
                        [&](const Monomial& f) { return t.pow(f.degree); },
                        [&](const PiecewiseLinear& f) {
                          Rational v = f.intercept + f.slopes.front() * t;
                          for (std::size_t i = 0; i < f.breakpoints.size(); ++i) {
                            if (t > f.breakpoints[i]) v += (f.slopes[i + 1] - f.slopes[i]) * (t - f.breakpoints[i]);
                          }
                          return v;
                        },
                        [&](const Affine& f) { return f.alpha + f.beta * t; },
                    },
                    variant_);
}

std::string ConvexTestFunction::name() const {
  return std::visit(overloaded{
                        [](const Angle& f) { return "angle(" + f.corner.str() + ")"; },
                        [](const Monomial& f) { return "monomial(" + std::to_string(f.degree) + ")"; },
                        [](const PiecewiseLinear& f) {
                          std::string s = "pl(" + f.intercept.str() + ";";
                          for (std::size_t i = 0; i < f.slopes.size(); ++i) {
                            if (i > 0) s += "|" + f.breakpoints[i - 1].str() + "|";
                            s += f.slopes[i].str();
                          }
                          return s + ")";
                        },
                        [](const Affine& f) { return "affine(" + f.alpha.str() + "," + f.beta.str() + ")"; },
                    },
                    variant_);
}

Rational expectation(const DiscreteDistribution& d, const ConvexTestFunction& f) {
  Rational e;
  for (const auto& atom : d.atoms()) e += atom.mass * f(atom.support);
  return e;
}

ConvexTestFunction random_piecewise_linear(std::uint64_t seed, unsigned max_breakpoints) {
  std::mt19937_64 rng(seed);
  const auto count = static_cast<std::size_t>(draw(rng, 1, std::max<std::int64_t>(1, max_breakpoints)));
  std::set<Rational> points;
  while (points.size() < count) {
    const std::int64_t den = draw(rng, 2, 12);
    points.insert(Rational(draw(rng, 1, den - 1), den));
  }
  std::vector<Rational> slopes;
  for (std::size_t i = 0; i <= count; ++i) slopes.emplace_back(draw(rng, -20, 20), draw(rng, 1, 4));
  std::sort(slopes.begin(), slopes.end());
  return ConvexTestFunction::piecewise_linear(Rational(draw(rng, -5, 5)), {points.begin(), points.end()},
                                              std::move(slopes));
}

std::vector<ConvexTestFunction> builtin_test_family(unsigned grid_denominator, const TestFamilyOptions& options) {
  std::vector<ConvexTestFunction> family;
  if (options.angles) {
    for (unsigned k = 0; k <= grid_denominator; ++k) {
      family.push_back(ConvexTestFunction::angle(Rational(k, grid_denominator)));
    }
  }
  if (options.monomials) {
    for (unsigned degree : {2U, 4U, 6U}) family.push_back(ConvexTestFunction::monomial(degree));
  }
  std::mt19937_64 seeds(options.seed);
  for (unsigned i = 0; i < options.piecewise_linear_count; ++i) family.push_back(random_piecewise_linear(seeds()));
  return family;
}

void to_json(nlohmann::json& j, const ConvexTestFunction& f) {
  std::visit(overloaded{
                 [&](const ConvexTestFunction::Angle& a) { j = {{"kind", "angle"}, {"corner", a.corner.str()}}; },
                 [&](const ConvexTestFunction::Monomial& m) { j = {{"kind", "monomial"}, {"degree", m.degree}}; },
                 [&](const ConvexTestFunction::PiecewiseLinear& p) {
                   nlohmann::json bps = nlohmann::json::array();
                   nlohmann::json slopes = nlohmann::json::array();
                   for (const auto& b : p.breakpoints) bps.push_back(b.str());
                   for (const auto& s : p.slopes) slopes.push_back(s.str());
                   j = {{"kind", "piecewise_linear"},
                        {"intercept", p.intercept.str()},
                        {"breakpoints", bps},
                        {"slopes", slopes}};
                 },
                 [&](const ConvexTestFunction::Affine& a) {
                   j = {{"kind", "affine"}, {"alpha", a.alpha.str()}, {"beta", a.beta.str()}};
                 },
             },
             f.variant());
}

}  // namespace cxorder
