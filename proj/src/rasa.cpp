#include "cxorder/rasa.hpp"

#include <algorithm>

#include "cxorder/distribution_io.hpp"

namespace cxorder {

namespace {

void require_unit(const Rational& x, const char* what) {
  if (x < Rational(0) || x > Rational(1)) {
    throw DistributionError(std::string(what) + ": parameter " + x.str() + " outside [0,1]");
  }
}

void require_parameters(unsigned n, std::span<const Rational> xs, const char* what) {
  if (n == 0) throw DistributionError(std::string(what) + ": n must be positive");
  if (xs.size() < 2) throw DistributionError(std::string(what) + ": need at least two parameters");
  for (const auto& x : xs) require_unit(x, what);
}

Rational average(std::span<const Rational> xs) {
  Rational s;
  for (const auto& x : xs) s += x;
  return s / Rational(static_cast<std::int64_t>(xs.size()));
}

std::vector<Rational> bernstein_row(unsigned n, const Rational& x) {
  std::vector<Rational> row;
  row.reserve(n + 1);
  for (unsigned i = 0; i <= n; ++i) row.push_back(bernstein(n, i, x));
  return row;
}

std::vector<Rational> grid_values(const ConvexTestFunction& f, unsigned denominator) {
  std::vector<Rational> values;
  values.reserve(denominator + 1);
  for (unsigned k = 0; k <= denominator; ++k) values.push_back(f(Rational(k, denominator)));
  return values;
}

// Unscaled pieces of the m-variable construction.
struct UnscaledPair {
  DiscreteDistribution sum;      // X_(1) + .. + X_(m)
  DiscreteDistribution mixture;  // (1/m) sum_i law(X_(i),1 + .. + X_(i),m)
};

UnscaledPair unscaled_pair(unsigned n, std::span<const Rational> xs) {
  const auto m = static_cast<unsigned>(xs.size());
  DiscreteDistribution sum = binomial(n, xs.front());
  for (std::size_t i = 1; i < xs.size(); ++i) sum = convolve(sum, binomial(n, xs[i]));

  std::vector<DiscreteDistribution> parts;
  parts.reserve(m);
  for (const auto& x : xs) parts.push_back(convolve_power(binomial(n, x), m));
  const std::vector<Rational> weights(m, Rational(1, m));
  return {std::move(sum), mixture(weights, parts)};
}

}  // namespace

Rational bernstein(unsigned n, unsigned i, const Rational& x) {
  if (i > n) throw DistributionError("bernstein: index " + std::to_string(i) + " exceeds degree " + std::to_string(n));
  require_unit(x, "bernstein");
  return Rational::binomial(n, i) * x.pow(i) * (Rational(1) - x).pow(n - i);
}

Rational rasa_form(unsigned n, const Rational& x, const Rational& y, const ConvexTestFunction& f) {
  if (n == 0) throw DistributionError("rasa_form: n must be positive");
  require_unit(x, "rasa_form");
  require_unit(y, "rasa_form");
  const auto bx = bernstein_row(n, x);
  const auto by = bernstein_row(n, y);
  const auto fv = grid_values(f, 2 * n);
  Rational total;
  for (unsigned i = 0; i <= n; ++i) {
    for (unsigned j = 0; j <= n; ++j) {
      const Rational weight = bx[i] * bx[j] + by[i] * by[j] - Rational(2) * bx[i] * by[j];
      total += weight * fv[i + j];
    }
  }
  return total;
}

Rational rasa_form_general(unsigned n, std::span<const Rational> xs, const ConvexTestFunction& f) {
  require_parameters(n, xs, "rasa_form_general");
  const std::size_t m = xs.size();
  std::vector<std::vector<Rational>> rows;
  rows.reserve(m);
  for (const auto& x : xs) rows.push_back(bernstein_row(n, x));
  const auto fv = grid_values(f, static_cast<unsigned>(m) * n);
  const Rational m_rational(static_cast<std::int64_t>(m));

  std::vector<unsigned> index(m, 0);
  Rational total;
  while (true) {
    Rational same;  // sum_r prod_s b_{i_s}(x_r)
    for (std::size_t r = 0; r < m; ++r) {
      Rational product(1);
      for (std::size_t s = 0; s < m && !product.is_zero(); ++s) product *= rows[r][index[s]];
      same += product;
    }
    Rational mixed(1);  // prod_s b_{i_s}(x_s)
    for (std::size_t s = 0; s < m && !mixed.is_zero(); ++s) mixed *= rows[s][index[s]];

    unsigned k = 0;
    for (auto i : index) k += i;
    total += (same - m_rational * mixed) * fv[k];

    std::size_t pos = 0;
    while (pos < m && index[pos] == n) index[pos++] = 0;
    if (pos == m) break;
    ++index[pos];
  }
  return total;
}

RasaPair rasa_pair(unsigned n, const Rational& x, const Rational& y) {
  if (n == 0) throw DistributionError("rasa_pair: n must be positive");
  require_unit(x, "rasa_pair");
  require_unit(y, "rasa_pair");
  const Rational two_n(2 * static_cast<std::int64_t>(n));
  const auto bx = binomial(n, x);
  const auto by = binomial(n, y);
  const Rational half(1, 2);
  const Rational weights[] = {half, half};
  const DiscreteDistribution parts[] = {scale(convolve(bx, bx), two_n), scale(convolve(by, by), two_n)};
  return {scale(convolve(bx, by), two_n), mixture(weights, parts), n, 2, {x, y}};
}

RasaPair generalized_pair(unsigned n, std::span<const Rational> xs) {
  require_parameters(n, xs, "generalized_pair");
  const Rational mn(static_cast<std::int64_t>(xs.size()) * n);
  auto [sum, mix] = unscaled_pair(n, xs);
  return {scale(sum, mn), scale(mix, mn), n, static_cast<unsigned>(xs.size()), {xs.begin(), xs.end()}};
}

CxVerdict verify_theorem_main(unsigned n, const Rational& x, const Rational& y) {
  if (n == 0) throw DistributionError("verify_theorem_main: n must be positive");
  require_unit(x, "verify_theorem_main");
  require_unit(y, "verify_theorem_main");
  const auto bx = binomial(n, x);
  const auto by = binomial(n, y);
  const Rational half(1, 2);
  const Rational weights[] = {half, half};
  const DiscreteDistribution parts[] = {convolve(bx, bx), convolve(by, by)};
  return cx_compare_oracle(convolve(bx, by), mixture(weights, parts));
}

DiscreteDistribution poisson_binomial(std::span<const Rational> ps) {
  if (ps.empty()) throw DistributionError("poisson_binomial: empty parameter list");
  DiscreteDistribution out = bernoulli(ps.front());
  for (std::size_t i = 1; i < ps.size(); ++i) out = convolve(out, bernoulli(ps[i]));
  return out;
}

CxVerdict verify_hoeffding(std::span<const Rational> ps) {
  const auto n = static_cast<unsigned>(ps.size());
  return cx_compare_oracle(poisson_binomial(ps), binomial(n, average(ps)));
}

std::string PsiPattern::pattern_string() const {
  std::string s;
  for (int sign : pattern) s += sign > 0 ? '+' : '-';
  return s;
}

PsiPattern psi_sign_pattern(unsigned n, std::span<const Rational> xs) {
  require_parameters(n, xs, "psi_sign_pattern");
  if (std::all_of(xs.begin(), xs.end(), [&](const Rational& x) { return x == xs.front(); })) {
    throw DegenerateInputError("psi_sign_pattern: all parameters equal, psi vanishes identically");
  }
  const unsigned mn = static_cast<unsigned>(xs.size()) * n;
  const Rational m(static_cast<std::int64_t>(xs.size()));
  const Rational xbar = average(xs);

  PsiPattern out;
  out.values.reserve(mn + 1);
  for (unsigned k = 0; k <= mn; ++k) {
    Rational spread;
    for (const auto& x : xs) spread += x.pow(k) * (Rational(1) - x).pow(mn - k);
    out.values.push_back(spread / m - xbar.pow(k) * (Rational(1) - xbar).pow(mn - k));
  }
  for (const auto& v : out.values) {
    if (!v.is_zero()) out.pattern.push_back(v.sign());
  }
  out.change_count = sign_changes(out.values);
  return out;
}

GeneralizedVerdict verify_generalized(unsigned n, std::span<const Rational> xs) {
  require_parameters(n, xs, "verify_generalized");
  const auto [sum, mix] = unscaled_pair(n, xs);
  const auto target = binomial(static_cast<unsigned>(xs.size()) * n, average(xs));
  return {cx_compare_oracle(sum, target), cx_compare_oracle(target, mix), cx_compare_oracle(sum, mix)};
}

std::vector<Rational> unit_interval_grid(unsigned bound) {
  std::vector<Rational> grid;
  for (unsigned q = 1; q <= std::max(bound, 1U); ++q) {
    for (unsigned p = 0; p <= q; ++p) grid.emplace_back(p, q);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

std::vector<std::vector<Rational>> sorted_tuples(std::span<const Rational> values, unsigned m) {
  std::vector<std::vector<Rational>> out;
  if (m == 0 || values.empty()) return out;
  std::vector<std::size_t> idx(m, 0);
  while (true) {
    std::vector<Rational> tuple;
    tuple.reserve(m);
    for (auto i : idx) tuple.push_back(values[i]);
    out.push_back(std::move(tuple));
    // advance the rightmost index that can still grow, then flatten to its right
    std::size_t pos = m;
    while (pos > 0 && idx[pos - 1] + 1 == values.size()) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t k = pos; k < m; ++k) idx[k] = idx[pos - 1];
  }
  return out;
}

void to_json(nlohmann::json& j, const PsiPattern& p) {
  nlohmann::json values = nlohmann::json::array();
  for (const auto& v : p.values) values.push_back(v.str());
  j = {{"values", std::move(values)}, {"pattern", p.pattern_string()}, {"change_count", p.change_count}};
}

void to_json(nlohmann::json& j, const GeneralizedVerdict& v) {
  j = {{"a", v.sum_vs_binomial}, {"b", v.binomial_vs_mixture}, {"c", v.sum_vs_mixture}, {"all_hold", v.all_hold()}};
}

}  // namespace cxorder
