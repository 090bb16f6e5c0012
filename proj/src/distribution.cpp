#include "cxorder/distribution.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace cxorder {

namespace {

void require_probability(const Rational& p, const char* what) {
  if (p < Rational(0) || p > Rational(1)) {
    throw DistributionError(std::string(what) + ": parameter " + p.str() + " outside [0,1]");
  }
}

DiscreteDistribution from_map(const std::map<Rational, Rational>& masses) {
  std::vector<Atom> atoms;
  atoms.reserve(masses.size());
  for (const auto& [s, m] : masses) atoms.push_back({s, m});
  return DiscreteDistribution::from_atoms(std::move(atoms));
}

}  // namespace

DiscreteDistribution DiscreteDistribution::from_atoms(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.support < b.support; });
  std::vector<Atom> merged;
  merged.reserve(atoms.size());
  Rational total;
  for (auto& atom : atoms) {
    if (atom.mass.sign() < 0) throw DistributionError("negative mass " + atom.mass.str() + " at " + atom.support.str());
    total += atom.mass;
    if (!merged.empty() && merged.back().support == atom.support) {
      merged.back().mass += atom.mass;
    } else {
      merged.push_back(std::move(atom));
    }
  }
  std::erase_if(merged, [](const Atom& a) { return a.mass.is_zero(); });
  if (total != Rational(1)) throw DistributionError("masses sum to " + total.str() + ", not 1");
  return DiscreteDistribution(std::move(merged));
}

std::vector<Rational> DiscreteDistribution::support() const {
  std::vector<Rational> out;
  out.reserve(atoms_.size());
  for (const auto& a : atoms_) out.push_back(a.support);
  return out;
}

Rational DiscreteDistribution::mass_at(const Rational& x) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                             [](const Atom& a, const Rational& v) { return a.support < v; });
  if (it != atoms_.end() && it->support == x) return it->mass;
  return Rational(0);
}

DiscreteDistribution dirac(const Rational& c) { return DiscreteDistribution::from_atoms({{c, Rational(1)}}); }

DiscreteDistribution bernoulli(const Rational& p) {
  require_probability(p, "bernoulli");
  return DiscreteDistribution::from_atoms({{Rational(0), Rational(1) - p}, {Rational(1), p}});
}

DiscreteDistribution binomial(unsigned n, const Rational& p) {
  if (n == 0) throw DistributionError("binomial: n must be positive");
  require_probability(p, "binomial");
  const Rational q = Rational(1) - p;
  std::vector<Atom> atoms;
  atoms.reserve(n + 1);
  for (unsigned k = 0; k <= n; ++k) {
    atoms.push_back({Rational(k), Rational::binomial(n, k) * p.pow(k) * q.pow(n - k)});
  }
  return DiscreteDistribution::from_atoms(std::move(atoms));
}

DiscreteDistribution convolve(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  std::map<Rational, Rational> masses;
  for (const auto& x : a.atoms()) {
    for (const auto& y : b.atoms()) masses[x.support + y.support] += x.mass * y.mass;
  }
  return from_map(masses);
}

DiscreteDistribution convolve_power(const DiscreteDistribution& d, unsigned count) {
  if (count == 0) throw DistributionError("convolve_power: count must be positive");
  DiscreteDistribution out = d;
  for (unsigned i = 1; i < count; ++i) out = convolve(out, d);
  return out;
}

DiscreteDistribution mixture(std::span<const Rational> weights, std::span<const DiscreteDistribution> parts) {
  if (weights.empty() || weights.size() != parts.size()) {
    throw DistributionError("mixture: need equally many weights and parts (got " + std::to_string(weights.size()) +
                            " and " + std::to_string(parts.size()) + ")");
  }
  Rational total;
  for (const auto& w : weights) {
    if (w.sign() <= 0) throw DistributionError("mixture: weight " + w.str() + " is not positive");
    total += w;
  }
  if (total != Rational(1)) throw DistributionError("mixture: weights sum to " + total.str());

  std::map<Rational, Rational> masses;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (const auto& atom : parts[i].atoms()) masses[atom.support] += weights[i] * atom.mass;
  }
  return from_map(masses);
}

DiscreteDistribution scale(const DiscreteDistribution& d, const Rational& a) {
  if (a.sign() <= 0) throw DistributionError("scale: factor " + a.str() + " must be positive");
  std::vector<Atom> atoms(d.atoms().begin(), d.atoms().end());
  for (auto& atom : atoms) atom.support /= a;
  return DiscreteDistribution::from_atoms(std::move(atoms));
}

Rational mean(const DiscreteDistribution& d) {
  Rational m;
  for (const auto& atom : d.atoms()) m += atom.support * atom.mass;
  return m;
}

Rational cdf(const DiscreteDistribution& d, const Rational& x) {
  Rational f;
  for (const auto& atom : d.atoms()) {
    if (!(atom.support < x)) break;
    f += atom.mass;
  }
  return f;
}

Rational stop_loss(const DiscreteDistribution& d, const Rational& t) {
  Rational s;
  for (const auto& atom : d.atoms()) {
    if (atom.support > t) s += (atom.support - t) * atom.mass;
  }
  return s;
}

Rational StepCdf::right_limit(const Rational& x) const {
  Rational f;
  for (const auto& atom : dist_.atoms()) {
    if (atom.support > x) break;
    f += atom.mass;
  }
  return f;
}

std::string describe(const DiscreteDistribution& d, int digits) {
  std::ostringstream os;
  for (const auto& atom : d.atoms()) {
    os << atom.support << '\t' << atom.mass << "\t(" << atom.mass.to_decimal(digits) << ")\n";
  }
  return os.str();
}

}  // namespace cxorder
