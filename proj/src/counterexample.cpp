#include "cxorder/counterexample.hpp"

#include "cxorder/distribution_io.hpp"

namespace cxorder {

namespace {

DiscreteDistribution two_point(std::int64_t a, std::int64_t b) {
  return DiscreteDistribution::from_atoms({{Rational(a), Rational(1, 2)}, {Rational(b), Rational(1, 2)}});
}

std::string join(const std::vector<Rational>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + values[i].str();
  return s;
}

void expect(bool condition, const std::string& what) {
  if (!condition) throw CounterexampleMismatch("counterexample: " + what);
}

}  // namespace

std::pair<DiscreteDistribution, DiscreteDistribution> build_counterexample() {
  const auto x = two_point(1, 3);
  const auto y = two_point(0, 4);
  const Rational half(1, 2);
  const Rational weights[] = {half, half};
  const DiscreteDistribution parts[] = {convolve(x, x), convolve(y, y)};
  return {convolve(x, y), mixture(weights, parts)};
}

CounterexampleReport analyze_counterexample() {
  auto [lhs, rhs] = build_counterexample();
  const StepCdf f_lhs(lhs);
  const StepCdf f_rhs(rhs);
  const Rational a(0);
  const Rational b(8);

  auto crossings = crossing_points(f_lhs, f_rhs);
  auto szostok = szostok_decision(f_lhs, f_rhs, a, b);
  auto levin = levin_steckin_check(f_lhs, f_rhs, a, b);
  auto oracle = cx_compare_oracle(lhs, rhs);
  expect(oracle.witness.has_value(), "oracle produced no witness");

  auto witness = ConvexTestFunction::angle(*oracle.witness);
  Rational e_lhs = expectation(lhs, witness);
  Rational e_rhs = expectation(rhs, witness);

  const Rational q(1, 4);
  const Rational e(1, 8);
  expect(lhs == DiscreteDistribution::from_atoms({{1, q}, {3, q}, {5, q}, {7, q}}), "unexpected law of X+Y");
  expect(rhs == DiscreteDistribution::from_atoms({{0, e}, {2, e}, {4, Rational(1, 2)}, {6, e}, {8, e}}),
         "unexpected mixture law");
  expect(crossings == std::vector<Rational>{1, 4, 7}, "crossing points " + join(crossings) + ", expected 1,4,7");
  expect(szostok.areas == std::vector<Rational>{e, Rational(3, 8), Rational(3, 8), e},
         "areas " + join(szostok.areas) + ", expected 1/8,3/8,3/8,1/8");
  expect(!szostok.decision, "sign-change lemma accepted the pair");
  expect(!levin.holds(), "Levin-Steckin conditions accepted the pair");
  expect(!oracle.holds && oracle.means_equal, "oracle accepted the pair");
  expect(*oracle.witness == Rational(4), "witness " + oracle.witness->str() + ", expected 4");
  expect(e_lhs == Rational(1) && e_rhs == Rational(3, 4),
         "witness expectations " + e_lhs.str() + " vs " + e_rhs.str() + ", expected 1 vs 3/4");

  CounterexampleReport report{std::move(lhs),  std::move(rhs),    std::move(crossings), szostok.areas,
                              szostok.decision, szostok,          std::move(levin),     std::move(oracle),
                              std::move(witness), std::move(e_lhs), std::move(e_rhs)};
  return report;
}

void to_json(nlohmann::json& j, const CounterexampleReport& r) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : r.sign_change_points) points.push_back(p.str());
  nlohmann::json areas = nlohmann::json::array();
  for (const auto& a : r.areas) areas.push_back(a.str());
  j = {{"lhs", to_json(r.lhs)},
       {"rhs", to_json(r.rhs)},
       {"sign_change_points", std::move(points)},
       {"areas", std::move(areas)},
       {"szostok_decision", r.szostok_decision},
       {"szostok", r.szostok},
       {"levin_steckin", r.levin_steckin},
       {"oracle_verdict", r.oracle_verdict},
       {"holds", r.oracle_verdict.holds},
       {"witness_function", r.witness_function},
       {"witness_lhs_expectation", r.witness_lhs_expectation.str()},
       {"witness_rhs_expectation", r.witness_rhs_expectation.str()}};
}

std::string to_csv(const CounterexampleReport& r) {
  auto quoted = [](const std::string& s) { return "\"" + s + "\""; };
  auto atoms = [](const DiscreteDistribution& d) {
    std::string s;
    for (const auto& a : d.atoms()) s += (s.empty() ? "" : ";") + a.support.str() + ":" + a.mass.str();
    return s;
  };
  std::string out = "field,value\n";
  out += "lhs," + quoted(atoms(r.lhs)) + "\n";
  out += "rhs," + quoted(atoms(r.rhs)) + "\n";
  out += "sign_change_points," + quoted(join(r.sign_change_points)) + "\n";
  out += "areas," + quoted(join(r.areas)) + "\n";
  out += std::string("szostok_decision,") + (r.szostok_decision ? "true" : "false") + "\n";
  out += std::string("levin_steckin,") + (r.levin_steckin.holds() ? "true" : "false") + "\n";
  out += std::string("holds,") + (r.oracle_verdict.holds ? "true" : "false") + "\n";
  out += "witness," + (r.oracle_verdict.witness ? r.oracle_verdict.witness->str() : std::string()) + "\n";
  out += "witness_function," + quoted(r.witness_function.name()) + "\n";
  out += "witness_lhs_expectation," + r.witness_lhs_expectation.str() + "\n";
  out += "witness_rhs_expectation," + r.witness_rhs_expectation.str() + "\n";
  return out;
}

}  // namespace cxorder
