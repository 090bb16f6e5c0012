#include "cxorder/cx_order.hpp"

#include <algorithm>

#include "cxorder/distribution_io.hpp"

namespace cxorder {

namespace {

// F_rhs - F_lhs is constant on (left, right].
struct Segment {
  Rational left;
  Rational right;
  Rational value;
};

std::vector<Rational> merged_grid(const DiscreteDistribution& lhs, const DiscreteDistribution& rhs,
                                  std::span<const Rational> extra = {}) {
  std::vector<Rational> grid = lhs.support();
  const auto r = rhs.support();
  grid.insert(grid.end(), r.begin(), r.end());
  grid.insert(grid.end(), extra.begin(), extra.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

std::vector<Segment> difference_segments(const DiscreteDistribution& lhs, const DiscreteDistribution& rhs,
                                         const std::vector<Rational>& grid) {
  std::vector<Segment> segments;
  if (grid.size() < 2) return segments;
  segments.reserve(grid.size() - 1);
  // Running P(X < grid[i+1]) via P(X <= grid[i]).
  Rational f_lhs = cdf(lhs, grid.front());
  Rational f_rhs = cdf(rhs, grid.front());
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    f_lhs += lhs.mass_at(grid[i]);
    f_rhs += rhs.mass_at(grid[i]);
    segments.push_back({grid[i], grid[i + 1], f_rhs - f_lhs});
  }
  return segments;
}

std::vector<Rational> sign_change_points_of(const std::vector<Segment>& segments) {
  std::vector<Rational> points;
  int current = 0;
  const Rational* last_right = nullptr;
  for (const auto& seg : segments) {
    const int s = seg.value.sign();
    if (s == 0) continue;
    if (current != 0 && s != current) points.push_back(*last_right);
    current = s;
    last_right = &seg.right;
  }
  return points;
}

void require_concentrated(const DiscreteDistribution& d, const Rational& a, const Rational& b, const char* side) {
  if (d.min_support() < a || d.max_support() > b) {
    throw PreconditionError(std::string(side) + " measure is not concentrated on [" + a.str() + ", " + b.str() + "]");
  }
}

void require_interval(const DiscreteDistribution& lhs, const DiscreteDistribution& rhs, const Rational& a,
                      const Rational& b) {
  if (!(a < b)) throw PreconditionError("interval [" + a.str() + ", " + b.str() + "] is empty");
  require_concentrated(lhs, a, b, "lhs");
  require_concentrated(rhs, a, b, "rhs");
  if (cdf(lhs, a) != cdf(rhs, a)) throw PreconditionError("F_lhs(a) != F_rhs(a)");
}

nlohmann::json optional_json(const std::optional<Rational>& r) {
  return r ? to_json(*r) : nlohmann::json(nullptr);
}

nlohmann::json rationals_json(const std::vector<Rational>& values) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& v : values) out.push_back(v.str());
  return out;
}

}  // namespace

int sign_changes(std::span<const Rational> values) {
  int changes = 0;
  int current = 0;
  for (const auto& v : values) {
    const int s = v.sign();
    if (s == 0) continue;
    if (current != 0 && s != current) ++changes;
    current = s;
  }
  return changes;
}

CxVerdict cx_compare_oracle(const DiscreteDistribution& lhs, const DiscreteDistribution& rhs) {
  CxVerdict v;
  v.mean_gap = mean(rhs) - mean(lhs);
  v.means_equal = v.mean_gap.is_zero();
  if (!v.means_equal) return v;
  for (const auto& t : merged_grid(lhs, rhs)) {
    if (stop_loss(lhs, t) > stop_loss(rhs, t)) {
      v.witness = t;
      return v;
    }
  }
  v.holds = true;
  return v;
}

OhlinReport ohlin_check(const DiscreteDistribution& lhs, const DiscreteDistribution& rhs) {
  OhlinReport report;
  const auto segments = difference_segments(lhs, rhs, merged_grid(lhs, rhs));
  report.identical = std::all_of(segments.begin(), segments.end(), [](const Segment& s) { return s.value.is_zero(); });
  if (report.identical) {
    report.applies = true;
    return report;
  }
  if (mean(lhs) != mean(rhs)) return report;

  // F_lhs - F_rhs = -value: want value >= 0 everywhere before value <= 0.
  bool seen_negative = false;
  const Rational* crossing = nullptr;
  for (const auto& seg : segments) {
    const int s = seg.value.sign();
    if (s < 0) {
      seen_negative = true;
    } else if (s > 0) {
      if (seen_negative) return report;
      crossing = &seg.right;
    }
  }
  report.applies = true;
  if (crossing != nullptr) report.crossing = *crossing;
  return report;
}

std::vector<Rational> crossing_points(const StepCdf& lhs, const StepCdf& rhs) {
  const auto& l = lhs.distribution();
  const auto& r = rhs.distribution();
  return sign_change_points_of(difference_segments(l, r, merged_grid(l, r)));
}

LevinSteckinResult levin_steckin_check(const StepCdf& lhs, const StepCdf& rhs, const Rational& a, const Rational& b) {
  const auto& l = lhs.distribution();
  const auto& r = rhs.distribution();
  require_interval(l, r, a, b);

  LevinSteckinResult result;
  result.endpoints_equal = lhs.right_limit(b) == rhs.right_limit(b);

  const Rational ends[] = {a, b};
  const auto grid = merged_grid(l, r, ends);
  // Integrals of F_lhs and F_rhs from a, accumulated segment by segment.
  Rational int_lhs;
  Rational int_rhs;
  Rational f_lhs = cdf(l, a);
  Rational f_rhs = cdf(r, a);
  result.partial_integrals_dominated = true;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    f_lhs += l.mass_at(grid[i]);
    f_rhs += r.mass_at(grid[i]);
    const Rational width = grid[i + 1] - grid[i];
    int_lhs += f_lhs * width;
    int_rhs += f_rhs * width;
    const bool interior = grid[i + 1] < b;
    if (interior && int_lhs > int_rhs && result.partial_integrals_dominated) {
      result.partial_integrals_dominated = false;
      result.first_violation = grid[i + 1];
    }
  }
  result.integrals_equal = int_lhs == int_rhs;
  return result;
}

SzostokReport szostok_decision(const StepCdf& lhs, const StepCdf& rhs, const Rational& a, const Rational& b) {
  const auto& l = lhs.distribution();
  const auto& r = rhs.distribution();
  require_interval(l, r, a, b);
  if (lhs.right_limit(b) != rhs.right_limit(b)) throw PreconditionError("F_lhs(b) != F_rhs(b)");

  const Rational ends[] = {a, b};
  const auto segments = difference_segments(l, r, merged_grid(l, r, ends));
  Rational total;
  for (const auto& seg : segments) total += seg.value * (seg.right - seg.left);
  if (!total.is_zero()) throw PreconditionError("integral of F_rhs - F_lhs over [a,b] is " + total.str() + ", not 0");

  SzostokReport report;
  report.sign_change_points = sign_change_points_of(segments);
  report.areas.emplace_back();
  int current = 0;
  for (const auto& seg : segments) {
    const int s = seg.value.sign();
    if (s == 0) continue;
    if (current == 0) report.first_segment_ok = s > 0;
    if (current != 0 && s != current) report.areas.emplace_back();
    current = s;
    report.areas.back() += seg.value.abs() * (seg.right - seg.left);
  }
  if (current == 0) report.first_segment_ok = true;

  const std::size_t m = report.sign_change_points.size();
  report.parity_ok = m % 2 == 1 || m == 0;

  report.partial_sums_ok = true;
  Rational even_sum;
  Rational odd_sum;
  for (std::size_t j = 1; 2 * j + 1 <= m; ++j) {
    even_sum += report.areas[2 * j - 2];
    odd_sum += report.areas[2 * j - 1];
    const bool ok = even_sum >= odd_sum;
    report.partial_sums.push_back({even_sum, odd_sum, ok});
    report.partial_sums_ok = report.partial_sums_ok && ok;
  }
  report.decision = report.first_segment_ok && report.parity_ok && report.partial_sums_ok;
  return report;
}

void to_json(nlohmann::json& j, const CxVerdict& v) {
  j = {{"holds", v.holds},
       {"means_equal", v.means_equal},
       {"witness", optional_json(v.witness)},
       {"mean_gap", v.mean_gap.str()}};
}

void to_json(nlohmann::json& j, const OhlinReport& r) {
  j = {{"applies", r.applies}, {"crossing", optional_json(r.crossing)}, {"identical", r.identical}};
}

void to_json(nlohmann::json& j, const LevinSteckinResult& r) {
  j = {{"holds", r.holds()},
       {"endpoints_equal", r.endpoints_equal},
       {"integrals_equal", r.integrals_equal},
       {"partial_integrals_dominated", r.partial_integrals_dominated},
       {"first_violation", optional_json(r.first_violation)}};
}

void to_json(nlohmann::json& j, const SzostokReport& r) {
  nlohmann::json chain = nlohmann::json::array();
  for (const auto& c : r.partial_sums) {
    chain.push_back({{"even_sum", c.even_sum.str()}, {"odd_sum", c.odd_sum.str()}, {"ok", c.ok}});
  }
  j = {{"sign_change_points", rationals_json(r.sign_change_points)},
       {"areas", rationals_json(r.areas)},
       {"parity_ok", r.parity_ok},
       {"partial_sums_ok", r.partial_sums_ok},
       {"first_segment_ok", r.first_segment_ok},
       {"partial_sums", std::move(chain)},
       {"decision", r.decision}};
}

}  // namespace cxorder
