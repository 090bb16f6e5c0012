#include "cxorder/cli.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "cxorder/convex_test_function.hpp"
#include "cxorder/counterexample.hpp"
#include "cxorder/cx_order.hpp"
#include "cxorder/distribution_io.hpp"
#include "cxorder/rasa.hpp"

namespace cxorder::cli {

namespace {

using nlohmann::json;

std::string join(const std::vector<Rational>& values, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? sep : "") + values[i].str();
  return s;
}

std::uint64_t draw(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) { return lo + rng() % (hi - lo + 1); }

// Report sink: --out, else $CXORDER_OUT_DIR/<command>.<format>, else stdout.
class Sink {
 public:
  Sink(std::ostream& fallback, const std::optional<std::filesystem::path>& out, const std::string& command,
       const std::string& format)
      : fallback_(fallback) {
    if (out) {
      path_ = *out;
    } else if (const char* dir = std::getenv(kOutDirEnv); dir != nullptr && *dir != '\0') {
      path_ = std::filesystem::path(dir) / (command + "." + format);
    }
  }

  void write(const std::string& text) {
    if (!path_) {
      fallback_ << text;
      return;
    }
    if (path_->has_parent_path()) std::filesystem::create_directories(path_->parent_path());
    std::ofstream file(*path_, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot write " + path_->string());
    file << text;
  }

 private:
  std::ostream& fallback_;
  std::optional<std::filesystem::path> path_;
};

// Runs task(i) for i in [0, count) on `jobs` workers. Results are written by
// index, so the caller's output order never depends on scheduling.
template <class Task>
void parallel_for(std::size_t count, unsigned jobs, Task task) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

// --- verify-rasa ----------------------------------------------------------

struct GridPoint {
  unsigned n;
  unsigned m;
  std::vector<Rational> xs;
};

struct GridRow {
  GeneralizedVerdict verdict;
  Rational min_form;
  std::string min_form_function;
  double wall_ms = 0;

  [[nodiscard]] bool ok() const { return verdict.all_hold() && min_form.sign() >= 0; }
};

Rational average_of(const std::vector<Rational>& values) {
  Rational s;
  for (const auto& v : values) s += v;
  return s / Rational(static_cast<std::int64_t>(values.size()));
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

int cmd_verify_rasa(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto grid = unit_interval_grid(config.denominator);
  std::vector<GridPoint> points;
  for (unsigned n = config.n.first; n <= config.n.last; ++n) {
    for (unsigned m = config.m.first; m <= config.m.last; ++m) {
      for (auto& xs : sorted_tuples(grid, m)) points.push_back({n, m, std::move(xs)});
    }
  }

  TestFamilyOptions family_options;
  family_options.angles = config.angles;
  family_options.monomials = config.monomials;
  family_options.piecewise_linear_count = config.piecewise_linear_count;
  family_options.seed = config.seed;

  std::vector<GridRow> rows(points.size());
  parallel_for(points.size(), config.jobs, [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    const auto& p = points[i];
    GridRow row;
    row.verdict = verify_generalized(p.n, p.xs);
    bool first = true;
    for (const auto& f : builtin_test_family(p.m * p.n, family_options)) {
      Rational value = rasa_form_general(p.n, p.xs, f);
      if (first || value < row.min_form) {
        row.min_form = std::move(value);
        row.min_form_function = f.name();
        first = false;
      }
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    rows[i] = std::move(row);
  });

  bool all_ok = true;
  std::size_t failures = 0;
  for (const auto& row : rows) {
    all_ok = all_ok && row.ok();
    failures += row.ok() ? 0 : 1;
  }
  auto wall = [&](const GridRow& row) {
    if (!config.timing) return std::string();
    std::ostringstream os;
    os.precision(3);
    os << std::fixed << row.wall_ms;
    return os.str();
  };

  std::string text;
  if (config.format == "csv") {
    text = "n,m,xs,verdict_a,verdict_b,verdict_c,min_form,min_form_function,wall_time_ms\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto& p = points[i];
      const auto& r = rows[i];
      text += std::to_string(p.n) + "," + std::to_string(p.m) + "," + join(p.xs, ";") + "," +
              bool_str(r.verdict.sum_vs_binomial.holds) + "," + bool_str(r.verdict.binomial_vs_mixture.holds) + "," +
              bool_str(r.verdict.sum_vs_mixture.holds) + "," + r.min_form.str() + ",\"" + r.min_form_function +
              "\"," + wall(r) + "\n";
    }
  } else {
    json report_rows = json::array();
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto& p = points[i];
      const auto& r = rows[i];
      json xs = json::array();
      for (const auto& x : p.xs) xs.push_back(x.str());
      report_rows.push_back({{"n", p.n},
                             {"m", p.m},
                             {"xs", std::move(xs)},
                             {"verdict_a", r.verdict.sum_vs_binomial.holds},
                             {"verdict_b", r.verdict.binomial_vs_mixture.holds},
                             {"verdict_c", r.verdict.sum_vs_mixture.holds},
                             {"min_form", r.min_form.str()},
                             {"min_form_function", r.min_form_function},
                             {"wall_time_ms", config.timing ? json(r.wall_ms) : json(nullptr)}});
    }
    const json report = {{"command", "verify-rasa"},
                         {"config",
                          {{"n", {config.n.first, config.n.last}},
                           {"m", {config.m.first, config.m.last}},
                           {"denom", config.denominator},
                           {"seed", config.seed},
                           {"angles", config.angles},
                           {"monomials", config.monomials},
                           {"pl_count", config.piecewise_linear_count}}},
                         {"grid_points", points.size()},
                         {"failures", failures},
                         {"all_hold", all_ok},
                         {"rows", std::move(report_rows)}};
    text = report.dump(2) + "\n";
  }
  Sink(out, config.out, "verify-rasa", config.format).write(text);
  if (!all_ok) err << "verify-rasa: " << failures << " grid point(s) failed\n";
  return all_ok ? kExitOk : kExitFailed;
}

// --- cx-compare -----------------------------------------------------------

int cmd_cx_compare(const std::string& file_a, const std::string& file_b, const std::string& method,
                   const RunConfig& config, std::ostream& out, std::ostream& err) {
  DiscreteDistribution lhs = dirac(0);
  DiscreteDistribution rhs = dirac(0);
  try {
    lhs = read_distribution_file(file_a);
    rhs = read_distribution_file(file_b);
  } catch (const ParseError& e) {
    err << "cx-compare: " << e.what() << "\n";
    return kExitInvalid;
  }

  const Rational a = min(lhs.min_support(), rhs.min_support());
  Rational b = max(lhs.max_support(), rhs.max_support());
  if (a == b) b += Rational(1);

  json report;
  bool holds = false;
  try {
    if (method == "oracle") {
      const auto v = cx_compare_oracle(lhs, rhs);
      report = v;
      holds = v.holds;
    } else if (method == "ohlin") {
      if (mean(lhs) != mean(rhs)) throw PreconditionError("ohlin: means differ");
      const auto r = ohlin_check(lhs, rhs);
      report = r;
      holds = r.applies;
    } else if (method == "szostok") {
      const auto r = szostok_decision(StepCdf(lhs), StepCdf(rhs), a, b);
      report = r;
      holds = r.decision;
    } else {
      const auto r = levin_steckin_check(StepCdf(lhs), StepCdf(rhs), a, b);
      report = r;
      holds = r.holds();
    }
  } catch (const PreconditionError& e) {
    err << "cx-compare: precondition not met: " << e.what() << "\n";
    Sink(out, config.out, "cx-compare", "json")
        .write(json{{"method", method}, {"error", e.what()}}.dump(2) + "\n");
    return kExitPrecondition;
  }
  report["method"] = method;
  report["holds"] = holds;
  report["interval"] = {a.str(), b.str()};
  Sink(out, config.out, "cx-compare", "json").write(report.dump(2) + "\n");
  return holds ? kExitOk : kExitFailed;
}

// --- counterexample -------------------------------------------------------

json scan_two_point_pairs(std::size_t trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::size_t violations = 0;
  json first;
  const Rational half(1, 2);
  for (std::size_t t = 0; t < trials; ++t) {
    auto two_point = [&] {
      const auto lo = static_cast<std::int64_t>(draw(rng, 0, 6));
      const auto hi = lo + static_cast<std::int64_t>(draw(rng, 1, 4));
      return DiscreteDistribution::from_atoms({{Rational(lo), half}, {Rational(hi), half}});
    };
    const auto x = two_point();
    const auto y = two_point();
    const Rational weights[] = {half, half};
    const DiscreteDistribution parts[] = {convolve(x, x), convolve(y, y)};
    const auto verdict = cx_compare_oracle(convolve(x, y), mixture(weights, parts));
    if (!verdict.holds) {
      if (violations == 0) first = {{"x", to_json(x)}, {"y", to_json(y)}, {"verdict", verdict}};
      ++violations;
    }
  }
  return {{"trials", trials}, {"seed", seed}, {"violations", violations}, {"first_violation", first}};
}

int cmd_counterexample(const RunConfig& config, std::size_t scan, std::ostream& out, std::ostream& err) {
  CounterexampleReport report = [&] {
    try {
      return analyze_counterexample();
    } catch (const CounterexampleMismatch& e) {
      err << e.what() << "\n";
      throw;
    }
  }();
  std::string text;
  if (config.format == "csv") {
    text = to_csv(report);
    if (scan > 0) {
      const auto s = scan_two_point_pairs(scan, config.seed);
      text += "scan_trials," + std::to_string(scan) + "\nscan_violations," + s["violations"].dump() + "\n";
    }
  } else {
    json j = report;
    if (scan > 0) j["scan"] = scan_two_point_pairs(scan, config.seed);
    text = j.dump(2) + "\n";
  }
  Sink(out, config.out, "counterexample", config.format).write(text);
  return kExitOk;
}

// --- hoeffding ------------------------------------------------------------

int cmd_hoeffding(const std::vector<std::string>& ps_text, std::size_t random_count, unsigned n_max,
                  unsigned denom_max, const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<std::vector<Rational>> instances;
  if (random_count > 0) {
    if (n_max < 1 || denom_max < 2) {
      err << "hoeffding: --n-max must be >= 1 and --denom >= 2\n";
      return kExitInvalid;
    }
    std::mt19937_64 rng(config.seed);
    for (std::size_t t = 0; t < random_count; ++t) {
      const auto n = draw(rng, 1, n_max);
      std::vector<Rational> ps;
      for (std::uint64_t i = 0; i < n; ++i) {
        const auto den = static_cast<std::int64_t>(draw(rng, 2, denom_max));
        ps.emplace_back(static_cast<std::int64_t>(draw(rng, 1, static_cast<std::uint64_t>(den - 1))), den);
      }
      instances.push_back(std::move(ps));
    }
  } else {
    if (ps_text.empty()) {
      err << "hoeffding: give probabilities or --random COUNT\n";
      return kExitInvalid;
    }
    std::vector<Rational> ps;
    try {
      for (const auto& s : ps_text) ps.push_back(Rational::parse(s));
    } catch (const std::invalid_argument& e) {
      err << "hoeffding: " << e.what() << "\n";
      return kExitInvalid;
    }
    for (const auto& p : ps) {
      if (p.sign() <= 0 || p >= Rational(1)) {
        err << "hoeffding: probability " << p << " outside (0,1)\n";
        return kExitInvalid;
      }
    }
    instances.push_back(std::move(ps));
  }

  std::vector<CxVerdict> verdicts(instances.size());
  std::vector<bool> identical(instances.size());
  parallel_for(instances.size(), config.jobs, [&](std::size_t i) {
    verdicts[i] = verify_hoeffding(instances[i]);
    const auto n = static_cast<unsigned>(instances[i].size());
    identical[i] = poisson_binomial(instances[i]) == binomial(n, average_of(instances[i]));
  });

  bool all = true;
  for (const auto& v : verdicts) all = all && v.holds;

  std::string text;
  if (config.format == "csv") {
    text = "index,ps,holds,identical,witness\n";
    for (std::size_t i = 0; i < instances.size(); ++i) {
      text += std::to_string(i) + "," + join(instances[i], ";") + "," + bool_str(verdicts[i].holds) + "," +
              bool_str(identical[i]) + "," + (verdicts[i].witness ? verdicts[i].witness->str() : "") + "\n";
    }
  } else {
    json rows = json::array();
    for (std::size_t i = 0; i < instances.size(); ++i) {
      json ps = json::array();
      for (const auto& p : instances[i]) ps.push_back(p.str());
      rows.push_back({{"ps", std::move(ps)}, {"verdict", verdicts[i]}, {"identical", static_cast<bool>(identical[i])}});
    }
    text = json{{"command", "hoeffding"}, {"seed", config.seed}, {"all_hold", all}, {"rows", std::move(rows)}}.dump(2) +
           "\n";
  }
  Sink(out, config.out, "hoeffding", config.format).write(text);
  return all ? kExitOk : kExitFailed;
}

// --- psi-pattern ----------------------------------------------------------

int cmd_psi_pattern(unsigned n, const std::vector<std::string>& xs_text, const RunConfig& config, std::ostream& out,
                    std::ostream& err) {
  std::vector<Rational> xs;
  PsiPattern pattern;
  try {
    for (const auto& s : xs_text) xs.push_back(Rational::parse(s));
    pattern = psi_sign_pattern(n, xs);
  } catch (const std::invalid_argument& e) {
    err << "psi-pattern: " << e.what() << "\n";
    return kExitInvalid;
  }
  const unsigned mn = static_cast<unsigned>(xs.size()) * n;
  Rational weighted;
  for (unsigned k = 0; k <= mn; ++k) weighted += Rational::binomial(mn, k) * pattern.values[k];
  const bool shape = pattern.change_count == 2 && pattern.values.front().sign() > 0 &&
                     pattern.values.back().sign() > 0 && weighted.is_zero();

  json j = pattern;
  j["n"] = n;
  j["m"] = xs.size();
  j["binomial_weighted_sum"] = weighted.str();
  j["expected_shape"] = shape;
  Sink(out, config.out, "psi-pattern", "json").write(j.dump(2) + "\n");
  return shape ? kExitOk : kExitFailed;
}

void add_common(CLI::App* sub, RunConfig& config, std::string& out_path, bool with_format) {
  sub->add_option("--out", out_path, "Write the report to PATH");
  if (with_format) {
    sub->add_option("--format", config.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  }
  sub->add_option("--jobs", config.jobs, "Worker threads")->check(CLI::Range(1U, 1024U));
  sub->add_option("--seed", config.seed, "Random seed");
}

}  // namespace

Range parse_range(const std::string& text) {
  auto number = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("bad range '" + text + "'");
    }
    return static_cast<unsigned>(std::stoul(s));
  };
  Range r;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    r.first = number(text.substr(0, dots));
    r.last = number(text.substr(dots + 2));
  } else {
    r.first = r.last = number(text);
  }
  if (r.first > r.last) throw std::invalid_argument("empty range '" + text + "'");
  return r;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact convex-order verification for Bernstein-polynomial inequalities", "cxorder"};
  app.require_subcommand(1);

  RunConfig config;
  std::string out_path;
  std::string n_range = "1";
  std::string m_range = "2";
  std::string family = "angles,monomials,pl";

  auto* verify = app.add_subcommand("verify-rasa", "Check the Bernstein form inequality over a parameter grid");
  verify->add_option("--n", n_range, "Degree n or range a..b")->required();
  verify->add_option("--m", m_range, "Number of variables m or range a..b");
  verify->add_option("--denom", config.denominator, "Largest grid denominator");
  verify->add_option("--family", family, "Comma list of angles, monomials, pl");
  verify->add_option("--pl-count", config.piecewise_linear_count, "Random piecewise-linear test functions");
  verify->add_flag("--timing", config.timing, "Record per-row wall time (makes reports nondeterministic)");
  add_common(verify, config, out_path, true);

  std::string file_a;
  std::string file_b;
  std::string method = "oracle";
  auto* compare = app.add_subcommand("cx-compare", "Decide lhs <=_cx rhs for two distribution files");
  compare->add_option("lhs", file_a, "Distribution file")->required();
  compare->add_option("rhs", file_b, "Distribution file")->required();
  compare->add_option("--method", method, "Decision procedure")
      ->check(CLI::IsMember({"oracle", "ohlin", "szostok", "levin-steckin"}));
  add_common(compare, config, out_path, false);

  std::size_t scan = 0;
  bool json_flag = false;
  auto* counter = app.add_subcommand("counterexample", "Reproduce the non-binomial counterexample");
  counter->add_flag("--json", json_flag, "Same as --format json");
  counter->add_option("--scan", scan, "Also scan N random two-point pairs for violations");
  add_common(counter, config, out_path, true);

  std::vector<std::string> ps_text;
  std::size_t random_count = 0;
  unsigned n_max = 8;
  unsigned denom_max = 20;
  auto* hoeffding = app.add_subcommand("hoeffding", "Poisson-binomial against binomial with the mean parameter");
  hoeffding->add_option("ps", ps_text, "Probabilities p_i");
  hoeffding->add_option("--random", random_count, "Number of seeded random instances");
  hoeffding->add_option("--n-max", n_max, "Largest instance length for --random");
  hoeffding->add_option("--denom", denom_max, "Largest denominator for --random");
  add_common(hoeffding, config, out_path, true);

  unsigned psi_n = 1;
  std::vector<std::string> xs_text;
  auto* psi = app.add_subcommand("psi-pattern", "Sign pattern of psi_k for parameters x_1..x_m");
  psi->add_option("--n", psi_n, "Degree n")->required();
  psi->add_option("xs", xs_text, "Parameters x_i")->required();
  add_common(psi, config, out_path, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "cxorder: " << e.what() << "\n";
    return kExitInvalid;
  }

  if (!out_path.empty()) config.out = out_path;
  try {
    if (*verify) {
      config.command = "verify-rasa";
      try {
        config.n = parse_range(n_range);
        config.m = parse_range(m_range);
      } catch (const std::invalid_argument& e) {
        err << "verify-rasa: " << e.what() << "\n";
        return kExitInvalid;
      }
      config.angles = family.find("angles") != std::string::npos;
      config.monomials = family.find("monomials") != std::string::npos;
      if (family.find("pl") == std::string::npos) config.piecewise_linear_count = 0;
      if (config.n.first < 1 || config.m.first < 2 || config.denominator < 2) {
        err << "verify-rasa: need n >= 1, m >= 2, --denom >= 2\n";
        return kExitInvalid;
      }
      if (!config.angles && !config.monomials && config.piecewise_linear_count == 0) {
        err << "verify-rasa: empty test-function family\n";
        return kExitInvalid;
      }
      return cmd_verify_rasa(config, out, err);
    }
    if (*compare) {
      config.command = "cx-compare";
      return cmd_cx_compare(file_a, file_b, method, config, out, err);
    }
    if (*counter) {
      config.command = "counterexample";
      if (json_flag) config.format = "json";
      return cmd_counterexample(config, scan, out, err);
    }
    if (*hoeffding) {
      config.command = "hoeffding";
      return cmd_hoeffding(ps_text, random_count, n_max, denom_max, config, out, err);
    }
    config.command = "psi-pattern";
    return cmd_psi_pattern(psi_n, xs_text, config, out, err);
  } catch (const CounterexampleMismatch&) {
    return kExitFailed;
  } catch (const std::exception& e) {
    err << "cxorder: " << e.what() << "\n";
    return kExitFailed;
  }
}

}  // namespace cxorder::cli
