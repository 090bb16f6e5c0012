#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "cxorder/distribution.hpp"

namespace cxorder {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Text form: one `<support> <mass>` pair per line, rationals as `p/q` or
// integers, `#` starts a comment, atoms in any order.
DiscreteDistribution parse_distribution_text(std::string_view text);
std::string format_distribution_text(const DiscreteDistribution& d);

// JSON form: { "atoms": [["s", "m"], ...] } with rationals as strings.
nlohmann::json to_json(const Rational& r);
Rational rational_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DiscreteDistribution& d);
DiscreteDistribution distribution_from_json(const nlohmann::json& j);

/// Reads either form; JSON is detected by a leading `{`.
DiscreteDistribution parse_distribution(std::string_view content);
DiscreteDistribution read_distribution_file(const std::filesystem::path& path);

}  // namespace cxorder
