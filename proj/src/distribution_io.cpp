#include "cxorder/distribution_io.hpp"

#include <fstream>
#include <sstream>

namespace cxorder {

DiscreteDistribution parse_distribution_text(std::string_view text) {
  std::vector<Atom> atoms;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string s, m, extra;
    if (!(fields >> s)) continue;
    if (!(fields >> m) || (fields >> extra)) {
      throw ParseError("line " + std::to_string(lineno) + ": expected '<support> <mass>'");
    }
    try {
      atoms.push_back({Rational::parse(s), Rational::parse(m)});
    } catch (const std::invalid_argument& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (atoms.empty()) throw ParseError("no atoms");
  try {
    return DiscreteDistribution::from_atoms(std::move(atoms));
  } catch (const DistributionError& e) {
    throw ParseError(e.what());
  }
}

std::string format_distribution_text(const DiscreteDistribution& d) {
  std::string out;
  for (const auto& atom : d.atoms()) out += atom.support.str() + " " + atom.mass.str() + "\n";
  return out;
}

nlohmann::json to_json(const Rational& r) { return r.str(); }

Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw ParseError("rational must be a string or an integer, got " + j.dump());
}

nlohmann::json to_json(const DiscreteDistribution& d) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& atom : d.atoms()) atoms.push_back({atom.support.str(), atom.mass.str()});
  return {{"atoms", std::move(atoms)}};
}

DiscreteDistribution distribution_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("atoms") || !j["atoms"].is_array()) {
    throw ParseError("expected an object with an \"atoms\" array");
  }
  std::vector<Atom> atoms;
  try {
    for (const auto& pair : j["atoms"]) {
      if (!pair.is_array() || pair.size() != 2) throw ParseError("each atom must be [support, mass]");
      atoms.push_back({rational_from_json(pair[0]), rational_from_json(pair[1])});
    }
    if (atoms.empty()) throw ParseError("no atoms");
    return DiscreteDistribution::from_atoms(std::move(atoms));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

DiscreteDistribution parse_distribution(std::string_view content) {
  const auto first = content.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && content[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(content);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(e.what());
    }
    return distribution_from_json(j);
  }
  return parse_distribution_text(content);
}

DiscreteDistribution read_distribution_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_distribution(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace cxorder
