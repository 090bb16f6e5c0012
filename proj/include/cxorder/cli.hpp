#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cxorder::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitPrecondition = 3;

/// Environment variable naming the default directory for report files when
/// `--out` is not given.
inline constexpr const char* kOutDirEnv = "CXORDER_OUT_DIR";

struct Range {
  unsigned first = 1;
  unsigned last = 1;
};

/// Parses `a..b` or `a`. Throws std::invalid_argument on malformed or empty ranges.
Range parse_range(const std::string& text);

struct RunConfig {
  std::string command;
  Range n{1, 1};
  Range m{2, 2};
  unsigned denominator = 10;
  bool angles = true;
  bool monomials = true;
  unsigned piecewise_linear_count = 5;
  std::string format = "json";
  std::optional<std::filesystem::path> out;
  unsigned jobs = 1;
  std::uint64_t seed = 1;
  bool timing = false;
};

/// Runs the command line `args` (without the program name). Reports go to
/// `out` (or a file), diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cxorder::cli
