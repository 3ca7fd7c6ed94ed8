#ifndef QMC_CLI_HPP
#define QMC_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qmc/json_io.hpp"

namespace qmc {

/// Inclusive lo:hi:count; a bare value is lo = hi, count = 1.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;

  std::vector<double> values() const;
  bool operator==(const Range&) const = default;
};

Range parse_range(const std::string& text);
std::string format_range(const Range& r);

struct RunConfig {
  std::string command;
  Range beta{0.5, 0.5, 1};
  /// When set, the grid runs over theta and beta = ln(theta)/2.
  std::optional<Range> theta;
  Range J{1.0, 1.0, 1};
  int n = 2;
  int n_max = 50;
  bool all_solutions = false;
  double perturb = 0.0;
  std::uint64_t seed = 0;
  int random_seeds = 100;
  bool cross_check = false;
  bool oracle = true;
  std::string placement = "n";
  double tol = 1e-10;
  double oracle_tol = 1e-9;
  int diagonal_cap = 15;
  int threads = 0;
  std::string format;
  std::string out;

  /// beta values of the grid, from whichever axis was given.
  std::vector<double> betas() const;
  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> c = {"phase-scan", "solve-boundary", "verify", "expectation", "witness"};
  return c;
}

void to_json(Json& j, const Range& r);
void from_json(const Json& j, Range& r);
void to_json(Json& j, const RunConfig& c);
void from_json(const Json& j, RunConfig& c);

RunConfig load_config(const std::string& path);

enum ExitCode { kExitOk = 0, kExitUsage = 1, kExitVerification = 2 };

/// Runs one command. Artifacts go to config.out, or to `out` when unset.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Report text only; throws on usage errors. Sets `passed` to false on a failed check.
std::string render(const RunConfig& config, bool& passed);

}  // namespace qmc

#endif  // QMC_CLI_HPP
