#pragma once

// The acceptance checks, shared by the test binary and `wittlab verify`.

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace wittlab::acceptance {

struct Result {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0;
  double limit_seconds = 0;
  std::string detail;
};

struct Options {
  int workers = 1;
  /// Emits progress lines; may be empty.
  std::function<void(const std::string&)> log;
};

/// Suite names: cor43, thm41-gf4, hw-golden, prank0, aut-orders, oracle,
/// nf-roundtrip, cross-invariant, all.
std::vector<std::string> suite_names();
/// nullopt for an unknown suite.
std::optional<std::vector<int>> suite_criteria(const std::string& suite);

/// Runs the listed criteria in order; 8 reuses the curves of 1 and 2.
std::vector<Result> run(const std::vector<int>& criteria, const Options& opts);

std::string format_line(const Result& r);

}  // namespace wittlab::acceptance
