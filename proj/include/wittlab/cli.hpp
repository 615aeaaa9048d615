#pragma once

// Command-line front end. Everything except main() lives here so the tests
// can drive it directly.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wittlab/curves.hpp"

namespace wittlab::cli {

using nlohmann::json;

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kInvalid = 2, kResourceCap = 3 };

/// {"field_degree": k, "family": "general|nf|r|rres|s|explicit", "params": {...}, "quadrics": [...]}
struct CurveSpec {
  int field_degree = 1;
  std::string family;
  std::optional<FamilyGeneral> general;
  std::optional<FamilyNF> nf;
  std::optional<FamilyR> r;
  std::optional<FamilyRres> rres;
  std::optional<FamilyS> s;
  std::optional<CurveModel> explicit_curve;

  CurveModel curve() const;
  /// R-shaped reading (r, or s through b6 = b3^2).
  std::optional<FamilyR> as_r() const;
};

/// Throws ParseError / ValidationError. `default_degree` is used when the
/// document has no "field_degree".
CurveSpec parse_curve_spec(const json& doc, std::optional<int> default_degree = std::nullopt);

json report_invariants(const CurveSpec& spec);
json report_zeta(const CurveSpec& spec, int m_max, int workers);
json report_aut(const CurveSpec& spec);
json report_quotients(const CurveSpec& spec, int workers);
json report_reduce(const CurveSpec& spec);

/// Parameter names of a scannable family, in column order.
std::vector<std::string> family_params(const std::string& family);

struct ScanOptions {
  std::string family;
  int field_degree = 2;
  int n_max = 4;
  int workers = 1;
  std::vector<std::string> where;
  bool timing = false;
  double budget = 1e10;
};

/// Tuples of the grid in lexicographic order of bits, after the filters.
std::vector<std::vector<std::uint32_t>> scan_grid(const ScanOptions& opts);
std::string scan_header(const ScanOptions& opts);
/// One CSV line (no newline) for one tuple.
std::string scan_row(const ScanOptions& opts, const std::vector<std::uint32_t>& tuple);
/// Point visits for the tuples still to compute; compared against the budget.
double scan_cost(const ScanOptions& opts, std::size_t tuples);

/// Writes the full CSV for the grid. `previous` is the content of an earlier,
/// possibly interrupted, run whose complete rows are reused verbatim.
void run_scan(const ScanOptions& opts, const std::optional<std::string>& previous, std::ostream& out);

/// argv-style entry point; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wittlab::cli
