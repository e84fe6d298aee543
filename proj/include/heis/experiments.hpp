#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace heis {

using Json = nlohmann::ordered_json;

/// Invalid configuration; `field` names the offending key and `line` is the
/// 1-based line in the source file when known (0 otherwise).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message, int line = 0);
  const std::string& field() const { return field_; }
  int line() const { return line_; }
  const std::string& message() const { return message_; }

 private:
  std::string field_, message_;
  int line_;
};

struct Tolerances {
  double parametrix = 1e-8;
  double projection = 1e-8;
  double szego = 1e-10;
  double rumin_square = 1e-10;
  double rumin_projection = 1e-8;
  double trace = 1e-6;
  double sandbox = 1e-9;
  double hodge = 1e-10;
  double log_coefficient = 0.05;
  /// Thresholds: a dip is σ_min below `dip`; elsewhere σ_min must exceed `floor`.
  double dip = 1e-6;
  double floor = 1e-3;
  bool operator==(const Tolerances&) const = default;
};

struct ExperimentConfig {
  int n = 1;
  int N = 24;
  std::string convention = "section5";
  unsigned long long seed = 7;
  double tol_scale = 1.0;
  std::vector<std::string> suites = {"thresholds", "identities", "residues", "sandbox"};

  /// λ grid; unset ends mean ∓(n/2 + k_max)·|c|.
  std::optional<double> lambda_min, lambda_max;
  double lambda_step = 0.01;
  int k_max = 3;
  /// Thresholds must be matched within this distance.
  double match_window = 0.01;

  /// Bidegrees for the Kohn sweeps; empty means all 0 <= p, q <= n.
  std::vector<std::pair<int, int>> pq;
  /// Szegő levels k.
  std::vector<int> levels = {0, 1, 2, 3};
  /// Truncations for the form-valued suites; unset picks a per-n default.
  std::optional<int> kohn_N, rumin_N;
  int hodge_N = 8;
  int sandbox_complexes = 50;
  int trace_pairs = 50;
  bool trace_refinement = true;
  bool log_family = true;

  Tolerances tol;
  std::string out;
  /// Fault injection: "" or "laplacian_weight".
  std::string corrupt;

  bool operator==(const ExperimentConfig&) const = default;

  double scaled(double t) const { return t * tol_scale; }
  int kohn_truncation() const;
  int rumin_truncation() const;
  std::pair<double, double> lambda_range() const;
};

inline const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> s = {"thresholds", "identities", "residues", "sandbox", "rumin"};
  return s;
}

/// Throws ConfigError on the first violated invariant.
void validate(const ExperimentConfig& cfg);

Json to_json(const ExperimentConfig& cfg);
/// Strict: unknown keys and wrong types are errors. Missing keys keep defaults.
ExperimentConfig config_from_json(const Json& j, const std::vector<std::pair<std::string, int>>& lines = {});

/// JSON file, or plain `key = value` lines with `#` comments; values are
/// parsed as JSON literals and fall back to bare strings.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  /// "<=", ">=" or "==".
  std::string relation = "<=";
  bool passed = false;
  /// Informational rows do not affect the suite verdict.
  bool gating = true;
  std::string note;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<Json> rows;
};

struct SuiteResult {
  std::string name;
  std::vector<CheckResult> checks;
  std::vector<Table> tables;
  bool passed() const;
  CheckResult& add(std::string name, double value, double tolerance, std::string relation = "<=", bool gating = true,
                   std::string note = {});
};

struct Report {
  ExperimentConfig config;
  std::vector<SuiteResult> suites;
  bool passed() const;
  /// Failing gating checks as "suite/check".
  std::vector<std::string> failures() const;
};

Json to_json(const CheckResult& c);
Json to_json(const Table& t);
Json to_json(const SuiteResult& s);
Json to_json(const Report& r);
std::string to_csv(const Table& t);

SuiteResult run_thresholds(const ExperimentConfig& cfg);
SuiteResult run_identities(const ExperimentConfig& cfg);
SuiteResult run_residues(const ExperimentConfig& cfg);
SuiteResult run_sandbox(const ExperimentConfig& cfg);
SuiteResult run_rumin(const ExperimentConfig& cfg);

/// Runs cfg.suites in order.
Report run_report(const ExperimentConfig& cfg);

}  // namespace heis
