// Scenario documents, mode pipelines and report emission for the CLI.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qconstructor/feasibility.hpp"
#include "qconstructor/lineage.hpp"
#include "qconstructor/nogo.hpp"
#include "qconstructor/probabilistic.hpp"

namespace qcon {

enum class ScenarioMode { Feasibility, Replicate, Probabilistic, Nogo };

const char* to_string(ScenarioMode m);
std::optional<ScenarioMode> scenario_mode_from(const std::string& name);

// Parse or validation failure; the CLI maps it to exit code 2.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Scenario {
  std::string name;
  long long dimension = 0;          // N
  long long program_dimension = 0;  // K
  std::vector<AlphabetEntry> alphabet;
  long long blanks = 0;  // n
  std::optional<ScenarioMode> mode;
  double tolerance = kDefaultTol;
  std::uint64_t seed = 0;
  long long trials = 0;
  std::string output_dir = ".";

  bool has_blanks = false;
  bool has_trials = false;
  std::vector<std::string> warnings;  // recorded renormalizations
};

// Parses and validates a scenario document. States within 1e-6 of unit norm
// pass silently; unnormalized states are renormalized with a recorded
// warning; zero states and unknown fields are rejected.
Scenario parse_scenario(const std::string& path);
Scenario parse_scenario_text(const std::string& text, const std::string& origin);

// Ensures every field referenced by the mode is present.
void validate_for_mode(const Scenario& scenario, ScenarioMode mode);

struct TrialStats {
  long long count = 0;
  long long successes = 0;
  int entry_index = 0;
  double empirical_rate = 0.0;
  double expected_rate = 0.0;
  double standard_error = 0.0;
};

struct ReplicateOutcome {
  FeasibilityReport feasibility;
  std::optional<ConstructorLayout> layout;
  std::optional<OperatorCheck> operator_check;
  std::optional<LineageRecord> lineage;
  std::optional<AuditReport> audit_report;
};

struct ProbabilisticOutcome {
  FeasibilityReport feasibility;
  double joint_gram_min_eigenvalue = 0.0;
  std::optional<double> max_success;
  std::optional<SuccessPlan> plan;
  double gram_preservation_defect = 0.0;
  double success_amplitude_defect = 0.0;
  std::optional<TrialStats> trials;
};

struct NogoOutcome {
  FeasibilityReport feasibility;
  GapDetail gap;
  SearchResult search;
  long long budget = 0;
};

struct Report {
  Scenario scenario;  // echo with effective seed/tolerance/mode
  ScenarioMode mode = ScenarioMode::Feasibility;
  std::variant<FeasibilityReport, ReplicateOutcome, ProbabilisticOutcome, NogoOutcome> result;
  std::string tool_version;
};

// Default search settings for nogo mode (the scenario schema carries none).
inline constexpr int kNogoRestarts = 20;
inline constexpr long long kNogoBudget = 40000;

// Executes the scenario's mode pipeline. Negative scientific results
// (Infeasible classifications, failed lineages) are ordinary outcomes;
// exceptions indicate execution faults.
Report run_scenario(const Scenario& scenario, ScenarioMode mode);

// Writes report.json plus pairs.csv / lineage.csv as applicable into dir
// (created if missing); returns the paths written. Output bytes depend only
// on the report contents.
std::vector<std::string> emit(const Report& report, const std::string& dir);

// report.json body as a string (exposed for determinism tests).
std::string report_json(const Report& report);

}  // namespace qcon
