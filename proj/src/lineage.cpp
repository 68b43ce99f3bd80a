#include "qconstructor/lineage.hpp"

#include <cmath>
#include <stdexcept>

#include "qconstructor/rng.hpp"

namespace qcon {

const char* to_string(HaltReason r) {
  switch (r) {
    case HaltReason::NutrientExhausted: return "NutrientExhausted";
    case HaltReason::Failure: return "Failure";
    case HaltReason::MaxGenerations: return "MaxGenerations";
  }
  return "?";
}

const char* to_string(StepOutcome o) {
  return o == StepOutcome::Success ? "Success" : "Failure";
}

Universe::Universe(long long blanks, int cost, LineageMode mode_, std::uint64_t seed_)
    : blanks_remaining(blanks), per_generation_cost(cost), mode(mode_), seed(seed_) {
  if (blanks < 0) {
    throw std::invalid_argument("Universe: blank pool must be nonnegative");
  }
  if (cost < 2) {
    throw std::invalid_argument("Universe: per-generation cost must be at least 2");
  }
}

LineageRecord run_lineage(const DeterministicConstructor& c, const AlphabetEntry& entry,
                          long long n, long long max_gen, std::uint64_t seed) {
  const int cost = c.layout.m + 1;
  Universe universe(n, cost, LineageMode::Deterministic, seed);
  LineageRecord record;
  record.per_generation_cost = cost;

  const CVec initial_window = assemble_input_window(entry, c.layout, c.control_in.amps());
  record.halt_reason = HaltReason::NutrientExhausted;
  int index = 0;
  while (universe.blanks_remaining >= cost) {
    if (index >= max_gen) {
      record.halt_reason = HaltReason::MaxGenerations;
      break;
    }
    const StepResult step = replicate_step(c, entry);
    const double recursion_defect =
        (step.child_window.amps() - initial_window).norm();
    if (recursion_defect > kUnitaryTol) {
      throw std::runtime_error(
          "run_lineage: child window deviates from the parent configuration");
    }
    ++index;
    GenerationRow row;
    row.index = index;
    row.outcome = StepOutcome::Success;
    row.fidelity = step.fidelity;
    row.blanks_before = universe.blanks_remaining;
    universe.blanks_remaining -= cost;
    row.blanks_after = universe.blanks_remaining;
    row.seed_used = 0;
    record.generations.push_back(row);
    ++record.total_offspring;
  }
  return record;
}

LineageRecord run_lineage(const ProbabilisticConstructor& c, int entry_index,
                          long long n, long long max_gen, std::uint64_t seed) {
  const int cost = c.layout.m + 1;
  Universe universe(n, cost, LineageMode::Probabilistic, seed);
  LineageRecord record;
  record.per_generation_cost = cost;

  record.halt_reason = HaltReason::NutrientExhausted;
  int index = 0;
  while (universe.blanks_remaining >= cost) {
    if (index >= max_gen) {
      record.halt_reason = HaltReason::MaxGenerations;
      break;
    }
    ++index;
    const std::uint64_t trial_seed =
        SplitMix64::substream(seed, static_cast<std::uint64_t>(index));
    const TrialOutcome trial = run_trial(c, entry_index, trial_seed);
    GenerationRow row;
    row.index = index;
    row.blanks_before = universe.blanks_remaining;
    universe.blanks_remaining -= cost;
    row.blanks_after = universe.blanks_remaining;
    row.seed_used = trial_seed;
    if (trial.success) {
      row.outcome = StepOutcome::Success;
      row.fidelity = trial.step->fidelity;
      record.generations.push_back(row);
      ++record.total_offspring;
    } else {
      row.outcome = StepOutcome::Failure;
      row.fidelity = 0.0;
      record.generations.push_back(row);
      record.halt_reason = HaltReason::Failure;
      break;
    }
  }
  return record;
}

AuditReport audit(const LineageRecord& record, long long n_initial) {
  AuditReport report;
  const int cost = record.per_generation_cost;
  long long expected_before = n_initial;
  long long successes = 0;
  for (const auto& row : record.generations) {
    if (row.blanks_before != expected_before) {
      report.pass = false;
      report.first_violation_index = row.index;
      report.detail = "blank chain broken at generation " + std::to_string(row.index);
      return report;
    }
    if (row.blanks_after != row.blanks_before - cost || row.blanks_after < 0) {
      report.pass = false;
      report.first_violation_index = row.index;
      report.detail = "blank debit mismatch at generation " + std::to_string(row.index);
      return report;
    }
    expected_before = row.blanks_after;
    if (row.outcome == StepOutcome::Success) ++successes;
  }
  const long long executed = static_cast<long long>(record.generations.size());
  if (n_initial != expected_before + cost * executed) {
    report.pass = false;
    report.detail = "blank conservation failed over the full record";
    return report;
  }
  if (successes != record.total_offspring) {
    report.pass = false;
    report.detail = "offspring count does not match successful generations";
    return report;
  }
  report.detail = "conservation verified: " + std::to_string(executed) + " generations, " +
                  std::to_string(record.total_offspring) + " offspring, " +
                  std::to_string(expected_before) + " blanks left";
  return report;
}

}  // namespace qcon
