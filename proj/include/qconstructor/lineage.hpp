// Autonomous multi-generation replication against a finite blank-state pool.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qconstructor/constructor.hpp"
#include "qconstructor/probabilistic.hpp"

namespace qcon {

enum class LineageMode { Deterministic, Probabilistic };
enum class HaltReason { NutrientExhausted, Failure, MaxGenerations };
enum class StepOutcome { Success, Failure };

const char* to_string(HaltReason r);
const char* to_string(StepOutcome o);

// Nutrient accounting for one lineage run.
struct Universe {
  long long blanks_remaining = 0;
  int per_generation_cost = 2;  // m + 1
  LineageMode mode = LineageMode::Deterministic;
  std::uint64_t seed = 0;

  Universe(long long blanks, int cost, LineageMode mode, std::uint64_t seed);
};

struct GenerationRow {
  int index = 0;  // 1-based generation number
  StepOutcome outcome = StepOutcome::Success;
  double fidelity = 0.0;
  long long blanks_before = 0;
  long long blanks_after = 0;
  std::uint64_t seed_used = 0;
};

struct LineageRecord {
  std::vector<GenerationRow> generations;
  long long total_offspring = 0;
  HaltReason halt_reason = HaltReason::NutrientExhausted;
  int per_generation_cost = 2;
};

inline constexpr long long kDefaultMaxGenerations = 1000000;

// Repeats the replication step while (m+1) blanks remain, debiting the pool
// each generation. In deterministic mode the child window is checked against
// the initial window (the recursion is exact); a deviation above 1e-10 aborts
// with an exception since it would mean a broken constructor.
LineageRecord run_lineage(const DeterministicConstructor& c, const AlphabetEntry& entry,
                          long long n, long long max_gen = kDefaultMaxGenerations,
                          std::uint64_t seed = 0);

// Probabilistic mode: each generation runs one seeded trial (substream of the
// master seed, recorded per row); the first failure halts the lineage.
LineageRecord run_lineage(const ProbabilisticConstructor& c, int entry_index,
                          long long n, long long max_gen = kDefaultMaxGenerations,
                          std::uint64_t seed = 0);

struct AuditReport {
  bool pass = true;
  int first_violation_index = -1;  // generation index, -1 when clean
  std::string detail;
};

// Conservation bookkeeping: every row debits exactly the per-generation cost,
// rows chain (blanks_before of g+1 equals blanks_after of g), offspring count
// equals the number of successes, and n_initial is fully accounted for.
AuditReport audit(const LineageRecord& record, long long n_initial);

}  // namespace qcon
