// Alphabet classification from the inner-product preservation condition and
// the blank-state resource formulas.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qconstructor/linalg.hpp"
#include "qconstructor/statevector.hpp"

namespace qcon {

// One replicable unit: a species state (dim N) with its program state (dim K).
struct AlphabetEntry {
  StateVector species;
  StateVector program;
  std::string label;
};

// Feasibility class of an unordered alphabet pair. A fixed unitary must
// preserve the joint overlap a = g*q, so a = a^2 * c with |c| <= 1 forces
// a = 0 (ConditionI / ConditionII by which factor vanishes) or |a| = 1
// (IdenticalPair); anything else is Infeasible.
enum class PairClass { ConditionI, ConditionII, IdenticalPair, Infeasible };

enum class Classification { DeterministicFeasible, ProbabilisticOnly, Infeasible };

const char* to_string(PairClass c);
const char* to_string(Classification c);

struct PairEvidence {
  int i = 0;
  int j = 0;
  std::string label_i;
  std::string label_j;
  double species_overlap = 0.0;  // |<psi_i|psi_j>|
  double program_overlap = 0.0;  // |<p_i|p_j>|
  PairClass cls = PairClass::Infeasible;
};

struct FeasibilityReport {
  Classification classification = Classification::Infeasible;
  std::vector<PairEvidence> pair_classes;
  int joint_rank = 0;
  std::vector<std::pair<std::string, std::string>> duplicates;
};

PairClass pair_condition(cxd species_overlap, cxd program_overlap,
                         double tol = kDefaultTol);

// Classifies the alphabet: DeterministicFeasible iff every pair is
// ConditionI/ConditionII/IdenticalPair; otherwise ProbabilisticOnly when the
// joint states species (x) program are linearly independent (duplicates
// collapsed first); otherwise Infeasible.
FeasibilityReport classify(const std::vector<AlphabetEntry>& alphabet,
                           double tol = kDefaultTol);

// Blank states consumed to copy one program state: the least m with
// N^m >= K (equals log K / log N when K is a power of N).
int program_blanks(long long N, long long K);

// Maximum generations supported by an n-blank pool: floor(n / (m+1)).
long long generations(long long N, long long K, long long n);

struct ResourceBudget {
  long long N = 0;
  long long K = 0;
  int m = 0;
  long long n = 0;
  long long max_generations = 0;

  // Blank-pool Hilbert space dimension N^n (as a double; overflows to inf).
  double blank_space_dim() const;

  static ResourceBudget make(long long N, long long K, long long n);
};

}  // namespace qcon
