// Probabilistic constructor for linearly independent joint alphabets:
// admissibility matrix, success-probability optimization, synthesis with an
// explicit success/fail probe, seeded trials and the pairwise error bound.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qconstructor/constructor.hpp"
#include "qconstructor/linalg.hpp"

namespace qcon {

struct ResidualResult {
  CMat residual;  // R = X1 - sqrt(P) X2 sqrt(P)
  double min_eigenvalue = 0.0;
};

// X1 = joint Gram, X2 = entrywise square (doubled copies; control and probe
// overlaps taken as 1). A plan is admissible iff R is positive semidefinite.
ResidualResult residual_matrix(const GramMatrix& joint_gram, const std::vector<double>& p);

struct SuccessPlan {
  std::vector<double> probabilities;
  CMat residual;
  double min_eigenvalue = 0.0;

  bool admissible() const { return min_eigenvalue >= -kUnitaryTol; }
};

SuccessPlan uniform_plan(const GramMatrix& joint_gram, double p);

// Largest uniform success probability with an admissible residual, by
// bisection to absolute width tol. Monotonicity of the minimum eigenvalue is
// checked on every sampled point. Throws if the joint Gram is singular
// (min eigenvalue <= tol): the constructor exists iff the joint states are
// linearly independent.
double max_uniform_success(const GramMatrix& joint_gram, double tol = 1e-6);

// Pairwise error bound a / (1 + a) with a = |<psi_i|psi_j>| |<p_i|p_j>|.
double error_lower_bound(double species_overlap, double program_overlap);

// Probe flag convention: the probe register is the trailing dim-2 factor;
// index 0 = success (probe unchanged), index 1 = failure.
struct ProbabilisticConstructor {
  ConstructorLayout layout;  // window without the probe
  Operator op;               // unitary on window_dim * 2
  SuccessPlan plan;
  std::vector<StateVector> failure_states;  // |X_i>, full probed window
  StateVector control_in;
  StateVector control_out;
  std::vector<AlphabetEntry> alphabet;

  long long probed_dim() const { return layout.window_dim() * 2; }
};

// Builds the unitary mapping each input window to
//   sqrt(p_i) (ideal replication image)|success> + sqrt(1-p_i) |X_i>|fail>,
// with the failure components' Gram fixed to R by factoring R = F'F and
// embedding F's columns in the fail-flagged sector. Verifies that the map
// preserves the joint Gram within 1e-10 and that every success amplitude
// matches p_i within 1e-9.
ProbabilisticConstructor synthesize_probabilistic(const std::vector<AlphabetEntry>& alphabet,
                                                  const SuccessPlan& plan,
                                                  const ConstructorLayout& layout,
                                                  double tol = kDefaultTol);

struct TrialOutcome {
  bool success = false;
  double success_probability = 0.0;  // exact branch probability of this entry
  std::uint64_t seed = 0;
  std::optional<StepResult> step;    // populated on success
};

// Applies the fixed operator and samples the probe with the seeded
// deterministic stream; the same seed always reproduces the same outcome.
TrialOutcome run_trial(const ProbabilisticConstructor& c, int entry_index,
                       std::uint64_t seed);

}  // namespace qcon
