// Synthesis and stepping of the fixed replication unitary for
// deterministically feasible alphabets.

#pragma once

#include <stdexcept>
#include <vector>

#include "qconstructor/feasibility.hpp"
#include "qconstructor/linalg.hpp"
#include "qconstructor/operator.hpp"
#include "qconstructor/statevector.hpp"

namespace qcon {

// Register window the fixed operator acts on.
//
// Input register order:  species(N) . blank(N) . program(N^m) . copy-blanks(N^m) . control
// Output register order: offspring-species(N) . offspring-program(N^m) .
//                        child-species(N) . child-program(N^m) . control
//
// One unitary maps the input-order window to the output-order window; the
// output order places the emitted copies in the leading registers so the
// offspring/child bipartition is a contiguous cut.
struct ConstructorLayout {
  long long N = 2;          // species/blank unit dimension
  int m = 1;                // blanks consumed per program copy
  long long control_dim = 1;

  long long K_padded() const;     // N^m, the padded program register
  long long offspring_dim() const;  // N * N^m
  long long child_dim() const;      // N * N^m * control_dim
  long long window_dim() const;     // offspring_dim * child_dim

  // Layout for an alphabet: N from the species dimension, m from
  // program_blanks(N, K). Validates control_dim >= 1.
  static ConstructorLayout for_alphabet(const std::vector<AlphabetEntry>& alphabet,
                                        long long control_dim = 1);
};

// Zero-pads a program state into the N^m register. Throws if it does not fit.
StateVector pad_program(const StateVector& program, long long padded_dim);

// species . |0> . program . |0...0> . control, input register order.
CVec assemble_input_window(const AlphabetEntry& entry, const ConstructorLayout& layout,
                           const CVec& control);

// species . program . species . program . control_out, output register order
// (exact one-step replication image).
CVec assemble_ideal_output(const AlphabetEntry& entry, const ConstructorLayout& layout,
                           const CVec& control_out);

struct DeterministicConstructor {
  ConstructorLayout layout;
  Operator op;  // the fixed unitary
  StateVector control_in;
  StateVector control_out;
};

// Rejection carrying the full classification evidence.
class InfeasibleAlphabetError : public std::runtime_error {
 public:
  InfeasibleAlphabetError(const std::string& msg, FeasibilityReport report)
      : std::runtime_error(msg), report_(std::move(report)) {}
  const FeasibilityReport& report() const { return report_; }

 private:
  FeasibilityReport report_;
};

// Builds the fixed unitary satisfying the one-step replication image for
// every alphabet entry (duplicates collapsed). Throws InfeasibleAlphabetError
// unless classify() returns DeterministicFeasible.
DeterministicConstructor synthesize(const std::vector<AlphabetEntry>& alphabet,
                                    const ConstructorLayout& layout,
                                    double tol = kDefaultTol);

struct StepResult {
  StateVector offspring_species;  // dim N, phase-aligned to the entry species
  StateVector offspring_program;  // dim N^m (padded register content)
  StateVector child_window;       // full window in input order, fresh blanks
  double fidelity = 0.0;          // |<ideal|actual>|^2
  int schmidt_rank = 0;           // across the offspring/child cut
  bool entangled = false;         // rank > 1 at tol
  double residual_entanglement = 0.0;  // weight outside the leading Schmidt term
};

// Applies the fixed operator to the assembled window for one entry. Offspring
// separability failures are reported in the result, not thrown: the returned
// factors are then the leading Schmidt vectors.
StepResult replicate_step(const DeterministicConstructor& c, const AlphabetEntry& entry,
                          double tol = kDefaultTol);

// Factors an output-order window state into offspring, child window and
// fidelity against the ideal image. Shared by the deterministic step and the
// success branch of probabilistic trials.
StepResult analyze_step_output(const CVec& out, const AlphabetEntry& entry,
                               const ConstructorLayout& layout, const CVec& control_out,
                               double tol = kDefaultTol);

struct OperatorCheck {
  std::vector<double> deviations;  // 1 - fidelity per entry
  double max_deviation = 0.0;
  bool pass = false;
};

// Confirms the single fixed operator reproduces every entry of the alphabet;
// out-of-alphabet entries simply report their deviation.
OperatorCheck verify_fixed_operator(const DeterministicConstructor& c,
                                    const std::vector<AlphabetEntry>& alphabet,
                                    double tol = kUnitaryTol);

}  // namespace qcon
