#include "qconstructor/constructor.hpp"

#include <cmath>
#include <string>

namespace qcon {

namespace {

long long checked_pow(long long base, int exp) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > (1LL << 40) / base) {
      throw std::invalid_argument("ConstructorLayout: register dimension overflows desk scale");
    }
    r *= base;
  }
  return r;
}

CVec kron(const CVec& a, const CVec& b) {
  CVec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

CVec basis_vec(Eigen::Index dim, Eigen::Index k) {
  CVec v = CVec::Zero(dim);
  v(k) = cxd(1.0, 0.0);
  return v;
}

// Splits sigma * (left x right) = v with the right factor's phase chosen so
// that <right_ref|right> is real nonnegative; the left factor counter-rotates
// to keep the product fixed.
void split_with_anchored_right(const CVec& v, Eigen::Index dim_left, Eigen::Index dim_right,
                               const CVec& right_ref, double tol,
                               detail::SchmidtFactors& out) {
  out = detail::leading_schmidt_factor(v, dim_left, dim_right, tol);
  const cxd z = right_ref.dot(out.right);
  if (std::abs(z) > 1e-9) {
    const cxd phase = std::conj(z) / std::abs(z);
    out.right *= phase;
    out.left *= std::conj(phase);
  }
}

}  // namespace

long long ConstructorLayout::K_padded() const { return checked_pow(N, m); }
long long ConstructorLayout::offspring_dim() const { return N * K_padded(); }
long long ConstructorLayout::child_dim() const { return N * K_padded() * control_dim; }
long long ConstructorLayout::window_dim() const { return offspring_dim() * child_dim(); }

ConstructorLayout ConstructorLayout::for_alphabet(const std::vector<AlphabetEntry>& alphabet,
                                                  long long control_dim) {
  if (alphabet.empty()) {
    throw std::invalid_argument("ConstructorLayout: empty alphabet");
  }
  if (control_dim < 1) {
    throw std::invalid_argument("ConstructorLayout: control dimension must be >= 1");
  }
  ConstructorLayout layout;
  layout.N = alphabet.front().species.dim();
  layout.m = program_blanks(layout.N, alphabet.front().program.dim());
  if (layout.m < 1) layout.m = 1;  // a program register is at least one blank wide
  layout.control_dim = control_dim;
  return layout;
}

StateVector pad_program(const StateVector& program, long long padded_dim) {
  if (program.dim() > padded_dim) {
    throw std::invalid_argument("pad_program: program state exceeds the padded register");
  }
  if (program.dim() == padded_dim) return program;
  CVec v = CVec::Zero(padded_dim);
  v.head(program.dim()) = program.amps();
  return StateVector(std::move(v));
}

CVec assemble_input_window(const AlphabetEntry& entry, const ConstructorLayout& layout,
                           const CVec& control) {
  if (entry.species.dim() != layout.N) {
    throw std::invalid_argument("assemble_input_window: species dimension mismatch");
  }
  if (control.size() != layout.control_dim) {
    throw std::invalid_argument("assemble_input_window: control dimension mismatch");
  }
  const long long kp = layout.K_padded();
  const CVec padded = pad_program(entry.program, kp).amps();
  CVec w = kron(entry.species.amps(), basis_vec(layout.N, 0));
  w = kron(w, padded);
  w = kron(w, basis_vec(kp, 0));
  return kron(w, control);
}

CVec assemble_ideal_output(const AlphabetEntry& entry, const ConstructorLayout& layout,
                           const CVec& control_out) {
  if (entry.species.dim() != layout.N) {
    throw std::invalid_argument("assemble_ideal_output: species dimension mismatch");
  }
  if (control_out.size() != layout.control_dim) {
    throw std::invalid_argument("assemble_ideal_output: control dimension mismatch");
  }
  const CVec padded = pad_program(entry.program, layout.K_padded()).amps();
  CVec w = kron(entry.species.amps(), padded);
  w = kron(w, entry.species.amps());
  w = kron(w, padded);
  return kron(w, control_out);
}

DeterministicConstructor synthesize(const std::vector<AlphabetEntry>& alphabet,
                                    const ConstructorLayout& layout, double tol) {
  FeasibilityReport report = classify(alphabet, tol);
  if (report.classification != Classification::DeterministicFeasible) {
    throw InfeasibleAlphabetError(
        std::string("synthesize: alphabet is not deterministically feasible (") +
            to_string(report.classification) + ")",
        std::move(report));
  }

  // Duplicate entries share their window columns; collapse to representatives.
  std::vector<bool> drop(alphabet.size(), false);
  for (const auto& ev : report.pair_classes) {
    if (ev.cls == PairClass::IdenticalPair) drop[ev.j] = true;
  }

  const StateVector control_in = StateVector::basis(layout.control_dim, 0);
  const StateVector control_out = control_in;

  std::vector<std::pair<StateVector, StateVector>> columns;
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    if (drop[i]) continue;
    columns.emplace_back(
        StateVector(assemble_input_window(alphabet[i], layout, control_in.amps())),
        StateVector(assemble_ideal_output(alphabet[i], layout, control_out.amps())));
  }
  Operator op = complete_to_unitary(columns, layout.window_dim());
  return DeterministicConstructor{layout, std::move(op), control_in, control_out};
}

StepResult replicate_step(const DeterministicConstructor& c, const AlphabetEntry& entry,
                          double tol) {
  const CVec input = assemble_input_window(entry, c.layout, c.control_in.amps());
  const CVec out = c.op.mat() * input;
  return analyze_step_output(out, entry, c.layout, c.control_out.amps(), tol);
}

StepResult analyze_step_output(const CVec& out, const AlphabetEntry& entry,
                               const ConstructorLayout& layout, const CVec& control_out,
                               double tol) {
  if (out.size() != layout.window_dim()) {
    throw std::invalid_argument("analyze_step_output: window dimension mismatch");
  }
  const long long kp = layout.K_padded();
  const CVec ideal = assemble_ideal_output(entry, layout, control_out);
  const StateVector padded = pad_program(entry.program, kp);

  StepResult result{StateVector::basis(layout.N, 0), StateVector::basis(kp, 0),
                    StateVector::basis(layout.window_dim(), 0), 0.0, 0, false, 0.0};
  result.fidelity = std::norm(ideal.dot(out));

  // Offspring/child bipartition, contiguous in output order.
  CVec expected_child = kron(entry.species.amps(), padded.amps());
  expected_child = kron(expected_child, control_out);
  detail::SchmidtFactors cut;
  split_with_anchored_right(out, layout.offspring_dim(), layout.child_dim(),
                            expected_child, tol, cut);
  result.schmidt_rank = cut.rank;
  result.entangled = cut.rank > 1;
  result.residual_entanglement = cut.residual_weight;

  // Child window for the next application: child block with fresh blanks
  // re-inserted, back in input register order.
  {
    CVec window = CVec::Zero(layout.window_dim());
    const long long cd = layout.control_dim;
    for (long long s = 0; s < layout.N; ++s) {
      for (long long p = 0; p < kp; ++p) {
        for (long long ctl = 0; ctl < cd; ++ctl) {
          const long long src = (s * kp + p) * cd + ctl;
          const long long dst = (((s * layout.N + 0) * kp + p) * kp + 0) * cd + ctl;
          window(dst) = cut.right(src);
        }
      }
    }
    result.child_window = StateVector(std::move(window));
  }

  // Emitted copies, phase-aligned to the entry's own states.
  const auto offspring = detail::leading_schmidt_factor(cut.left, layout.N, kp, tol);
  result.offspring_species =
      StateVector(detail::phase_anchor(offspring.left, entry.species.amps()));
  result.offspring_program =
      StateVector(detail::phase_anchor(offspring.right, padded.amps()));
  return result;
}

OperatorCheck verify_fixed_operator(const DeterministicConstructor& c,
                                    const std::vector<AlphabetEntry>& alphabet,
                                    double tol) {
  OperatorCheck check;
  for (const auto& entry : alphabet) {
    const CVec input = assemble_input_window(entry, c.layout, c.control_in.amps());
    const CVec ideal = assemble_ideal_output(entry, c.layout, c.control_out.amps());
    const double fidelity = std::norm(ideal.dot(c.op.mat() * input));
    check.deviations.push_back(1.0 - fidelity);
  }
  check.max_deviation = 0.0;
  for (double d : check.deviations) check.max_deviation = std::max(check.max_deviation, d);
  check.pass = check.max_deviation <= tol;
  return check;
}

}  // namespace qcon
