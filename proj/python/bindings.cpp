// Python bindings for the constructor toolkit's main operations.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qconstructor/lineage.hpp"
#include "qconstructor/nogo.hpp"
#include "qconstructor/probabilistic.hpp"
#include "qconstructor/scenario.hpp"

namespace py = pybind11;
using namespace qcon;

namespace {

std::vector<std::pair<StateVector, StateVector>> to_partial_map(
    const std::vector<std::pair<CVec, CVec>>& pairs) {
  std::vector<std::pair<StateVector, StateVector>> out;
  out.reserve(pairs.size());
  for (const auto& [a, b] : pairs) out.emplace_back(StateVector(a), StateVector(b));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Simulator and analyzer for quantum universal constructors";
  m.attr("__version__") = "1.0.0";

  py::register_exception<ScenarioError>(m, "ScenarioError");
  py::register_exception<InfeasibleAlphabetError>(m, "InfeasibleAlphabetError");

  py::class_<StateVector>(m, "StateVector")
      .def(py::init<CVec>(), py::arg("amplitudes"))
      .def_static("basis", &StateVector::basis, py::arg("dim"), py::arg("k"))
      .def_property_readonly("dim", &StateVector::dim)
      .def_property_readonly("amplitudes", &StateVector::amps)
      .def("__repr__", [](const StateVector& s) {
        return "StateVector(dim=" + std::to_string(s.dim()) + ")";
      });

  py::class_<Operator>(m, "Operator")
      .def(py::init<CMat>(), py::arg("entries"))
      .def_static("unitary", &Operator::unitary, py::arg("entries"))
      .def_static("identity", &Operator::identity, py::arg("dim"))
      .def_property_readonly("dim", &Operator::dim)
      .def_property_readonly("matrix", &Operator::mat)
      .def("is_unitary", &Operator::is_unitary, py::arg("tol") = kUnitaryTol)
      .def("unitarity_defect", &Operator::unitarity_defect);

  m.def("tensor", &tensor, py::arg("a"), py::arg("b"));
  m.def("inner", &inner, py::arg("a"), py::arg("b"));
  m.def("apply", &apply, py::arg("op"), py::arg("state"));
  m.def(
      "gram",
      [](const std::vector<StateVector>& states) { return gram(states).mat(); },
      py::arg("states"));
  m.def(
      "linear_independence",
      [](const std::vector<StateVector>& states, double tol) {
        const RankResult r = linear_independence(states, tol);
        return py::make_tuple(r.independent, r.rank);
      },
      py::arg("states"), py::arg("tol") = kDefaultTol);
  m.def(
      "complete_to_unitary",
      [](const std::vector<std::pair<CVec, CVec>>& pairs, Eigen::Index dim) {
        return complete_to_unitary(to_partial_map(pairs), dim);
      },
      py::arg("partial_map"), py::arg("dim"));
  m.def("schmidt_rank", &schmidt_rank, py::arg("state"), py::arg("dim_a"),
        py::arg("dim_b"), py::arg("tol") = kDefaultTol);

  py::enum_<PairClass>(m, "PairClass")
      .value("ConditionI", PairClass::ConditionI)
      .value("ConditionII", PairClass::ConditionII)
      .value("IdenticalPair", PairClass::IdenticalPair)
      .value("Infeasible", PairClass::Infeasible);
  py::enum_<Classification>(m, "Classification")
      .value("DeterministicFeasible", Classification::DeterministicFeasible)
      .value("ProbabilisticOnly", Classification::ProbabilisticOnly)
      .value("Infeasible", Classification::Infeasible);

  py::class_<AlphabetEntry>(m, "AlphabetEntry")
      .def(py::init([](const StateVector& species, const StateVector& program,
                       const std::string& label) {
             return AlphabetEntry{species, program, label};
           }),
           py::arg("species"), py::arg("program"), py::arg("label") = "")
      .def_readonly("species", &AlphabetEntry::species)
      .def_readonly("program", &AlphabetEntry::program)
      .def_readonly("label", &AlphabetEntry::label);

  py::class_<PairEvidence>(m, "PairEvidence")
      .def_readonly("label_i", &PairEvidence::label_i)
      .def_readonly("label_j", &PairEvidence::label_j)
      .def_readonly("species_overlap", &PairEvidence::species_overlap)
      .def_readonly("program_overlap", &PairEvidence::program_overlap)
      .def_readonly("pair_class", &PairEvidence::cls);

  py::class_<FeasibilityReport>(m, "FeasibilityReport")
      .def_readonly("classification", &FeasibilityReport::classification)
      .def_readonly("pair_classes", &FeasibilityReport::pair_classes)
      .def_readonly("joint_rank", &FeasibilityReport::joint_rank)
      .def_readonly("duplicates", &FeasibilityReport::duplicates);

  m.def("pair_condition", &pair_condition, py::arg("species_overlap"),
        py::arg("program_overlap"), py::arg("tol") = kDefaultTol);
  m.def("classify", &classify, py::arg("alphabet"), py::arg("tol") = kDefaultTol);
  m.def("program_blanks", &program_blanks, py::arg("N"), py::arg("K"));
  m.def("generations", &generations, py::arg("N"), py::arg("K"), py::arg("n"));

  py::class_<ConstructorLayout>(m, "ConstructorLayout")
      .def_static("for_alphabet", &ConstructorLayout::for_alphabet, py::arg("alphabet"),
                  py::arg("control_dim") = 1)
      .def_readonly("N", &ConstructorLayout::N)
      .def_readonly("m", &ConstructorLayout::m)
      .def_readonly("control_dim", &ConstructorLayout::control_dim)
      .def_property_readonly("window_dim", &ConstructorLayout::window_dim);

  py::class_<DeterministicConstructor>(m, "DeterministicConstructor")
      .def_readonly("layout", &DeterministicConstructor::layout)
      .def_property_readonly(
          "operator_matrix",
          [](const DeterministicConstructor& c) { return c.op.mat(); });

  py::class_<StepResult>(m, "StepResult")
      .def_readonly("offspring_species", &StepResult::offspring_species)
      .def_readonly("offspring_program", &StepResult::offspring_program)
      .def_readonly("child_window", &StepResult::child_window)
      .def_readonly("fidelity", &StepResult::fidelity)
      .def_readonly("schmidt_rank", &StepResult::schmidt_rank)
      .def_readonly("entangled", &StepResult::entangled)
      .def_readonly("residual_entanglement", &StepResult::residual_entanglement);

  py::class_<OperatorCheck>(m, "OperatorCheck")
      .def_readonly("deviations", &OperatorCheck::deviations)
      .def_readonly("max_deviation", &OperatorCheck::max_deviation)
      .def_readonly("pass_", &OperatorCheck::pass);

  m.def("synthesize", &synthesize, py::arg("alphabet"), py::arg("layout"),
        py::arg("tol") = kDefaultTol);
  m.def("replicate_step", &replicate_step, py::arg("constructor"), py::arg("entry"),
        py::arg("tol") = kDefaultTol);
  m.def("verify_fixed_operator", &verify_fixed_operator, py::arg("constructor"),
        py::arg("alphabet"), py::arg("tol") = kUnitaryTol);

  py::class_<SuccessPlan>(m, "SuccessPlan")
      .def_readonly("probabilities", &SuccessPlan::probabilities)
      .def_readonly("residual", &SuccessPlan::residual)
      .def_readonly("min_eigenvalue", &SuccessPlan::min_eigenvalue)
      .def("admissible", &SuccessPlan::admissible);

  py::class_<ProbabilisticConstructor>(m, "ProbabilisticConstructor")
      .def_readonly("layout", &ProbabilisticConstructor::layout)
      .def_readonly("plan", &ProbabilisticConstructor::plan)
      .def_property_readonly(
          "operator_matrix",
          [](const ProbabilisticConstructor& c) { return c.op.mat(); });

  py::class_<TrialOutcome>(m, "TrialOutcome")
      .def_readonly("success", &TrialOutcome::success)
      .def_readonly("success_probability", &TrialOutcome::success_probability)
      .def_readonly("seed", &TrialOutcome::seed)
      .def_readonly("step", &TrialOutcome::step);

  m.def(
      "residual_matrix",
      [](const CMat& joint_gram, const std::vector<double>& p) {
        const ResidualResult r = residual_matrix(GramMatrix(joint_gram), p);
        return py::make_tuple(r.residual, r.min_eigenvalue);
      },
      py::arg("joint_gram"), py::arg("p"));
  m.def(
      "max_uniform_success",
      [](const CMat& joint_gram, double tol) {
        return max_uniform_success(GramMatrix(joint_gram), tol);
      },
      py::arg("joint_gram"), py::arg("tol") = 1e-6);
  m.def(
      "uniform_plan",
      [](const CMat& joint_gram, double p) { return uniform_plan(GramMatrix(joint_gram), p); },
      py::arg("joint_gram"), py::arg("p"));
  m.def("synthesize_probabilistic", &synthesize_probabilistic, py::arg("alphabet"),
        py::arg("plan"), py::arg("layout"), py::arg("tol") = kDefaultTol);
  m.def("run_trial", &run_trial, py::arg("constructor"), py::arg("entry_index"),
        py::arg("seed"));
  m.def("error_lower_bound", &error_lower_bound, py::arg("species_overlap"),
        py::arg("program_overlap"));

  py::enum_<HaltReason>(m, "HaltReason")
      .value("NutrientExhausted", HaltReason::NutrientExhausted)
      .value("Failure", HaltReason::Failure)
      .value("MaxGenerations", HaltReason::MaxGenerations);
  py::enum_<StepOutcome>(m, "StepOutcome")
      .value("Success", StepOutcome::Success)
      .value("Failure", StepOutcome::Failure);

  py::class_<GenerationRow>(m, "GenerationRow")
      .def_readonly("index", &GenerationRow::index)
      .def_readonly("outcome", &GenerationRow::outcome)
      .def_readonly("fidelity", &GenerationRow::fidelity)
      .def_readonly("blanks_before", &GenerationRow::blanks_before)
      .def_readonly("blanks_after", &GenerationRow::blanks_after)
      .def_readonly("seed_used", &GenerationRow::seed_used);

  py::class_<LineageRecord>(m, "LineageRecord")
      .def_readonly("generations", &LineageRecord::generations)
      .def_readonly("total_offspring", &LineageRecord::total_offspring)
      .def_readonly("halt_reason", &LineageRecord::halt_reason)
      .def_readonly("per_generation_cost", &LineageRecord::per_generation_cost);

  py::class_<AuditReport>(m, "AuditReport")
      .def_readonly("pass_", &AuditReport::pass)
      .def_readonly("first_violation_index", &AuditReport::first_violation_index)
      .def_readonly("detail", &AuditReport::detail);

  m.def(
      "run_lineage",
      [](const DeterministicConstructor& c, const AlphabetEntry& entry, long long n,
         long long max_gen, std::uint64_t seed) {
        return run_lineage(c, entry, n, max_gen, seed);
      },
      py::arg("constructor"), py::arg("entry"), py::arg("n"),
      py::arg("max_gen") = kDefaultMaxGenerations, py::arg("seed") = 0);
  m.def(
      "run_probabilistic_lineage",
      [](const ProbabilisticConstructor& c, int entry_index, long long n, long long max_gen,
         std::uint64_t seed) { return run_lineage(c, entry_index, n, max_gen, seed); },
      py::arg("constructor"), py::arg("entry_index"), py::arg("n"),
      py::arg("max_gen") = kDefaultMaxGenerations, py::arg("seed") = 0);
  m.def("audit", &audit, py::arg("record"), py::arg("n_initial"));

  py::class_<SearchResult>(m, "SearchResult")
      .def_readonly("best_residual", &SearchResult::best_residual)
      .def_readonly("best_params", &SearchResult::best_params)
      .def_readonly("restarts", &SearchResult::restarts)
      .def_readonly("residual_trace", &SearchResult::residual_trace)
      .def_readonly("feasibility_floor", &SearchResult::feasibility_floor);

  m.def("objective", &objective, py::arg("params"), py::arg("alphabet"), py::arg("layout"),
        py::arg("control_out_free") = false);
  m.def("optimize", &optimize, py::arg("alphabet"), py::arg("layout"), py::arg("restarts"),
        py::arg("seed"), py::arg("budget"), py::arg("control_out_free") = false);
  m.def("feasibility_gap", &feasibility_gap, py::arg("alphabet"),
        py::arg("tol") = kDefaultTol);

  // Scenario front end: run a scenario file and return the report JSON text
  // (and optionally write the standard artifacts).
  m.def(
      "run_scenario_file",
      [](const std::string& path, const std::string& mode,
         std::optional<std::string> out_dir) {
        const auto parsed_mode = scenario_mode_from(mode);
        if (!parsed_mode) throw ScenarioError("unknown mode: " + mode);
        const Scenario scenario = parse_scenario(path);
        const Report report = run_scenario(scenario, *parsed_mode);
        if (out_dir) emit(report, *out_dir);
        return report_json(report);
      },
      py::arg("path"), py::arg("mode"), py::arg("out_dir") = std::nullopt);
}
