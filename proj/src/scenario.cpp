#include "qconstructor/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "qconstructor/rng.hpp"

namespace qcon {

using nlohmann::json;

const char* to_string(ScenarioMode m) {
  switch (m) {
    case ScenarioMode::Feasibility: return "feasibility";
    case ScenarioMode::Replicate: return "replicate";
    case ScenarioMode::Probabilistic: return "probabilistic";
    case ScenarioMode::Nogo: return "nogo";
  }
  return "?";
}

std::optional<ScenarioMode> scenario_mode_from(const std::string& name) {
  if (name == "feasibility") return ScenarioMode::Feasibility;
  if (name == "replicate") return ScenarioMode::Replicate;
  if (name == "probabilistic") return ScenarioMode::Probabilistic;
  if (name == "nogo") return ScenarioMode::Nogo;
  return std::nullopt;
}

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void reject_unknown_fields(const json& obj, const std::set<std::string>& known,
                           const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key())) {
      throw ScenarioError("unknown field '" + it.key() + "' in " + where);
    }
  }
}

CVec parse_amplitudes(const json& arr, long long expected_dim, const std::string& where,
                      std::vector<std::string>& warnings) {
  if (!arr.is_array() || static_cast<long long>(arr.size()) != expected_dim) {
    throw ScenarioError(where + ": expected " + std::to_string(expected_dim) +
                        " [re, im] amplitude pairs");
  }
  CVec v(expected_dim);
  for (long long i = 0; i < expected_dim; ++i) {
    const json& pair = arr[static_cast<std::size_t>(i)];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw ScenarioError(where + "[" + std::to_string(i) + "]: expected an [re, im] pair");
    }
    v(i) = cxd(pair[0].get<double>(), pair[1].get<double>());
  }
  const double norm = v.norm();
  if (norm < 1e-6) {
    throw ScenarioError(where + ": zero-amplitude state");
  }
  if (std::abs(norm - 1.0) > 1e-6) {
    warnings.push_back(where + ": renormalized from norm " + fmt17(norm));
  }
  return v;
}

json amplitudes_to_json(const CVec& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    arr.push_back({v(i).real(), v(i).imag()});
  }
  return arr;
}

json feasibility_to_json(const FeasibilityReport& report) {
  json pairs = json::array();
  for (const auto& ev : report.pair_classes) {
    pairs.push_back({{"label_i", ev.label_i},
                     {"label_j", ev.label_j},
                     {"species_overlap", ev.species_overlap},
                     {"program_overlap", ev.program_overlap},
                     {"class", to_string(ev.cls)}});
  }
  json dups = json::array();
  for (const auto& [a, b] : report.duplicates) dups.push_back({a, b});
  return {{"classification", to_string(report.classification)},
          {"joint_rank", report.joint_rank},
          {"duplicates", dups},
          {"pairs", pairs}};
}

json layout_to_json(const ConstructorLayout& layout) {
  return {{"N", layout.N},
          {"m", layout.m},
          {"control_dim", layout.control_dim},
          {"window_dim", layout.window_dim()}};
}

json lineage_to_json(const LineageRecord& record) {
  json rows = json::array();
  for (const auto& row : record.generations) {
    rows.push_back({{"index", row.index},
                    {"outcome", to_string(row.outcome)},
                    {"fidelity", row.fidelity},
                    {"blanks_before", row.blanks_before},
                    {"blanks_after", row.blanks_after},
                    {"seed", row.seed_used}});
  }
  return {{"generations", rows},
          {"total_offspring", record.total_offspring},
          {"halt_reason", to_string(record.halt_reason)},
          {"per_generation_cost", record.per_generation_cost}};
}

json scenario_echo(const Scenario& s, ScenarioMode mode) {
  json alphabet = json::array();
  for (const auto& e : s.alphabet) {
    alphabet.push_back({{"label", e.label},
                        {"species", amplitudes_to_json(e.species.amps())},
                        {"program", amplitudes_to_json(e.program.amps())}});
  }
  json j = {{"name", s.name},
            {"dimension", s.dimension},
            {"program_dimension", s.program_dimension},
            {"alphabet", alphabet},
            {"mode", to_string(mode)},
            {"tolerance", s.tolerance},
            {"seed", s.seed},
            {"output_dir", s.output_dir}};
  if (s.has_blanks) j["blanks"] = s.blanks;
  if (s.has_trials) j["trials"] = s.trials;
  return j;
}

}  // namespace

Scenario parse_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ScenarioError("cannot open scenario file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str(), path);
}

Scenario parse_scenario_text(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(origin + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw ScenarioError(origin + ": scenario must be a JSON object");
  }
  reject_unknown_fields(doc,
                        {"name", "dimension", "program_dimension", "alphabet", "blanks",
                         "mode", "tolerance", "seed", "trials", "output_dir"},
                        origin);
  for (const char* field : {"name", "dimension", "program_dimension", "alphabet"}) {
    if (!doc.contains(field)) {
      throw ScenarioError(origin + ": missing required field '" + field + "'");
    }
  }

  Scenario s;
  if (!doc["name"].is_string()) throw ScenarioError(origin + ": 'name' must be a string");
  s.name = doc["name"].get<std::string>();
  if (s.name.empty()) throw ScenarioError(origin + ": 'name' must be nonempty");

  if (!doc["dimension"].is_number_integer() || doc["dimension"].get<long long>() < 2) {
    throw ScenarioError(origin + ": 'dimension' must be an integer >= 2");
  }
  s.dimension = doc["dimension"].get<long long>();
  if (!doc["program_dimension"].is_number_integer() ||
      doc["program_dimension"].get<long long>() < 1) {
    throw ScenarioError(origin + ": 'program_dimension' must be an integer >= 1");
  }
  s.program_dimension = doc["program_dimension"].get<long long>();

  if (!doc["alphabet"].is_array() || doc["alphabet"].empty()) {
    throw ScenarioError(origin + ": 'alphabet' must be a nonempty array");
  }
  std::set<std::string> labels;
  int index = 0;
  for (const json& entry : doc["alphabet"]) {
    const std::string where = "alphabet[" + std::to_string(index) + "]";
    if (!entry.is_object()) throw ScenarioError(origin + ": " + where + " must be an object");
    reject_unknown_fields(entry, {"label", "species", "program"}, where);
    for (const char* field : {"label", "species", "program"}) {
      if (!entry.contains(field)) {
        throw ScenarioError(origin + ": " + where + " missing field '" + field + "'");
      }
    }
    if (!entry["label"].is_string()) {
      throw ScenarioError(origin + ": " + where + ".label must be a string");
    }
    const std::string label = entry["label"].get<std::string>();
    if (!labels.insert(label).second) {
      throw ScenarioError(origin + ": duplicate alphabet label '" + label + "'");
    }
    CVec species = parse_amplitudes(entry["species"], s.dimension, where + ".species",
                                    s.warnings);
    CVec program = parse_amplitudes(entry["program"], s.program_dimension,
                                    where + ".program", s.warnings);
    s.alphabet.push_back(
        {StateVector(std::move(species)), StateVector(std::move(program)), label});
    ++index;
  }

  if (doc.contains("blanks")) {
    if (!doc["blanks"].is_number_integer() || doc["blanks"].get<long long>() < 0) {
      throw ScenarioError(origin + ": 'blanks' must be a nonnegative integer");
    }
    s.blanks = doc["blanks"].get<long long>();
    s.has_blanks = true;
  }
  if (doc.contains("mode")) {
    if (!doc["mode"].is_string()) throw ScenarioError(origin + ": 'mode' must be a string");
    const auto mode = scenario_mode_from(doc["mode"].get<std::string>());
    if (!mode) {
      throw ScenarioError(origin + ": unknown mode '" + doc["mode"].get<std::string>() + "'");
    }
    s.mode = mode;
  }
  if (doc.contains("tolerance")) {
    if (!doc["tolerance"].is_number() || doc["tolerance"].get<double>() <= 0.0) {
      throw ScenarioError(origin + ": 'tolerance' must be a positive number");
    }
    s.tolerance = doc["tolerance"].get<double>();
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer() || doc["seed"].get<long long>() < 0) {
      throw ScenarioError(origin + ": 'seed' must be a nonnegative integer");
    }
    s.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("trials")) {
    if (!doc["trials"].is_number_integer() || doc["trials"].get<long long>() < 1) {
      throw ScenarioError(origin + ": 'trials' must be a positive integer");
    }
    s.trials = doc["trials"].get<long long>();
    s.has_trials = true;
  }
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) {
      throw ScenarioError(origin + ": 'output_dir' must be a string");
    }
    s.output_dir = doc["output_dir"].get<std::string>();
  }
  return s;
}

void validate_for_mode(const Scenario& scenario, ScenarioMode mode) {
  if (scenario.mode && *scenario.mode != mode) {
    throw ScenarioError("scenario mode '" + std::string(to_string(*scenario.mode)) +
                        "' does not match the requested subcommand '" +
                        to_string(mode) + "'");
  }
  if (mode == ScenarioMode::Replicate && !scenario.has_blanks) {
    throw ScenarioError("replicate mode requires the 'blanks' field");
  }
  if (mode == ScenarioMode::Probabilistic && !scenario.has_trials) {
    throw ScenarioError("probabilistic mode requires the 'trials' field");
  }
}

namespace {

Report make_report(const Scenario& scenario, ScenarioMode mode) {
  Report report;
  report.scenario = scenario;
  report.scenario.mode = mode;
  report.mode = mode;
  report.tool_version = "1.0.0";
  return report;
}

ReplicateOutcome run_replicate(const Scenario& s) {
  ReplicateOutcome out;
  out.feasibility = classify(s.alphabet, s.tolerance);
  if (out.feasibility.classification != Classification::DeterministicFeasible) {
    return out;
  }
  const ConstructorLayout layout = ConstructorLayout::for_alphabet(s.alphabet);
  out.layout = layout;
  const DeterministicConstructor c = synthesize(s.alphabet, layout, s.tolerance);
  out.operator_check = verify_fixed_operator(c, s.alphabet);
  out.lineage = run_lineage(c, s.alphabet.front(), s.blanks, kDefaultMaxGenerations, s.seed);
  out.audit_report = audit(*out.lineage, s.blanks);
  return out;
}

ProbabilisticOutcome run_probabilistic(const Scenario& s) {
  ProbabilisticOutcome out;
  out.feasibility = classify(s.alphabet, s.tolerance);
  std::vector<StateVector> joint;
  for (const auto& e : s.alphabet) joint.push_back(tensor(e.species, e.program));
  const GramMatrix joint_gram = gram(joint);
  out.joint_gram_min_eigenvalue = joint_gram.min_eigenvalue();
  const double bisect_tol = std::min(s.tolerance, 1e-6);
  if (!linear_independence(joint, s.tolerance).independent ||
      joint_gram.min_eigenvalue() <= bisect_tol) {
    return out;  // no probabilistic constructor at this tolerance; the report says so
  }
  const double p_max = max_uniform_success(joint_gram, bisect_tol);
  out.max_success = p_max;
  SuccessPlan plan = uniform_plan(joint_gram, p_max);
  const ConstructorLayout layout = ConstructorLayout::for_alphabet(s.alphabet);
  const ProbabilisticConstructor c =
      synthesize_probabilistic(s.alphabet, plan, layout, s.tolerance);
  out.plan = c.plan;

  // Post-hoc witnesses: Gram preservation and success amplitudes.
  {
    const Eigen::Index k = static_cast<Eigen::Index>(s.alphabet.size());
    CMat inputs(c.probed_dim(), k);
    inputs.setZero();
    for (Eigen::Index i = 0; i < k; ++i) {
      const CVec w = assemble_input_window(s.alphabet[i], layout, c.control_in.amps());
      for (long long x = 0; x < layout.window_dim(); ++x) inputs(2 * x, i) = w(x);
    }
    const CMat mapped = c.op.mat() * inputs;
    out.gram_preservation_defect =
        (mapped.adjoint() * mapped - joint_gram.mat()).cwiseAbs().maxCoeff();
    double amp_defect = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      double weight = 0.0;
      for (long long x = 0; x < layout.window_dim(); ++x) weight += std::norm(mapped(2 * x, i));
      amp_defect = std::max(amp_defect, std::abs(weight - c.plan.probabilities[i]));
    }
    out.success_amplitude_defect = amp_defect;
  }

  TrialStats stats;
  stats.count = s.trials;
  stats.entry_index = 0;
  stats.expected_rate = c.plan.probabilities.front();
  for (long long t = 0; t < s.trials; ++t) {
    const std::uint64_t trial_seed = SplitMix64::substream(s.seed, static_cast<std::uint64_t>(t));
    if (run_trial(c, 0, trial_seed).success) ++stats.successes;
  }
  stats.empirical_rate =
      s.trials > 0 ? static_cast<double>(stats.successes) / static_cast<double>(s.trials) : 0.0;
  stats.standard_error =
      s.trials > 0
          ? std::sqrt(stats.expected_rate * (1.0 - stats.expected_rate) /
                      static_cast<double>(s.trials))
          : 0.0;
  out.trials = stats;
  return out;
}

NogoOutcome run_nogo(const Scenario& s) {
  NogoOutcome out;
  out.feasibility = classify(s.alphabet, s.tolerance);
  out.gap = feasibility_gap_detail(s.alphabet, s.tolerance);
  const ConstructorLayout layout = ConstructorLayout::for_alphabet(s.alphabet);
  out.budget = kNogoBudget;
  out.search = optimize(s.alphabet, layout, kNogoRestarts, s.seed, kNogoBudget);
  return out;
}

}  // namespace

Report run_scenario(const Scenario& scenario, ScenarioMode mode) {
  validate_for_mode(scenario, mode);
  Report report = make_report(scenario, mode);
  switch (mode) {
    case ScenarioMode::Feasibility:
      report.result = classify(scenario.alphabet, scenario.tolerance);
      break;
    case ScenarioMode::Replicate:
      report.result = run_replicate(scenario);
      break;
    case ScenarioMode::Probabilistic:
      report.result = run_probabilistic(scenario);
      break;
    case ScenarioMode::Nogo:
      report.result = run_nogo(scenario);
      break;
  }
  return report;
}

std::string report_json(const Report& report) {
  json j;
  j["tool"] = {{"name", "qconstructor"}, {"version", report.tool_version}};
  j["mode"] = to_string(report.mode);
  j["scenario"] = scenario_echo(report.scenario, report.mode);
  j["warnings"] = report.scenario.warnings;

  if (const auto* feas = std::get_if<FeasibilityReport>(&report.result)) {
    j["result"] = feasibility_to_json(*feas);
  } else if (const auto* rep = std::get_if<ReplicateOutcome>(&report.result)) {
    json r;
    r["feasibility"] = feasibility_to_json(rep->feasibility);
    if (rep->layout) r["layout"] = layout_to_json(*rep->layout);
    if (rep->operator_check) {
      r["operator_check"] = {{"max_deviation", rep->operator_check->max_deviation},
                             {"pass", rep->operator_check->pass}};
    }
    if (rep->lineage) r["lineage"] = lineage_to_json(*rep->lineage);
    if (rep->audit_report) {
      r["audit"] = {{"pass", rep->audit_report->pass},
                    {"detail", rep->audit_report->detail}};
    }
    j["result"] = r;
  } else if (const auto* prob = std::get_if<ProbabilisticOutcome>(&report.result)) {
    json r;
    r["feasibility"] = feasibility_to_json(prob->feasibility);
    r["joint_gram_min_eigenvalue"] = prob->joint_gram_min_eigenvalue;
    if (prob->max_success) r["max_uniform_success"] = *prob->max_success;
    if (prob->plan) {
      r["plan"] = {{"probabilities", prob->plan->probabilities},
                   {"min_eigenvalue", prob->plan->min_eigenvalue},
                   {"admissible", prob->plan->admissible()}};
      r["gram_preservation_defect"] = prob->gram_preservation_defect;
      r["success_amplitude_defect"] = prob->success_amplitude_defect;
    }
    if (prob->trials) {
      r["trials"] = {{"count", prob->trials->count},
                     {"entry", prob->trials->entry_index},
                     {"successes", prob->trials->successes},
                     {"empirical_rate", prob->trials->empirical_rate},
                     {"expected_rate", prob->trials->expected_rate},
                     {"standard_error", prob->trials->standard_error}};
    }
    j["result"] = r;
  } else if (const auto* nogo = std::get_if<NogoOutcome>(&report.result)) {
    json r;
    r["feasibility"] = feasibility_to_json(nogo->feasibility);
    r["feasibility_floor"] = {{"floor", nogo->gap.floor},
                              {"worst_mismatch", nogo->gap.worst_mismatch},
                              {"label_i", nogo->gap.label_i},
                              {"label_j", nogo->gap.label_j}};
    json traces = json::array();
    for (const auto& trace : nogo->search.residual_trace) traces.push_back(trace);
    std::vector<double> params(nogo->search.best_params.data(),
                               nogo->search.best_params.data() + nogo->search.best_params.size());
    r["search"] = {{"best_residual", nogo->search.best_residual},
                   {"restarts", nogo->search.restarts},
                   {"budget", nogo->budget},
                   {"feasibility_floor", nogo->search.feasibility_floor},
                   {"residual_trace", traces},
                   {"best_params", params}};
    j["result"] = r;
  }
  return j.dump(2) + "\n";
}

std::vector<std::string> emit(const Report& report, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::vector<std::string> written;

  const std::string report_path = (fs::path(dir) / "report.json").string();
  {
    std::ofstream out(report_path, std::ios::binary);
    if (!out) throw std::runtime_error("emit: cannot write " + report_path);
    out << report_json(report);
  }
  written.push_back(report_path);

  const FeasibilityReport* feas = nullptr;
  if (const auto* f = std::get_if<FeasibilityReport>(&report.result)) feas = f;
  if (feas) {
    const std::string pairs_path = (fs::path(dir) / "pairs.csv").string();
    std::ofstream out(pairs_path, std::ios::binary);
    if (!out) throw std::runtime_error("emit: cannot write " + pairs_path);
    out << "label_i,label_j,species_overlap,program_overlap,class\n";
    for (const auto& ev : feas->pair_classes) {
      out << ev.label_i << ',' << ev.label_j << ',' << fmt17(ev.species_overlap) << ','
          << fmt17(ev.program_overlap) << ',' << to_string(ev.cls) << '\n';
    }
    written.push_back(pairs_path);
  }

  const LineageRecord* lineage = nullptr;
  if (const auto* rep = std::get_if<ReplicateOutcome>(&report.result)) {
    if (rep->lineage) lineage = &*rep->lineage;
  }
  if (lineage) {
    const std::string lineage_path = (fs::path(dir) / "lineage.csv").string();
    std::ofstream out(lineage_path, std::ios::binary);
    if (!out) throw std::runtime_error("emit: cannot write " + lineage_path);
    out << "generation,outcome,fidelity,blanks_before,blanks_after,seed\n";
    for (const auto& row : lineage->generations) {
      out << row.index << ',' << to_string(row.outcome) << ',' << fmt17(row.fidelity) << ','
          << row.blanks_before << ',' << row.blanks_after << ',' << row.seed_used << '\n';
    }
    written.push_back(lineage_path);
  }
  return written;
}

}  // namespace qcon
