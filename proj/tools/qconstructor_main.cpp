// qconstructor: scenario-driven front end for the replication toolkit.
//
//   qconstructor <feasibility|replicate|probabilistic|nogo>
//                --scenario s.json [--out DIR] [--seed N] [--tol X] [--jobs K]
//
// Exit codes: 0 = completed (any scientific result), 2 = scenario/parse
// error, 3 = execution fault.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "qconstructor/scenario.hpp"

namespace {

struct Overrides {
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
};

std::string headline(const qcon::Report& report) {
  using namespace qcon;
  if (const auto* feas = std::get_if<FeasibilityReport>(&report.result)) {
    return std::string("classification=") + to_string(feas->classification);
  }
  if (const auto* rep = std::get_if<ReplicateOutcome>(&report.result)) {
    if (!rep->lineage) {
      return std::string("classification=") + to_string(rep->feasibility.classification) +
             " (no lineage run)";
    }
    return std::string("halt=") + to_string(rep->lineage->halt_reason) +
           " offspring=" + std::to_string(rep->lineage->total_offspring);
  }
  if (const auto* prob = std::get_if<ProbabilisticOutcome>(&report.result)) {
    if (!prob->max_success) {
      return std::string("classification=") + to_string(prob->feasibility.classification) +
             " (joint states dependent)";
    }
    std::string line = "max_uniform_success=" + std::to_string(*prob->max_success);
    if (prob->trials) {
      line += " empirical_rate=" + std::to_string(prob->trials->empirical_rate);
    }
    return line;
  }
  if (const auto* nogo = std::get_if<NogoOutcome>(&report.result)) {
    return "best_residual=" + std::to_string(nogo->search.best_residual) +
           " floor=" + std::to_string(nogo->gap.floor);
  }
  return "done";
}

int run_one(const std::string& file, qcon::ScenarioMode mode, const Overrides& overrides,
            bool nest_by_name, std::mutex& io_mutex) {
  const auto start = std::chrono::steady_clock::now();
  try {
    qcon::Scenario scenario = qcon::parse_scenario(file);
    if (overrides.seed) scenario.seed = *overrides.seed;
    if (overrides.tolerance) scenario.tolerance = *overrides.tolerance;
    qcon::validate_for_mode(scenario, mode);

    // --out only relocates the files; the report echoes the scenario as run.
    std::string dir = overrides.out_dir.value_or(scenario.output_dir);
    if (nest_by_name) {
      dir = (std::filesystem::path(dir) / scenario.name).string();
    }
    const qcon::Report report = qcon::run_scenario(scenario, mode);
    const std::vector<std::string> files = qcon::emit(report, dir);

    const auto elapsed = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - start);
    std::lock_guard<std::mutex> lock(io_mutex);
    std::cout << scenario.name << ": " << headline(report) << "\n";
    for (const auto& f : files) std::cout << "  wrote " << f << "\n";
    for (const auto& w : report.scenario.warnings) std::cout << "  warning: " << w << "\n";
    std::cout << "  elapsed " << elapsed.count() << " s\n";
    return 0;
  } catch (const qcon::ScenarioError& e) {
    std::lock_guard<std::mutex> lock(io_mutex);
    std::cerr << "scenario error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::lock_guard<std::mutex> lock(io_mutex);
    std::cerr << "execution fault: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum universal constructor toolkit"};
  app.require_subcommand(1);

  struct SubcommandState {
    std::vector<std::string> scenarios;
    std::string out_dir;
    std::uint64_t seed = 0;
    double tolerance = 0.0;
    int jobs = 1;
    bool has_out = false;
    CLI::App* sub = nullptr;
  };

  std::vector<std::pair<qcon::ScenarioMode, SubcommandState>> subs;
  subs.reserve(4);
  for (const auto mode :
       {qcon::ScenarioMode::Feasibility, qcon::ScenarioMode::Replicate,
        qcon::ScenarioMode::Probabilistic, qcon::ScenarioMode::Nogo}) {
    subs.emplace_back(mode, SubcommandState{});
  }
  for (auto& [mode, state] : subs) {
    CLI::App* sub = app.add_subcommand(qcon::to_string(mode));
    sub->add_option("--scenario", state.scenarios, "scenario JSON file(s)")->required();
    sub->add_option("--out", state.out_dir, "output directory (overrides the scenario)");
    sub->add_option("--seed", state.seed, "seed override");
    sub->add_option("--tol", state.tolerance, "tolerance override");
    sub->add_option("--jobs", state.jobs, "parallel scenario fan-out")
        ->check(CLI::PositiveNumber);
    state.sub = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // command-line misuse is a scenario-class error
  }

  for (auto& [mode, state] : subs) {
    if (!state.sub->parsed()) continue;

    Overrides overrides;
    if (state.sub->count("--out") > 0) overrides.out_dir = state.out_dir;
    if (state.sub->count("--seed") > 0) overrides.seed = state.seed;
    if (state.sub->count("--tol") > 0) overrides.tolerance = state.tolerance;
    const bool nest = state.scenarios.size() > 1;

    std::mutex io_mutex;
    std::atomic<std::size_t> cursor{0};
    std::atomic<int> worst{0};
    const int workers =
        std::min<int>(state.jobs, static_cast<int>(state.scenarios.size()));
    auto work = [&] {
      while (true) {
        const std::size_t i = cursor.fetch_add(1);
        if (i >= state.scenarios.size()) break;
        const int code = run_one(state.scenarios[i], mode, overrides, nest, io_mutex);
        int prev = worst.load();
        while (code > prev && !worst.compare_exchange_weak(prev, code)) {
        }
      }
    };
    if (workers <= 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < workers; ++t) pool.emplace_back(work);
      for (auto& t : pool) t.join();
    }
    return worst.load();
  }
  return 0;
}
