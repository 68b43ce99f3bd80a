#include "qconstructor/feasibility.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qcon {

const char* to_string(PairClass c) {
  switch (c) {
    case PairClass::ConditionI: return "ConditionI";
    case PairClass::ConditionII: return "ConditionII";
    case PairClass::IdenticalPair: return "IdenticalPair";
    case PairClass::Infeasible: return "Infeasible";
  }
  return "?";
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::DeterministicFeasible: return "DeterministicFeasible";
    case Classification::ProbabilisticOnly: return "ProbabilisticOnly";
    case Classification::Infeasible: return "Infeasible";
  }
  return "?";
}

PairClass pair_condition(cxd species_overlap, cxd program_overlap, double tol) {
  const double g = std::abs(species_overlap);
  const double q = std::abs(program_overlap);
  if (g > 1.0 + tol || q > 1.0 + tol) {
    throw std::invalid_argument("pair_condition: overlap magnitude exceeds 1");
  }
  if (g <= tol) return PairClass::ConditionI;
  if (q <= tol) return PairClass::ConditionII;
  if (g * q >= 1.0 - tol) return PairClass::IdenticalPair;
  return PairClass::Infeasible;
}

FeasibilityReport classify(const std::vector<AlphabetEntry>& alphabet, double tol) {
  if (alphabet.empty()) {
    throw std::invalid_argument("classify: empty alphabet");
  }
  const Eigen::Index species_dim = alphabet.front().species.dim();
  const Eigen::Index program_dim = alphabet.front().program.dim();
  for (const auto& e : alphabet) {
    if (e.species.dim() != species_dim || e.program.dim() != program_dim) {
      throw std::invalid_argument("classify: inconsistent alphabet dimensions");
    }
  }

  FeasibilityReport report;
  const int count = static_cast<int>(alphabet.size());

  std::vector<StateVector> joint;
  joint.reserve(alphabet.size());
  for (const auto& e : alphabet) joint.push_back(tensor(e.species, e.program));

  bool all_pairs_ok = true;
  std::vector<bool> duplicate_of_earlier(alphabet.size(), false);
  for (int i = 0; i < count; ++i) {
    for (int j = i + 1; j < count; ++j) {
      PairEvidence ev;
      ev.i = i;
      ev.j = j;
      ev.label_i = alphabet[i].label;
      ev.label_j = alphabet[j].label;
      const cxd g = inner(alphabet[i].species, alphabet[j].species);
      const cxd q = inner(alphabet[i].program, alphabet[j].program);
      ev.species_overlap = std::abs(g);
      ev.program_overlap = std::abs(q);
      ev.cls = pair_condition(g, q, tol);
      if (ev.cls == PairClass::Infeasible) all_pairs_ok = false;
      if (ev.cls == PairClass::IdenticalPair) {
        report.duplicates.emplace_back(ev.label_i, ev.label_j);
        duplicate_of_earlier[j] = true;
      }
      report.pair_classes.push_back(std::move(ev));
    }
  }

  // Joint rank over the duplicate-collapsed alphabet.
  std::vector<StateVector> distinct;
  for (int i = 0; i < count; ++i) {
    if (!duplicate_of_earlier[i]) distinct.push_back(joint[i]);
  }
  const RankResult rank = linear_independence(distinct, tol);
  report.joint_rank = rank.rank;

  if (all_pairs_ok) {
    report.classification = Classification::DeterministicFeasible;
  } else if (rank.independent) {
    report.classification = Classification::ProbabilisticOnly;
  } else {
    report.classification = Classification::Infeasible;
  }
  return report;
}

int program_blanks(long long N, long long K) {
  if (N < 2) {
    throw std::invalid_argument("program_blanks: N must be at least 2");
  }
  if (K < 1) {
    throw std::invalid_argument("program_blanks: K must be at least 1");
  }
  int m = 0;
  long long power = 1;
  while (power < K) {
    // N^m saturates well above any representable K, so the loop terminates.
    if (power > (std::numeric_limits<long long>::max)() / N) {
      ++m;
      break;
    }
    power *= N;
    ++m;
  }
  return m;
}

long long generations(long long N, long long K, long long n) {
  if (n < 0) {
    throw std::invalid_argument("generations: blank count must be nonnegative");
  }
  const int m = program_blanks(N, K);
  return n / (static_cast<long long>(m) + 1);
}

double ResourceBudget::blank_space_dim() const {
  return std::pow(static_cast<double>(N), static_cast<double>(n));
}

ResourceBudget ResourceBudget::make(long long N, long long K, long long n) {
  if (n < 0) {
    throw std::invalid_argument("ResourceBudget: blank count must be nonnegative");
  }
  ResourceBudget b;
  b.N = N;
  b.K = K;
  b.m = program_blanks(N, K);
  b.n = n;
  b.max_generations = generations(N, K, n);
  return b;
}

}  // namespace qcon
