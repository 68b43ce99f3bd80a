#include "qconstructor/probabilistic.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

#include "qconstructor/rng.hpp"

namespace qcon {

namespace {

std::vector<StateVector> joint_states(const std::vector<AlphabetEntry>& alphabet) {
  std::vector<StateVector> joint;
  joint.reserve(alphabet.size());
  for (const auto& e : alphabet) joint.push_back(tensor(e.species, e.program));
  return joint;
}

}  // namespace

ResidualResult residual_matrix(const GramMatrix& joint_gram, const std::vector<double>& p) {
  const Eigen::Index n = joint_gram.size();
  if (static_cast<Eigen::Index>(p.size()) != n) {
    throw std::invalid_argument("residual_matrix: probability count mismatch");
  }
  for (double pi : p) {
    if (!(pi >= 0.0 && pi <= 1.0)) {
      throw std::invalid_argument("residual_matrix: probabilities must lie in [0, 1]");
    }
  }
  const CMat& g = joint_gram.mat();
  CMat r(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      r(i, j) = g(i, j) - std::sqrt(p[i] * p[j]) * g(i, j) * g(i, j);
    }
  }
  r = (r + r.adjoint().eval()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMat> es(r, Eigen::EigenvaluesOnly);
  return {std::move(r), es.eigenvalues().minCoeff()};
}

SuccessPlan uniform_plan(const GramMatrix& joint_gram, double p) {
  std::vector<double> probs(joint_gram.size(), p);
  ResidualResult rr = residual_matrix(joint_gram, probs);
  return SuccessPlan{std::move(probs), std::move(rr.residual), rr.min_eigenvalue};
}

double max_uniform_success(const GramMatrix& joint_gram, double tol) {
  if (joint_gram.min_eigenvalue() <= tol) {
    throw std::invalid_argument(
        "max_uniform_success: joint states are not linearly independent");
  }
  const Eigen::Index n = joint_gram.size();
  auto min_eig_at = [&](double p) {
    return residual_matrix(joint_gram, std::vector<double>(n, p)).min_eigenvalue;
  };
  auto admissible = [&](double eig) { return eig >= -kUnitaryTol; };

  std::vector<std::pair<double, double>> samples;  // (p, min eigenvalue)
  auto probe = [&](double p) {
    const double eig = min_eig_at(p);
    samples.emplace_back(p, eig);
    return eig;
  };

  if (admissible(probe(1.0))) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  probe(0.0);
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (admissible(probe(mid))) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  // The residual shrinks by p * (entrywise Gram square), so its minimum
  // eigenvalue is non-increasing in p; verify on the sampled points.
  std::sort(samples.begin(), samples.end());
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].second > samples[i - 1].second + 1e-9) {
      throw std::runtime_error("max_uniform_success: eigenvalue monotonicity violated");
    }
  }
  return lo;
}

double error_lower_bound(double species_overlap, double program_overlap) {
  const double slack = 1e-12;
  if (!(species_overlap >= 0.0 && species_overlap <= 1.0 + slack) ||
      !(program_overlap >= 0.0 && program_overlap <= 1.0 + slack)) {
    throw std::invalid_argument("error_lower_bound: overlaps must lie in [0, 1]");
  }
  const double a = std::min(species_overlap, 1.0) * std::min(program_overlap, 1.0);
  return a / (1.0 + a);
}

ProbabilisticConstructor synthesize_probabilistic(const std::vector<AlphabetEntry>& alphabet,
                                                  const SuccessPlan& plan,
                                                  const ConstructorLayout& layout,
                                                  double tol) {
  if (alphabet.empty()) {
    throw std::invalid_argument("synthesize_probabilistic: empty alphabet");
  }
  const Eigen::Index k = static_cast<Eigen::Index>(alphabet.size());
  if (static_cast<Eigen::Index>(plan.probabilities.size()) != k) {
    throw std::invalid_argument("synthesize_probabilistic: plan size mismatch");
  }

  const std::vector<StateVector> joint = joint_states(alphabet);
  if (!linear_independence(joint, tol).independent) {
    throw std::invalid_argument(
        "synthesize_probabilistic: joint states are not linearly independent");
  }
  const GramMatrix joint_gram = gram(joint);

  // Recompute the residual from the plan's probabilities; reject inadmissible plans.
  const ResidualResult rr = residual_matrix(joint_gram, plan.probabilities);
  if (rr.min_eigenvalue < -kUnitaryTol) {
    throw std::invalid_argument("synthesize_probabilistic: plan is not admissible");
  }

  // Failure-component coordinates F with F'F = R (eigendecomposition with the
  // numerically-zero negatives clamped).
  Eigen::SelfAdjointEigenSolver<CMat> es(rr.residual);
  RVec lams = es.eigenvalues().cwiseMax(0.0);
  const CMat f = lams.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();

  const StateVector control_in = StateVector::basis(layout.control_dim, 0);
  const StateVector control_out = control_in;
  const long long d = layout.window_dim();
  const long long probed = d * 2;

  // Probe is the trailing factor: window index w maps to 2w (success) and
  // 2w + 1 (failure).
  CMat inputs(probed, k);
  CMat targets(probed, k);
  inputs.setZero();
  targets.setZero();
  for (Eigen::Index i = 0; i < k; ++i) {
    const CVec in_w = assemble_input_window(alphabet[i], layout, control_in.amps());
    const CVec ideal = assemble_ideal_output(alphabet[i], layout, control_out.amps());
    const double sp = std::sqrt(plan.probabilities[i]);
    for (long long w = 0; w < d; ++w) {
      inputs(2 * w, i) = in_w(w);
      targets(2 * w, i) = sp * ideal(w);
    }
    for (Eigen::Index mu = 0; mu < k; ++mu) {
      targets(2 * mu + 1, i) = f(mu, i);
    }
  }

  // Orthonormalize both frames with the shared Cholesky factor of the joint
  // Gram; the columns then pair up as an orthonormal partial map.
  Eigen::LLT<CMat> llt(joint_gram.mat());
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("synthesize_probabilistic: joint Gram is numerically singular");
  }
  const CMat r_upper = CMat(llt.matrixL()).adjoint();
  const CMat r_inv = r_upper.inverse();
  const CMat qa = inputs * r_inv;
  const CMat qb = targets * r_inv;

  std::vector<std::pair<StateVector, StateVector>> columns;
  columns.reserve(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    columns.emplace_back(StateVector(qa.col(i)), StateVector(qb.col(i)));
  }
  Operator op = complete_to_unitary(columns, probed);

  // Post checks: the synthesized map must preserve the joint Gram and realize
  // the planned success amplitudes.
  const CMat mapped = op.mat() * inputs;
  const CMat gram_defect = mapped.adjoint() * mapped - joint_gram.mat();
  if (gram_defect.cwiseAbs().maxCoeff() > kUnitaryTol) {
    throw std::runtime_error("synthesize_probabilistic: Gram preservation check failed");
  }
  std::vector<StateVector> failure_states;
  for (Eigen::Index i = 0; i < k; ++i) {
    double success_weight = 0.0;
    CVec fail_part = CVec::Zero(probed);
    for (long long w = 0; w < d; ++w) {
      success_weight += std::norm(mapped(2 * w, i));
      fail_part(2 * w + 1) = mapped(2 * w + 1, i);
    }
    if (std::abs(success_weight - plan.probabilities[i]) > 1e-9) {
      throw std::runtime_error("synthesize_probabilistic: success amplitude check failed");
    }
    if (fail_part.norm() > 1e-9) {
      failure_states.push_back(StateVector(std::move(fail_part)));
    } else {
      // Zero failure amplitude (p_i = 1): record the reserved slot instead.
      CVec placeholder = CVec::Zero(probed);
      placeholder(2 * i + 1) = cxd(1.0, 0.0);
      failure_states.push_back(StateVector(std::move(placeholder)));
    }
  }

  SuccessPlan stored{plan.probabilities, rr.residual, rr.min_eigenvalue};
  return ProbabilisticConstructor{layout,     std::move(op),   std::move(stored),
                                  std::move(failure_states), control_in, control_out,
                                  alphabet};
}

TrialOutcome run_trial(const ProbabilisticConstructor& c, int entry_index,
                       std::uint64_t seed) {
  if (entry_index < 0 || entry_index >= static_cast<int>(c.alphabet.size())) {
    throw std::invalid_argument("run_trial: entry index out of range");
  }
  const AlphabetEntry& entry = c.alphabet[static_cast<std::size_t>(entry_index)];
  const long long d = c.layout.window_dim();

  CVec input = CVec::Zero(c.probed_dim());
  const CVec in_w = assemble_input_window(entry, c.layout, c.control_in.amps());
  for (long long w = 0; w < d; ++w) input(2 * w) = in_w(w);
  const CVec out = c.op.mat() * input;

  CVec success_branch(d);
  for (long long w = 0; w < d; ++w) success_branch(w) = out(2 * w);
  const double p_success = success_branch.squaredNorm();

  TrialOutcome outcome;
  outcome.seed = seed;
  outcome.success_probability = p_success;
  SplitMix64 rng(seed);
  outcome.success = rng.next_double() < p_success;
  if (outcome.success) {
    success_branch /= success_branch.norm();
    outcome.step = analyze_step_output(success_branch, entry, c.layout,
                                       c.control_out.amps(), kDefaultTol);
  }
  return outcome;
}

}  // namespace qcon
