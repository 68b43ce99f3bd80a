#include "doctest.h"

#include <cmath>

#include "qconstructor/probabilistic.hpp"

#include "helpers.hpp"

using namespace qcon;
using qtest::max_diff;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

GramMatrix joint_gram_of(const std::vector<AlphabetEntry>& alphabet) {
  std::vector<StateVector> joint;
  for (const auto& e : alphabet) joint.push_back(tensor(e.species, e.program));
  return gram(joint);
}

// Two-entry Gram with real joint overlap s.
GramMatrix two_state_gram(double s) {
  CMat g(2, 2);
  g << cxd(1, 0), cxd(s, 0), cxd(s, 0), cxd(1, 0);
  return GramMatrix(std::move(g));
}

// Independent oracle for the maximal uniform success probability: a fine
// grid scan of the residual's minimum eigenvalue.
double grid_scan_max_success(const GramMatrix& g, double step) {
  double best = 0.0;
  for (double p = 0.0; p <= 1.0 + step / 2; p += step) {
    const double clamped = std::min(p, 1.0);
    if (residual_matrix(g, std::vector<double>(g.size(), clamped)).min_eigenvalue >=
        -kUnitaryTol) {
      best = clamped;
    }
  }
  return best;
}

}  // namespace

TEST_SUITE_BEGIN("probabilistic");

TEST_CASE("residual matrix: orthogonal joint states at p = 1 vanish") {
  const auto rr = residual_matrix(two_state_gram(0.0), {1.0, 1.0});
  CHECK(rr.residual.cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(std::abs(rr.min_eigenvalue) <= 1e-12);
}

TEST_CASE("residual matrix matches the closed-form 2x2 eigenvalues") {
  for (const double s : {0.3, kInvSqrt2, 0.9}) {
    for (const double p : {0.0, 0.25, 0.5, 0.9}) {
      const auto rr = residual_matrix(two_state_gram(s), {p, p});
      Eigen::SelfAdjointEigenSolver<CMat> es(rr.residual, Eigen::EigenvaluesOnly);
      const double lo = (1.0 - p) - (s - p * s * s);
      const double hi = (1.0 - p) + (s - p * s * s);
      CHECK(es.eigenvalues()(0) == doctest::Approx(lo).epsilon(1e-12));
      CHECK(es.eigenvalues()(1) == doctest::Approx(hi).epsilon(1e-12));
      CHECK(rr.min_eigenvalue == doctest::Approx(lo).epsilon(1e-12));
    }
  }
}

TEST_CASE("residual matrix: doing nothing is always admissible") {
  const GramMatrix g = joint_gram_of(qtest::infeasible_alphabet());
  const auto rr = residual_matrix(g, {0.0, 0.0});
  CHECK(max_diff(rr.residual, g.mat()) <= 1e-15);
  CHECK(rr.min_eigenvalue >= -kUnitaryTol);
}

TEST_CASE("residual matrix rejects out-of-range probabilities") {
  CHECK_THROWS_AS(residual_matrix(two_state_gram(0.5), {1.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(residual_matrix(two_state_gram(0.5), {-0.1, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(residual_matrix(two_state_gram(0.5), {0.5}), std::invalid_argument);
}

TEST_CASE("max uniform success probability") {
  CHECK(max_uniform_success(two_state_gram(0.0)) == 1.0);

  const double p_sqrt2 = max_uniform_success(two_state_gram(kInvSqrt2));
  CHECK(std::abs(p_sqrt2 - 1.0 / (1.0 + kInvSqrt2)) <= 2e-6);

  const double p_99 = max_uniform_success(two_state_gram(0.99));
  CHECK(std::abs(p_99 - 1.0 / 1.99) <= 2e-6);

  CHECK_THROWS_AS(max_uniform_success(two_state_gram(1.0)), std::invalid_argument);
}

TEST_CASE("max uniform success agrees with the grid-scan oracle") {
  for (const double s : {0.2, kInvSqrt2, 0.95}) {
    const GramMatrix g = two_state_gram(s);
    const double bisected = max_uniform_success(g, 1e-6);
    const double scanned = grid_scan_max_success(g, 1e-4);
    CHECK(std::abs(bisected - scanned) <= 2e-4);
  }
}

TEST_CASE("residual minimum eigenvalue is non-increasing in uniform p") {
  const GramMatrix g = joint_gram_of(qtest::infeasible_alphabet());
  double previous = 1e9;
  for (int i = 0; i <= 50; ++i) {
    const double p = i / 50.0;
    const double eig = residual_matrix(g, {p, p}).min_eigenvalue;
    CHECK(eig <= previous + 1e-12);
    previous = eig;
  }
}

TEST_CASE("synthesis at p = 1 on an orthogonal alphabet has no failure branch") {
  const auto alphabet = qtest::basis_alphabet();
  const GramMatrix g = joint_gram_of(alphabet);
  const SuccessPlan plan = uniform_plan(g, 1.0);
  const ConstructorLayout layout = ConstructorLayout::for_alphabet(alphabet);
  const ProbabilisticConstructor c = synthesize_probabilistic(alphabet, plan, layout);
  CHECK(c.op.is_unitary());
  for (int i = 0; i < 2; ++i) {
    const TrialOutcome t = run_trial(c, i, 99 + i);
    CHECK(t.success);
    CHECK(t.success_probability == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(t.step->fidelity == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("synthesis below the maximum yields the planned amplitudes") {
  const auto alphabet = qtest::infeasible_alphabet();
  const GramMatrix g = joint_gram_of(alphabet);
  const SuccessPlan plan = uniform_plan(g, 0.5);
  REQUIRE(plan.admissible());
  const ConstructorLayout layout = ConstructorLayout::for_alphabet(alphabet);
  const ProbabilisticConstructor c = synthesize_probabilistic(alphabet, plan, layout);
  CHECK(c.op.is_unitary());
  CHECK(c.probed_dim() == 32);

  for (int i = 0; i < 2; ++i) {
    const TrialOutcome probe = run_trial(c, i, 7);
    CHECK(std::abs(probe.success_probability - 0.5) <= 1e-9);
  }
  // Failure states live in the fail-flagged sector and are normalized.
  for (const auto& x : c.failure_states) {
    CHECK(std::abs(x.amps().norm() - 1.0) <= 1e-12);
    for (long long w = 0; w < layout.window_dim(); ++w) {
      CHECK(std::abs(x.amps()(2 * w)) <= 1e-12);
    }
  }
}

TEST_CASE("synthesis rejects inadmissible plans") {
  const auto alphabet = qtest::infeasible_alphabet();
  const GramMatrix g = joint_gram_of(alphabet);
  const SuccessPlan plan = uniform_plan(g, 0.99);  // above the ~0.5858 maximum
  CHECK_FALSE(plan.admissible());
  const ConstructorLayout layout = ConstructorLayout::for_alphabet(alphabet);
  CHECK_THROWS_AS(synthesize_probabilistic(alphabet, plan, layout), std::invalid_argument);
}

TEST_CASE("synthesized map preserves the joint Gram matrix") {
  const auto alphabet = qtest::infeasible_alphabet();
  const GramMatrix g = joint_gram_of(alphabet);
  const double p_max = max_uniform_success(g);
  const ConstructorLayout layout = ConstructorLayout::for_alphabet(alphabet);
  const ProbabilisticConstructor c =
      synthesize_probabilistic(alphabet, uniform_plan(g, p_max), layout);

  const Eigen::Index k = 2;
  CMat inputs(c.probed_dim(), k);
  inputs.setZero();
  for (Eigen::Index i = 0; i < k; ++i) {
    const CVec w = assemble_input_window(alphabet[i], layout, c.control_in.amps());
    for (long long x = 0; x < layout.window_dim(); ++x) inputs(2 * x, i) = w(x);
  }
  const CMat mapped = c.op.mat() * inputs;
  CHECK((mapped.adjoint() * mapped - g.mat()).cwiseAbs().maxCoeff() <= kUnitaryTol);
}

TEST_CASE("trials: degenerate probabilities and reproducibility") {
  const auto alphabet = qtest::basis_alphabet();
  const GramMatrix g = joint_gram_of(alphabet);
  const ConstructorLayout layout = ConstructorLayout::for_alphabet(alphabet);

  const ProbabilisticConstructor always =
      synthesize_probabilistic(alphabet, uniform_plan(g, 1.0), layout);
  const ProbabilisticConstructor never =
      synthesize_probabilistic(alphabet, uniform_plan(g, 0.0), layout);
  for (std::uint64_t seed = 0; seed < 32; ++seed) {
    CHECK(run_trial(always, 0, seed).success);
    CHECK_FALSE(run_trial(never, 0, seed).success);
  }
  const TrialOutcome a = run_trial(always, 0, 1234);
  const TrialOutcome b = run_trial(always, 0, 1234);
  CHECK(a.success == b.success);
  CHECK(a.step->fidelity == b.step->fidelity);
}

TEST_CASE("empirical success rate tracks the plan probability") {
  const auto alphabet = qtest::infeasible_alphabet();
  const GramMatrix g = joint_gram_of(alphabet);
  const double p_max = max_uniform_success(g);
  const ConstructorLayout layout = ConstructorLayout::for_alphabet(alphabet);
  const ProbabilisticConstructor c =
      synthesize_probabilistic(alphabet, uniform_plan(g, p_max), layout);

  const long long trials = 20000;
  long long successes = 0;
  for (long long t = 0; t < trials; ++t) {
    if (run_trial(c, 0, SplitMix64::substream(31337, t)).success) ++successes;
  }
  const double rate = static_cast<double>(successes) / trials;
  const double se = std::sqrt(p_max * (1.0 - p_max) / trials);
  CHECK(std::abs(rate - p_max) <= 3.0 * se);

  // Success branches factor exactly: offspring separable, fidelity 1.
  const TrialOutcome sample = run_trial(c, 1, 5);
  if (sample.success) {
    CHECK(sample.step->schmidt_rank == 1);
    CHECK(sample.step->fidelity == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("success branches recurse on a fresh input window") {
  const auto alphabet = qtest::infeasible_alphabet();
  const GramMatrix g = joint_gram_of(alphabet);
  const double p_max = max_uniform_success(g);
  const ConstructorLayout layout = ConstructorLayout::for_alphabet(alphabet);
  const ProbabilisticConstructor c =
      synthesize_probabilistic(alphabet, uniform_plan(g, p_max), layout);
  for (int i = 0; i < 2; ++i) {
    std::uint64_t seed = 0;
    TrialOutcome t = run_trial(c, i, seed);
    while (!t.success) t = run_trial(c, i, ++seed);
    const CVec fresh = assemble_input_window(alphabet[i], layout, c.control_in.amps());
    CHECK(max_diff(t.step->child_window.amps(), fresh) <= 1e-9);
  }
}

TEST_CASE("single-entry alphabets replicate trivially") {
  SplitMix64 rng(61);
  const std::vector<AlphabetEntry> alphabet = {
      {qtest::random_state(2, rng), qtest::random_state(2, rng), "solo"}};
  CHECK(classify(alphabet).classification == Classification::DeterministicFeasible);
  const ConstructorLayout layout = ConstructorLayout::for_alphabet(alphabet);
  const DeterministicConstructor c = synthesize(alphabet, layout);
  const StepResult step = replicate_step(c, alphabet[0]);
  CHECK(step.fidelity == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(step.schmidt_rank == 1);

  const GramMatrix g = joint_gram_of(alphabet);
  CHECK(max_uniform_success(g) == 1.0);
  const ProbabilisticConstructor pc =
      synthesize_probabilistic(alphabet, uniform_plan(g, 1.0), layout);
  CHECK(run_trial(pc, 0, 3).success);
}

TEST_CASE("error lower bound") {
  CHECK(error_lower_bound(0.0, 0.7) == 0.0);
  CHECK(error_lower_bound(kInvSqrt2, 1.0) ==
        doctest::Approx(kInvSqrt2 / (1.0 + kInvSqrt2)).epsilon(1e-12));
  CHECK(error_lower_bound(1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(error_lower_bound(1.2, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(error_lower_bound(0.5, -0.1), std::invalid_argument);
}

TEST_CASE("error lower bound is increasing and capped at one half") {
  double previous = -1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double a = i / 1000.0;
    const double f = error_lower_bound(a, 1.0);
    CHECK(f > previous);
    CHECK(f <= 0.5);
    previous = f;
  }
}

TEST_SUITE_END();
