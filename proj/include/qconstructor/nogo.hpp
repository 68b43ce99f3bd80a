// Numerical no-go certificate: direct optimization of the one-step
// replication residual over the unitary group, plus the analytic residual
// floor for infeasible alphabets.

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qconstructor/constructor.hpp"

namespace qcon {

// Real parametrization of the unitary group on d dimensions: the d^2 entries
// are the diagonal of a Hermitian H followed by (re, im) pairs for each
// upper-triangle element; the operator is exp(iH), unitary for every
// parameter vector.
struct UnitaryParametrization {
  Eigen::Index d = 0;

  explicit UnitaryParametrization(Eigen::Index dim) : d(dim) {}
  Eigen::Index param_count() const { return d * d; }

  CMat hermitian(const RVec& params) const;
  Operator unitary(const RVec& params) const;
};

// One-step replication residual, precompiled for repeated evaluation:
// J = (1/k) sum_i (1 - |<target_i| U(params) |input_i>|^2), in [0, 1].
class ReplicationObjective {
 public:
  ReplicationObjective(const std::vector<AlphabetEntry>& alphabet,
                       const ConstructorLayout& layout, bool control_out_free);

  double operator()(const RVec& params) const;
  Eigen::Index param_count() const { return parametrization_.param_count(); }
  const UnitaryParametrization& parametrization() const { return parametrization_; }

 private:
  UnitaryParametrization parametrization_;
  CMat inputs_;        // window columns
  CMat targets_;       // ideal one-step images (fixed control branch)
  CMat target_bases_;  // images without the control factor (free branch)
  long long control_dim_ = 1;
  bool control_out_free_ = false;
  int count_ = 0;
};

double objective(const RVec& params, const std::vector<AlphabetEntry>& alphabet,
                 const ConstructorLayout& layout, bool control_out_free = false);

// Central finite-difference gradient, the derivative estimate the optimizer
// runs on.
RVec fd_gradient(const std::function<double(const RVec&)>& f, const RVec& x,
                 double step = 1e-5);

struct SearchResult {
  double best_residual = 1.0;
  RVec best_params;
  int restarts = 0;  // restarts actually executed
  std::vector<std::vector<double>> residual_trace;  // per-restart milestones
  double feasibility_floor = 0.0;
};

// Multi-restart quasi-Newton descent on finite-difference gradients. Budget
// counts objective evaluations per restart (budget 0 scores the start point
// only). Deterministic for a given seed; stops early once the residual is
// below 1e-10. Window dimensions above 64 are rejected as beyond desk scale.
SearchResult optimize(const std::vector<AlphabetEntry>& alphabet,
                      const ConstructorLayout& layout, int restarts,
                      std::uint64_t seed, long long budget,
                      bool control_out_free = false);

struct GapDetail {
  double floor = 0.0;           // conservative lower bound on J
  double worst_mismatch = 0.0;  // |a| - |a|^2 of the worst pair
  std::string label_i, label_j;
};

// Conservative lower bound on the achievable residual for infeasible
// alphabets; 0 when a deterministic constructor exists. Any unitary
// preserves the input overlap a = g*q while the one-step targets overlap at
// a^2, so with J_i = 1 - |<t_i|U in_i>|^2 and D = |a| - |a|^2:
//   D <= 2 sqrt(max J) + max J  =>  max J >= (sqrt(1 + D) - 1)^2,
// and the k-entry average obeys J >= (sqrt(1 + D) - 1)^2 / k.
GapDetail feasibility_gap_detail(const std::vector<AlphabetEntry>& alphabet,
                                 double tol = kDefaultTol);
double feasibility_gap(const std::vector<AlphabetEntry>& alphabet,
                       double tol = kDefaultTol);

}  // namespace qcon
