// Dense square operators on a register.

#pragma once

#include "qconstructor/core.hpp"
#include "qconstructor/statevector.hpp"

namespace qcon {

class Operator {
 public:
  // Any square matrix.
  explicit Operator(CMat entries);

  // Verifies ||U'U - I||_max <= 1e-10 and throws otherwise.
  static Operator unitary(CMat entries);

  static Operator identity(Eigen::Index dim);

  Eigen::Index dim() const { return entries_.rows(); }
  const CMat& mat() const { return entries_; }

  bool is_unitary(double tol = kUnitaryTol) const;
  // ||U'U - I||_max, the deviation the unitary flag checks.
  double unitarity_defect() const;

 private:
  CMat entries_;
};

// Matrix-vector product, renormalized into a StateVector. For a unitary
// operator the pre-normalization norm is already 1 within 1e-10.
StateVector apply(const Operator& op, const StateVector& state);

}  // namespace qcon
