#include "qconstructor/operator.hpp"

#include <stdexcept>

namespace qcon {

Operator::Operator(CMat entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
    throw std::invalid_argument("Operator: matrix must be square and nonempty");
  }
}

Operator Operator::unitary(CMat entries) {
  Operator op(std::move(entries));
  if (!op.is_unitary()) {
    throw std::invalid_argument("Operator::unitary: matrix fails the unitarity check");
  }
  return op;
}

Operator Operator::identity(Eigen::Index dim) {
  return Operator(CMat::Identity(dim, dim));
}

double Operator::unitarity_defect() const {
  const CMat defect = entries_.adjoint() * entries_ - CMat::Identity(dim(), dim());
  return defect.cwiseAbs().maxCoeff();
}

bool Operator::is_unitary(double tol) const { return unitarity_defect() <= tol; }

StateVector apply(const Operator& op, const StateVector& state) {
  if (op.dim() != state.dim()) {
    throw std::invalid_argument("apply: dimension mismatch");
  }
  return StateVector(op.mat() * state.amps());
}

}  // namespace qcon
