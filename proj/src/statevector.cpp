#include "qconstructor/statevector.hpp"

#include <stdexcept>

namespace qcon {

StateVector::StateVector(CVec amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() == 0) {
    throw std::invalid_argument("StateVector: empty amplitude vector");
  }
  const double norm = amps_.norm();
  if (norm < kNormTol) {
    throw std::invalid_argument("StateVector: zero-norm amplitude vector");
  }
  amps_ /= norm;
}

StateVector::StateVector(std::initializer_list<cxd> amplitudes)
    : StateVector([&] {
        CVec v(static_cast<Eigen::Index>(amplitudes.size()));
        Eigen::Index i = 0;
        for (const cxd& a : amplitudes) v(i++) = a;
        return v;
      }()) {}

StateVector StateVector::basis(Eigen::Index dim, Eigen::Index k) {
  if (dim <= 0 || k < 0 || k >= dim) {
    throw std::invalid_argument("StateVector::basis: index out of range");
  }
  CVec v = CVec::Zero(dim);
  v(k) = cxd(1.0, 0.0);
  return StateVector(std::move(v));
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  CVec out(a.dim() * b.dim());
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    out.segment(i * b.dim(), b.dim()) = a.amps()(i) * b.amps();
  }
  return StateVector(std::move(out));
}

cxd inner(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("inner: dimension mismatch");
  }
  return a.amps().dot(b.amps());
}

}  // namespace qcon
