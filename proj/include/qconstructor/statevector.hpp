// Normalized pure states over a finite-dimensional register.

#pragma once

#include <initializer_list>

#include "qconstructor/core.hpp"

namespace qcon {

// Immutable normalized amplitude vector. Construction renormalizes, so the
// Euclidean norm is 1 within 1e-12 for every live instance; a zero vector is
// rejected.
class StateVector {
 public:
  explicit StateVector(CVec amplitudes);
  StateVector(std::initializer_list<cxd> amplitudes);

  // Computational basis state |k> of the given dimension.
  static StateVector basis(Eigen::Index dim, Eigen::Index k);

  Eigen::Index dim() const { return amps_.size(); }
  const CVec& amps() const { return amps_; }
  cxd operator[](Eigen::Index i) const { return amps_(i); }

 private:
  CVec amps_;
};

// Kronecker product, row-major register order: amplitude of (i, j) lands at
// index i * b.dim() + j.
StateVector tensor(const StateVector& a, const StateVector& b);

// <a|b> = sum conj(a_i) b_i. Throws on dimension mismatch.
cxd inner(const StateVector& a, const StateVector& b);

}  // namespace qcon
