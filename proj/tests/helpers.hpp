// Shared fixtures: seeded random states and the canonical alphabets used
// across the suites.

#pragma once

#include <vector>

#include "qconstructor/feasibility.hpp"
#include "qconstructor/rng.hpp"
#include "qconstructor/statevector.hpp"

namespace qtest {

using namespace qcon;

inline StateVector random_state(Eigen::Index dim, SplitMix64& rng) {
  CVec v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    v(i) = cxd(rng.next_uniform(-1.0, 1.0), rng.next_uniform(-1.0, 1.0));
  }
  return StateVector(std::move(v));
}

inline double max_diff(const CVec& a, const CVec& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline StateVector plus_state() {
  return StateVector{cxd(1.0, 0.0), cxd(1.0, 0.0)};
}

// {(|0>, |p>), (|1>, |p>)}: orthogonal species, shared program (branch i).
inline std::vector<AlphabetEntry> basis_alphabet() {
  return {{StateVector::basis(2, 0), StateVector::basis(2, 0), "zero"},
          {StateVector::basis(2, 1), StateVector::basis(2, 0), "one"}};
}

// {(|0>, |p0>), (|+>, |p1>)}: non-orthogonal species, orthogonal programs
// (branch ii).
inline std::vector<AlphabetEntry> branch_two_alphabet() {
  return {{StateVector::basis(2, 0), StateVector::basis(2, 0), "zero"},
          {plus_state(), StateVector::basis(2, 1), "plus"}};
}

// {(|0>, |p>), (|+>, |p>)}: non-orthogonal species, shared program. The
// canonical deterministic-infeasible (probabilistic-only) alphabet.
inline std::vector<AlphabetEntry> infeasible_alphabet() {
  return {{StateVector::basis(2, 0), StateVector::basis(2, 0), "zero"},
          {plus_state(), StateVector::basis(2, 0), "plus"}};
}

}  // namespace qtest
