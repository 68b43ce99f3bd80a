// Gram matrices, rank decisions, isometry completion and Schmidt analysis.

#pragma once

#include <utility>
#include <vector>

#include "qconstructor/core.hpp"
#include "qconstructor/operator.hpp"
#include "qconstructor/statevector.hpp"

namespace qcon {

// Hermitian matrix of pairwise overlaps G_ij = <v_i|v_j>. Construction
// enforces Hermiticity within 1e-12 and positive semidefiniteness
// (min eigenvalue >= -1e-10).
class GramMatrix {
 public:
  explicit GramMatrix(CMat entries);

  Eigen::Index size() const { return entries_.rows(); }
  const CMat& mat() const { return entries_; }
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  CMat entries_;
  double min_eigenvalue_;
};

GramMatrix gram(const std::vector<StateVector>& states);

struct RankResult {
  bool independent = false;
  int rank = 0;
};

// Rank of the stacked-state matrix counted by singular values above
// tol * sigma_max; independent iff rank equals the state count.
RankResult linear_independence(const std::vector<StateVector>& states,
                               double tol = kDefaultTol);

// Extends an orthonormal partial map {input_k -> output_k} to a full unitary
// on dim dimensions. The orthogonal complements are completed by
// Gram-Schmidt over the canonical basis in index order, so the result is
// reproducible bit-for-bit. Throws if the inputs or outputs are not
// mutually orthonormal within 1e-10.
Operator complete_to_unitary(
    const std::vector<std::pair<StateVector, StateVector>>& partial_map,
    Eigen::Index dim);

// Number of singular values above tol of the dim_a x dim_b reshaped
// amplitude matrix. Throws if dim_a * dim_b != state.dim().
int schmidt_rank(const StateVector& state, Eigen::Index dim_a,
                 Eigen::Index dim_b, double tol = kDefaultTol);

namespace detail {

// States as columns of a dim x count matrix.
CMat stack_columns(const std::vector<StateVector>& states);

// Extends the given orthonormal columns to a full orthonormal basis of
// C^dim by orthogonalizing canonical basis vectors in index order.
CMat complete_orthonormal_basis(const CMat& columns, Eigen::Index dim);

// Bipartite factor analysis of a (not necessarily normalized) vector.
struct SchmidtFactors {
  CVec left;            // dim_a, unit norm
  CVec right;           // dim_b, unit norm
  double leading_sv = 0.0;
  double residual_weight = 0.0;  // 1 - leading_sv^2 / total weight
  int rank = 0;
};
SchmidtFactors leading_schmidt_factor(const CVec& v, Eigen::Index dim_a,
                                      Eigen::Index dim_b, double tol);

// Multiplies v by a unit phase so that <reference|v> is real and
// nonnegative. Falls back to making the largest-magnitude entry real
// positive when v is (numerically) orthogonal to the reference.
CVec phase_anchor(CVec v, const CVec& reference);

}  // namespace detail

}  // namespace qcon
