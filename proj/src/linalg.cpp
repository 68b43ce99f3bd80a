#include "qconstructor/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace qcon {

GramMatrix::GramMatrix(CMat entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
    throw std::invalid_argument("GramMatrix: matrix must be square and nonempty");
  }
  const double herm_defect = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  if (herm_defect > kHermitianTol) {
    throw std::invalid_argument("GramMatrix: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(entries_, Eigen::EigenvaluesOnly);
  min_eigenvalue_ = es.eigenvalues().minCoeff();
  if (min_eigenvalue_ < -kUnitaryTol) {
    throw std::invalid_argument("GramMatrix: matrix is not positive semidefinite");
  }
}

GramMatrix gram(const std::vector<StateVector>& states) {
  if (states.empty()) {
    throw std::invalid_argument("gram: empty state list");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(states.size());
  CMat g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      g(i, j) = inner(states[i], states[j]);
    }
  }
  // Symmetrize away the last-bit asymmetry of independent dot products.
  g = (g + g.adjoint().eval()) / 2.0;
  return GramMatrix(std::move(g));
}

RankResult linear_independence(const std::vector<StateVector>& states, double tol) {
  if (states.empty()) {
    throw std::invalid_argument("linear_independence: empty state list");
  }
  const CMat m = detail::stack_columns(states);
  Eigen::JacobiSVD<CMat> svd(m);
  const auto& sv = svd.singularValues();
  const double cutoff = tol * sv(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  return {rank == static_cast<int>(states.size()), rank};
}

Operator complete_to_unitary(
    const std::vector<std::pair<StateVector, StateVector>>& partial_map,
    Eigen::Index dim) {
  if (partial_map.empty()) {
    throw std::invalid_argument("complete_to_unitary: empty partial map");
  }
  const Eigen::Index k = static_cast<Eigen::Index>(partial_map.size());
  if (k > dim) {
    throw std::invalid_argument("complete_to_unitary: more columns than dimensions");
  }
  CMat in_cols(dim, k);
  CMat out_cols(dim, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    if (partial_map[c].first.dim() != dim || partial_map[c].second.dim() != dim) {
      throw std::invalid_argument("complete_to_unitary: column dimension mismatch");
    }
    in_cols.col(c) = partial_map[c].first.amps();
    out_cols.col(c) = partial_map[c].second.amps();
  }
  for (const CMat* cols : {&in_cols, &out_cols}) {
    const CMat g = cols->adjoint() * (*cols);
    const double defect = (g - CMat::Identity(k, k)).cwiseAbs().maxCoeff();
    if (defect > kUnitaryTol) {
      throw std::invalid_argument(
          "complete_to_unitary: columns are not mutually orthonormal; the map "
          "does not extend to an isometry");
    }
  }
  const CMat in_basis = detail::complete_orthonormal_basis(in_cols, dim);
  const CMat out_basis = detail::complete_orthonormal_basis(out_cols, dim);
  CMat u = out_basis * in_basis.adjoint();
  Operator op = Operator::unitary(std::move(u));
  for (Eigen::Index c = 0; c < k; ++c) {
    const double err = (op.mat() * in_cols.col(c) - out_cols.col(c)).norm();
    if (err > kUnitaryTol) {
      throw std::runtime_error("complete_to_unitary: completed operator drifts off a supplied column");
    }
  }
  return op;
}

int schmidt_rank(const StateVector& state, Eigen::Index dim_a, Eigen::Index dim_b,
                 double tol) {
  if (dim_a <= 0 || dim_b <= 0 || dim_a * dim_b != state.dim()) {
    throw std::invalid_argument("schmidt_rank: cut does not match the state dimension");
  }
  const Eigen::Map<const Eigen::Matrix<cxd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      reshaped(state.amps().data(), dim_a, dim_b);
  Eigen::JacobiSVD<CMat> svd(reshaped);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol) ++rank;
  }
  return rank;
}

namespace detail {

CMat stack_columns(const std::vector<StateVector>& states) {
  const Eigen::Index dim = states.front().dim();
  CMat m(dim, static_cast<Eigen::Index>(states.size()));
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].dim() != dim) {
      throw std::invalid_argument("stack_columns: inconsistent dimensions");
    }
    m.col(static_cast<Eigen::Index>(i)) = states[i].amps();
  }
  return m;
}

CMat complete_orthonormal_basis(const CMat& columns, Eigen::Index dim) {
  CMat basis(dim, dim);
  Eigen::Index filled = columns.cols();
  basis.leftCols(filled) = columns;
  for (Eigen::Index e = 0; e < dim && filled < dim; ++e) {
    CVec v = CVec::Zero(dim);
    v(e) = cxd(1.0, 0.0);
    // Two Gram-Schmidt passes keep the completion orthonormal to working
    // precision even when the candidate is nearly in the current span.
    for (int pass = 0; pass < 2; ++pass) {
      v -= basis.leftCols(filled) * (basis.leftCols(filled).adjoint() * v);
    }
    const double norm = v.norm();
    if (norm > 1e-6) {
      basis.col(filled++) = v / norm;
    }
  }
  if (filled != dim) {
    throw std::runtime_error("complete_orthonormal_basis: canonical sweep did not complete the basis");
  }
  return basis;
}

SchmidtFactors leading_schmidt_factor(const CVec& v, Eigen::Index dim_a,
                                      Eigen::Index dim_b, double tol) {
  if (dim_a * dim_b != v.size()) {
    throw std::invalid_argument("leading_schmidt_factor: cut does not match the vector size");
  }
  const Eigen::Map<const Eigen::Matrix<cxd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      reshaped(v.data(), dim_a, dim_b);
  Eigen::JacobiSVD<CMat> svd(reshaped, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  SchmidtFactors f;
  f.leading_sv = sv(0);
  const double total = sv.squaredNorm();
  f.residual_weight = total > 0.0 ? 1.0 - (sv(0) * sv(0)) / total : 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol) ++f.rank;
  }
  f.left = svd.matrixU().col(0);
  f.right = svd.matrixV().col(0).conjugate();
  return f;
}

CVec phase_anchor(CVec v, const CVec& reference) {
  const cxd z = reference.dot(v);  // <reference|v>
  if (std::abs(z) > 1e-9) {
    return v * (std::conj(z) / std::abs(z));
  }
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const cxd lead = v(imax);
  if (std::abs(lead) > 0.0) {
    v *= std::conj(lead) / std::abs(lead);
  }
  return v;
}

}  // namespace detail

}  // namespace qcon
