// Shared scalar/matrix aliases and the global numeric tolerances.

#pragma once

#include <Eigen/Dense>
#include <complex>

namespace qcon {

using cxd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

// Hard invariant tolerances (fixed, not user-tunable).
inline constexpr double kNormTol = 1e-12;     // state normalization
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;  // unitarity, column agreement, PSD floor

// Default threshold for overlap/rank decisions; configurable per call.
inline constexpr double kDefaultTol = 1e-8;

}  // namespace qcon
