#pragma once

#include <Eigen/Dense>

namespace mammo {

inline constexpr double kPinvRelativeCutoff = 1e-12;

/// Moore-Penrose pseudoinverse through a thin SVD; singular values below
/// `relative_cutoff`·σ_max are treated as zero.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
pseudoinverse(const Eigen::MatrixBase<Derived> &a,
              typename Derived::RealScalar relative_cutoff = kPinvRelativeCutoff) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using RealVector = Eigen::Matrix<typename Derived::RealScalar, Eigen::Dynamic, 1>;

  if (a.size() == 0)
    return Matrix::Zero(a.cols(), a.rows());
  const Eigen::BDCSVD<Matrix> svd(a.derived(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector &sigma = svd.singularValues();
  const auto cutoff = relative_cutoff * sigma(0);
  RealVector inv = RealVector::Zero(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma(i) > cutoff)
      inv(i) = 1 / sigma(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

} // namespace mammo
