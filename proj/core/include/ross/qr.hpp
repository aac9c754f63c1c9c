#pragma once

#include <Eigen/Dense>

namespace ross {

struct QrFactors {
  Eigen::MatrixXd q;  // orthogonal
  Eigen::MatrixXd r;  // upper triangular, nonnegative diagonal
  bool rank_deficient = false;
};

/// a = q r by Householder reflections. Diagonal entries of r are made
/// nonnegative so the factorization is unique for full-rank square input.
QrFactors householder_qr(const Eigen::MatrixXd& a);

}  // namespace ross
