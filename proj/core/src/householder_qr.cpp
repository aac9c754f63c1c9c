#include <cmath>

#include "ross/qr.hpp"

namespace ross {

QrFactors householder_qr(const Eigen::MatrixXd& a) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  Eigen::MatrixXd r = a;
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(rows, rows);
  for (Eigen::Index k = 0; k < std::min(rows - 1, cols); ++k) {
    Eigen::VectorXd x = r.block(k, k, rows - k, 1);
    const double alpha = x.norm();
    if (alpha == 0.0) continue;
    Eigen::VectorXd v = x;
    v(0) += (x(0) >= 0.0 ? alpha : -alpha);
    v.normalize();
    r.block(k, 0, rows - k, cols) -= 2.0 * v * (v.transpose() * r.block(k, 0, rows - k, cols));
    q.block(0, k, rows, rows - k) -= 2.0 * (q.block(0, k, rows, rows - k) * v) * v.transpose();
  }
  for (Eigen::Index i = 0; i < std::min(rows, cols); ++i) {
    if (r(i, i) < 0.0) {
      r.row(i) *= -1.0;
      q.col(i) *= -1.0;
    }
  }
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < std::min(i, cols); ++j) r(i, j) = 0.0;
  }
  QrFactors out{q, r, false};
  const double scale = a.norm();
  for (Eigen::Index i = 0; i < std::min(rows, cols); ++i) {
    if (std::abs(r(i, i)) <= 1e-12 * scale) out.rank_deficient = true;
  }
  if (scale == 0.0) out.rank_deficient = true;
  return out;
}

}  // namespace ross
