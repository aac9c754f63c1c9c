#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "ross/errors.hpp"
#include "ross/fem.hpp"

namespace ross {

namespace {

// M-orthonormalize the columns of X against c and each other (two passes of
// modified Gram-Schmidt).
void m_orthonormalize(Eigen::MatrixXd& x, const Eigen::VectorXd& c, const SparseMatrix& mass) {
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      Eigen::VectorXd mx = mass * x.col(j);
      x.col(j) -= c * c.dot(mx);
      for (Eigen::Index i = 0; i < j; ++i) {
        mx = mass * x.col(j);
        x.col(j) -= x.col(i) * x.col(i).dot(mx);
      }
      mx = mass * x.col(j);
      const double norm = std::sqrt(x.col(j).dot(mx));
      if (!(norm > 0.0)) throw ConvergenceError("subspace iteration: block lost rank");
      x.col(j) /= norm;
    }
  }
}

}  // namespace

SpectrumResult solve_spectrum(const SparseMatrix& stiffness, const SparseMatrix& mass, int q,
                              const EigenOptions& options) {
  const Eigen::Index n = stiffness.rows();
  if (q < 1) throw std::invalid_argument("eigenpair count must be positive");
  if (q > n) throw std::invalid_argument("more eigenpairs requested than mesh vertices");

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd c = ones / std::sqrt(ones.dot(mass * ones));

  SpectrumResult result;
  result.vertex_count = static_cast<std::size_t>(n);
  const double mu0 = c.dot(stiffness * c);
  result.eigenvalues.push_back(mu0);
  result.residuals.push_back((stiffness * c - mu0 * (mass * c)).norm() / (mass * c).norm());
  result.eigenvectors.resize(n, q);
  result.eigenvectors.col(0) = c;
  if (q == 1) return result;

  double ratio = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) ratio = std::max(ratio, stiffness.coeff(i, i) / mass.coeff(i, i));
  const double sigma = -1e-4 * ratio;
  const SparseMatrix shifted = stiffness - sigma * mass;
  Eigen::SimplicialLDLT<SparseMatrix> solver(shifted);
  if (solver.info() != Eigen::Success) throw ConvergenceError("factorization of K - sigma M failed");

  const Eigen::Index wanted = q - 1;
  const Eigen::Index block = std::min<Eigen::Index>(wanted + options.extra_block, n - 1);
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(n, block);
  for (Eigen::Index j = 0; j < block; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = normal(rng);
  }
  m_orthonormalize(x, c, mass);

  std::ostringstream history;
  Eigen::VectorXd theta;
  std::vector<double> residuals(static_cast<std::size_t>(wanted), 0.0);
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    Eigen::MatrixXd y = solver.solve(mass * x);
    m_orthonormalize(y, c, mass);
    const Eigen::MatrixXd kr = y.transpose() * (stiffness * y);
    Eigen::MatrixXd mr = y.transpose() * (mass * y);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ritz(0.5 * (kr + kr.transpose()),
                                                                  0.5 * (mr + mr.transpose()));
    if (ritz.info() != Eigen::Success) throw ConvergenceError("Rayleigh-Ritz step failed");
    theta = ritz.eigenvalues();
    x = y * ritz.eigenvectors();

    double worst = 0.0;
    for (Eigen::Index j = 0; j < wanted; ++j) {
      const Eigen::VectorXd mx = mass * x.col(j);
      const double r = (stiffness * x.col(j) - theta(j) * mx).norm() / ((1.0 + std::abs(theta(j))) * mx.norm());
      residuals[static_cast<std::size_t>(j)] = r;
      worst = std::max(worst, r);
    }
    history << ' ' << worst;
    result.iterations = iter;
    if (worst <= options.residual_tol) {
      for (Eigen::Index j = 0; j < wanted; ++j) {
        result.eigenvalues.push_back(theta(j));
        result.residuals.push_back(residuals[static_cast<std::size_t>(j)]);
        Eigen::VectorXd v = x.col(j);
        // fix the sign: largest-magnitude entry positive
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0.0) v = -v;
        result.eigenvectors.col(j + 1) = v;
      }
      return result;
    }
  }
  throw ConvergenceError("subspace iteration did not converge in " + std::to_string(options.max_iterations) +
                         " iterations; residual history:" + history.str());
}

}  // namespace ross
