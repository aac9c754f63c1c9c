#pragma once

// P1 Neumann eigenproblem K u = mu M u on a mesh in a conformal chart. In two
// dimensions the Dirichlet energy is conformally invariant, so K is the flat
// stiffness matrix; only M carries lambda^2.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <string>
#include <vector>

#include "ross/conformal_model.hpp"
#include "ross/mesh.hpp"

namespace ross {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct FemSystem {
  SparseMatrix stiffness;
  SparseMatrix mass;
};

struct AssemblyOptions {
  unsigned threads = 0;  // 0: hardware concurrency
};

FemSystem assemble(const ConformalModel& model, const Mesh& mesh, const AssemblyOptions& options = {});

/// Flat P1 stiffness alone, for the conformal-invariance check.
SparseMatrix assemble_flat_stiffness(const Mesh& mesh);

struct SpectrumResult {
  std::vector<double> eigenvalues;  // mu_0 = 0 (constant) <= mu_1 <= ...
  Eigen::MatrixXd eigenvectors;     // columns, M-orthonormal, vertex sampled
  std::vector<double> residuals;    // ||K u - mu M u|| / ((1 + mu) ||M u||)
  double h_max = 0.0;
  std::size_t vertex_count = 0;
  std::string model;
  int iterations = 0;
};

struct EigenOptions {
  int max_iterations = 500;
  double residual_tol = 1e-8;
  int extra_block = 6;
};

/// The q smallest eigenpairs (including the constant mode) by shift-invert
/// subspace iteration with the constant vector deflated.
SpectrumResult solve_spectrum(const SparseMatrix& stiffness, const SparseMatrix& mass, int q,
                              const EigenOptions& options = {});

}  // namespace ross
