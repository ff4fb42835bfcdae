// Krylov and direct solvers for complex sparse systems, plus dense
// materialization helpers for spectral studies.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <functional>
#include <vector>

#include "helmdef/assembly.hpp"

namespace helmdef {

using LinearOp = std::function<Vec(const Vec&)>;

/// Residual monitor evaluated on each GMRES iterate; the method stops once
/// it reaches the tolerance. Left preconditioning changes the operator but
/// not the monitor, so stopping stays tied to the original system.
using ResidualFn = std::function<double(const Vec&)>;

struct GmresOptions {
  int max_iterations = 100;
  double tolerance = 1e-7;
};

struct GmresResult {
  Vec solution;
  int iterations = 0;
  bool converged = false;
  std::vector<double> residuals;  // monitored residual after each step
};

/// Unrestarted GMRES with modified Gram-Schmidt and Givens rotations.
/// The Arnoldi recursion runs on `op`; after every step the current iterate
/// is assembled and `monitor` decides convergence, so the iteration count is
/// exact with respect to the reported residual rather than the recurrence
/// estimate of the preconditioned system.
GmresResult gmres(const LinearOp& op, const Vec& rhs, const Vec& start,
                  const ResidualFn& monitor, const GmresOptions& opt = {});

/// Sparse LU wrapper: factorizes once, solves many; throws on failure.
class DirectSolver {
 public:
  explicit DirectSolver(const SpMat& m);
  Vec solve(const Vec& b) const;
  Eigen::Index size() const { return n_; }

 private:
  Eigen::SparseLU<SpMat> lu_;
  Eigen::Index n_ = 0;
};

/// Maximum absolute column sum.
double one_norm(const SpMat& m);

/// Apply op to every identity column; for dense spectral studies only.
Eigen::MatrixXcd materialize(const LinearOp& op, Eigen::Index n);

/// All eigenvalues of a dense complex matrix.
Eigen::VectorXcd spectrum(const Eigen::MatrixXcd& m);

}  // namespace helmdef
