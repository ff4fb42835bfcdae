// Galerkin assembly of the Helmholtz operator in the B-spline basis:
// 1D stiffness/mass/boundary terms, tensor-product 2D forms, Dirichlet
// elimination with lifting, and point-source load vectors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <complex>
#include <vector>

#include "helmdef/problems.hpp"
#include "helmdef/spline.hpp"

namespace helmdef {

using SpMatR = Eigen::SparseMatrix<double>;
using SpMat = Eigen::SparseMatrix<Complex>;
using Vec = Eigen::VectorXcd;

/// 1D bilinear forms on the full (uneliminated) basis.
struct Forms1d {
  SpMatR stiffness;  // integral of phi_i' phi_j'
  SpMatR mass;       // integral of phi_i phi_j
  KnotVector kv;
};

/// Assemble 1D stiffness and mass with a degree+1 point Gauss rule per element.
Forms1d assemble_forms_1d(int elements, int order);

/// 1D mass restricted to [x0, x1]: each element's overlap with the interval
/// gets its own Gauss rule, so band edges may fall inside elements. Used for
/// piecewise-constant weighted mass matrices.
SpMatR assemble_mass_on_interval(const KnotVector& kv, double x0, double x1);

/// Kronecker product with `inner` varying fastest (row = ro*inner.rows()+ri).
SpMat kron(const SpMat& outer, const SpMat& inner);

/// Fully assembled, boundary-eliminated linear system plus the pieces the
/// preconditioners need. For 2D problems the kept set is the tensor square
/// of the kept 1D basis, x fastest.
struct DiscreteSystem {
  SpMat A;           // eliminated Helmholtz operator
  Vec rhs;
  SpMat shift_mass;  // eliminated mass weighted by k^2 (variable fields folded in)
  Dimension dim = Dimension::One;
  int per_dim = 0;   // retained basis functions per direction
  KnotVector kv;
  std::vector<int> kept;  // retained 1D basis indices
  Vec lift;               // full 1D coefficient vector carrying Dirichlet data
};

DiscreteSystem assemble(const Problem& pb);

/// Value of the numeric solution at x (1D): lifting plus retained coefficients.
Complex evaluate_solution_1d(const DiscreteSystem& sys, const Vec& x, double at);

}  // namespace helmdef
