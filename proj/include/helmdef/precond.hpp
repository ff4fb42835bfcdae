// Preconditioner stack: quadratic-Bezier two-level deflation, the complex
// shifted operator with exact or multigrid inversion, and the composed
// left-preconditioned operator handed to GMRES.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <vector>

#include "helmdef/assembly.hpp"
#include "helmdef/linalg.hpp"

namespace helmdef {

/// Bernstein polynomial b_{j,n}(t) = C(n,j) t^j (1-t)^(n-j).
double bernstein(int degree, int index, double t);

/// Rational Bezier curve value: sum w_j b_j(t) P_j / sum w_j b_j(t).
/// Throws when the weight sum degenerates.
double rational_bezier(const std::vector<double>& points,
                       const std::vector<double>& weights, double t);

/// Two-level transfer built from the quadratic-Bezier midpoint rule.
/// With 1-based fine index j and coarse index c: even rows carry
/// 1/8 * (1, 6-drop, 1) on c = (j-2)/2, j/2, (j+2)/2; odd rows carry
/// 1/2 * (1, 1) on c = (j-1)/2, (j+1)/2; out-of-range entries vanish.
/// Coarse dimension is fine/2 rounded down.
SpMatR halving_stencil(Eigen::Index fine, double drop);

/// Linear-interpolation transfer used by the multigrid hierarchy: even fine
/// rows inject, odd rows average the two coarse neighbours.
SpMatR linear_stencil(Eigen::Index fine);

/// Kronecker product with `inner` varying fastest, real version.
SpMatR kron_real(const SpMatR& outer, const SpMatR& inner);

/// Galerkin coarse-space projection Q = Z E^{-1} Z^T with E = Z^T A Z.
/// Holds a reference to A; the owning system must outlive this object.
class Deflation {
 public:
  Deflation(const SpMat& A, const SpMatR& transfer);

  Vec apply_Q(const Vec& v) const;  // Z E^{-1} Z^T v
  Vec project(const Vec& w) const;  // w - Q(A w)
  Vec coarse_start(const Vec& rhs) const { return apply_Q(rhs); }

  const SpMat& transfer() const { return Z_; }
  Eigen::Index coarse_size() const { return Z_.cols(); }

 private:
  const SpMat* A_;
  SpMat Z_;
  Eigen::SparseLU<SpMat> E_;
};

struct MultigridOptions {
  double omega = 0.6;   // Jacobi damping
  int smooth_steps = 1; // pre- and post-smoothing sweeps
  int coarsest = 32;    // per-dimension size solved directly
};

/// Geometric multigrid on Galerkin-coarsened matrices. Coarsening halves the
/// retained size per dimension via the linear transfer; 2D levels use the
/// Kronecker square of the 1D transfer.
class Multigrid {
 public:
  Multigrid(const SpMat& fine, Eigen::Index per_dim, Dimension dim,
            const MultigridOptions& opt = {});

  /// One V-cycle on the finest level.
  Vec vcycle(const Vec& rhs, Vec x) const;
  /// `cycles` V-cycles starting from zero.
  Vec solve(const Vec& rhs, int cycles) const;

  int levels() const { return static_cast<int>(mats_.size()); }
  const SpMat& level_matrix(int level) const { return mats_[level]; }
  const SpMatR& level_transfer(int level) const { return transfers_[level]; }
  Vec smooth(int level, const Vec& rhs, Vec x, int steps) const;

 private:
  Vec cycle_at(int level, const Vec& rhs, Vec x) const;

  std::vector<SpMat> mats_;
  std::vector<SpMatR> transfers_;  // level l -> l+1
  std::vector<SpMat> trans_c_;     // complex casts used in the cycle
  std::vector<Vec> inv_diag_;
  std::unique_ptr<DirectSolver> coarse_;
  MultigridOptions opt_;
};

/// A + i*beta2*(k^2-weighted mass); the imaginary shift that makes the
/// operator multigrid-invertible.
SpMat shifted_operator(const DiscreteSystem& sys, double beta2);

/// Two-grid stand-in for the inverse of the shifted operator, used by the
/// spectral studies: smooth^nu, coarse correction, smooth^nu as written.
class TwoGridProxy {
 public:
  TwoGridProxy(const SpMat& M, Eigen::Index per_dim, Dimension dim,
               double omega, int nu);
  Vec apply(const Vec& v) const;

 private:
  SpMat M_;
  SpMat Z_;
  Vec inv_diag_;
  Eigen::SparseLU<SpMat> coarse_;
  double omega_;
  int nu_;
};

/// Machine-independent work counters accumulated across one solve.
struct OperationCounts {
  long matvecs = 0;       // applications of A
  long coarse_solves = 0; // deflation E-solves
  long shift_solves = 0;  // shifted-operator inversions (exact or MG)
  long vcycles = 0;       // V-cycles inside those inversions
};

/// Preconditioner selection for one run.
struct PrecondSpec {
  bool deflate = false;
  double drop = 0.0;  // stencil weight adjustment on even rows
  bool shift = false;
  double beta2 = 1.0;
  int cycles = 0;  // 0 = exact factorization, else V-cycles per application
  int smooth_steps = 1;
  double omega = 0.6;
};

/// Composed operator, transformed right-hand side, start vector, and the
/// true-residual monitor. Holds shared ownership of the preconditioner
/// pieces so the closures stay valid; `sys` must outlive the setup.
struct SolverSetup {
  LinearOp op;
  Vec rhs;
  Vec start;
  ResidualFn monitor;
  std::shared_ptr<Deflation> deflation;
  std::shared_ptr<Multigrid> multigrid;
  std::shared_ptr<DirectSolver> shift_solver;
  std::shared_ptr<OperationCounts> counts;
};

/// Build the left-preconditioned chain: apply A, invert the shifted
/// operator, then the deflation projection. Deflated setups start from the
/// coarse-space solution so the projected-out component is already in place.
SolverSetup compose(const DiscreteSystem& sys, const PrecondSpec& spec);

}  // namespace helmdef
