// SPDX-License-Identifier: Apache-2.0

#include "helmdef/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace helmdef {

GmresResult gmres(const LinearOp& op, const Vec& rhs, const Vec& start,
                  const ResidualFn& monitor, const GmresOptions& opt) {
  const Eigen::Index n = rhs.size();
  const int maxit = opt.max_iterations;
  GmresResult res;
  res.solution = start.size() ? start : Vec::Zero(n);

  const double r0 = monitor(res.solution);
  if (r0 <= opt.tolerance) {
    res.converged = true;
    res.residuals.push_back(r0);
    return res;
  }

  Vec r = rhs - op(res.solution);
  double beta = r.norm();
  if (beta == 0.0) {
    res.converged = monitor(res.solution) <= opt.tolerance;
    return res;
  }

  std::vector<Vec> V;
  V.reserve(maxit + 1);
  V.push_back(r / beta);
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(maxit + 1, maxit);
  Vec g = Vec::Zero(maxit + 1);
  g(0) = beta;
  Vec cs = Vec::Zero(maxit), sn = Vec::Zero(maxit);

  const Vec x0 = res.solution;
  for (int j = 0; j < maxit; ++j) {
    Vec w = op(V[j]);
    for (int i = 0; i <= j; ++i) {
      H(i, j) = V[i].dot(w);  // conjugates V[i]
      w -= H(i, j) * V[i];
    }
    const double hnew = w.norm();
    H(j + 1, j) = hnew;

    for (int i = 0; i < j; ++i) {
      const Complex t = cs(i) * H(i, j) + sn(i) * H(i + 1, j);
      H(i + 1, j) = -std::conj(sn(i)) * H(i, j) + std::conj(cs(i)) * H(i + 1, j);
      H(i, j) = t;
    }
    const double denom =
        std::sqrt(std::norm(H(j, j)) + std::norm(H(j + 1, j)));
    if (denom == 0.0) {
      cs(j) = 1.0;
      sn(j) = 0.0;
    } else {
      cs(j) = std::conj(H(j, j)) / denom;
      sn(j) = std::conj(H(j + 1, j)) / denom;
    }
    H(j, j) = cs(j) * H(j, j) + sn(j) * H(j + 1, j);
    H(j + 1, j) = 0.0;
    g(j + 1) = -std::conj(sn(j)) * g(j);
    g(j) = cs(j) * g(j);

    res.iterations = j + 1;

    // form the iterate: back substitution on the rotated Hessenberg
    const int m = j + 1;
    Vec y(m);
    for (int i = m - 1; i >= 0; --i) {
      Complex s = g(i);
      for (int l = i + 1; l < m; ++l) s -= H(i, l) * y(l);
      y(i) = s / H(i, i);
    }
    Vec x = x0;
    for (int i = 0; i < m; ++i) x += y(i) * V[i];
    res.solution = x;

    const double rr = monitor(x);
    res.residuals.push_back(rr);
    if (rr <= opt.tolerance) {
      res.converged = true;
      break;
    }
    if (hnew < 1e-300) break;  // Krylov space exhausted
    if (j + 1 < maxit) V.push_back(w / hnew);
  }
  return res;
}

DirectSolver::DirectSolver(const SpMat& m) : n_(m.rows()) {
  SpMat c = m;
  c.makeCompressed();
  lu_.compute(c);
  if (lu_.info() != Eigen::Success)
    throw std::runtime_error("sparse LU factorization failed");
}

Vec DirectSolver::solve(const Vec& b) const { return lu_.solve(b); }

double one_norm(const SpMat& m) {
  double best = 0.0;
  for (int c = 0; c < m.outerSize(); ++c) {
    double s = 0.0;
    for (SpMat::InnerIterator it(m, c); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

Eigen::MatrixXcd materialize(const LinearOp& op, Eigen::Index n) {
  Eigen::MatrixXcd out(n, n);
  Vec e = Vec::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    e(j) = 1.0;
    out.col(j) = op(e);
    e(j) = 0.0;
  }
  return out;
}

Eigen::VectorXcd spectrum(const Eigen::MatrixXcd& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigenvalue computation failed");
  return es.eigenvalues();
}

}  // namespace helmdef
