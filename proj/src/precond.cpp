// SPDX-License-Identifier: Apache-2.0

#include "helmdef/precond.hpp"

#include <cmath>
#include <stdexcept>

namespace helmdef {

double bernstein(int degree, int index, double t) {
  if (index < 0 || index > degree) return 0.0;
  double binom = 1.0;
  for (int i = 0; i < index; ++i)
    binom = binom * (degree - i) / (i + 1);
  return binom * std::pow(t, index) * std::pow(1.0 - t, degree - index);
}

double rational_bezier(const std::vector<double>& points,
                       const std::vector<double>& weights, double t) {
  if (points.size() != weights.size() || points.empty())
    throw std::invalid_argument("rational_bezier needs matching nonempty lists");
  const int degree = static_cast<int>(points.size()) - 1;
  double num = 0.0, den = 0.0;
  for (int j = 0; j <= degree; ++j) {
    const double wb = weights[j] * bernstein(degree, j, t);
    num += wb * points[j];
    den += wb;
  }
  if (std::abs(den) < 1e-14)
    throw std::domain_error("rational_bezier weight sum degenerates");
  return num / den;
}

SpMatR halving_stencil(Eigen::Index fine, double drop) {
  const Eigen::Index coarse = fine / 2;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(3 * fine);
  for (Eigen::Index j = 1; j <= fine; ++j) {
    const auto push = [&](Eigen::Index c, double w) {
      if (c >= 1 && c <= coarse)
        trip.emplace_back(j - 1, c - 1, w);
    };
    if (j % 2 == 0) {
      push((j - 2) / 2, 1.0 / 8.0);
      push(j / 2, (6.0 - drop) / 8.0);
      push((j + 2) / 2, 1.0 / 8.0);
    } else {
      push((j - 1) / 2, 0.5);
      push((j + 1) / 2, 0.5);
    }
  }
  SpMatR z(fine, coarse);
  z.setFromTriplets(trip.begin(), trip.end());
  return z;
}

SpMatR linear_stencil(Eigen::Index fine) {
  const Eigen::Index coarse = fine / 2;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(2 * fine);
  for (Eigen::Index j = 1; j <= fine; ++j) {
    const auto push = [&](Eigen::Index c, double w) {
      if (c >= 1 && c <= coarse)
        trip.emplace_back(j - 1, c - 1, w);
    };
    if (j % 2 == 0) {
      push(j / 2, 1.0);
    } else {
      push((j - 1) / 2, 0.5);
      push((j + 1) / 2, 0.5);
    }
  }
  SpMatR z(fine, coarse);
  z.setFromTriplets(trip.begin(), trip.end());
  return z;
}

SpMatR kron_real(const SpMatR& outer, const SpMatR& inner) {
  SpMatR out(outer.rows() * inner.rows(), outer.cols() * inner.cols());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(outer.nonZeros()) * inner.nonZeros());
  for (int co = 0; co < outer.outerSize(); ++co)
    for (SpMatR::InnerIterator ito(outer, co); ito; ++ito)
      for (int ci = 0; ci < inner.outerSize(); ++ci)
        for (SpMatR::InnerIterator iti(inner, ci); iti; ++iti)
          trip.emplace_back(ito.row() * inner.rows() + iti.row(),
                            ito.col() * inner.cols() + iti.col(),
                            ito.value() * iti.value());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

Deflation::Deflation(const SpMat& A, const SpMatR& transfer)
    : A_(&A), Z_(transfer.cast<Complex>()) {
  SpMat E = (Z_.transpose() * A * Z_).pruned();
  E.makeCompressed();
  E_.compute(E);
  if (E_.info() != Eigen::Success)
    throw std::runtime_error("coarse operator factorization failed");
}

Vec Deflation::apply_Q(const Vec& v) const {
  return Z_ * E_.solve(Z_.transpose() * v);
}

Vec Deflation::project(const Vec& w) const {
  return w - apply_Q((*A_) * w);
}

Multigrid::Multigrid(const SpMat& fine, Eigen::Index per_dim, Dimension dim,
                     const MultigridOptions& opt)
    : opt_(opt) {
  mats_.push_back(fine);
  Eigen::Index n = per_dim;
  while (n > opt_.coarsest) {
    SpMatR z1 = linear_stencil(n);
    SpMatR z = dim == Dimension::Two ? kron_real(z1, z1) : z1;
    SpMat zc = z.cast<Complex>();
    SpMat next = (zc.transpose() * mats_.back() * zc).pruned();
    transfers_.push_back(std::move(z));
    trans_c_.push_back(std::move(zc));
    mats_.push_back(std::move(next));
    n = z1.cols();
  }
  for (const auto& m : mats_) {
    Vec d = m.diagonal();
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      if (d(i) == Complex(0.0)) throw std::runtime_error("zero diagonal in smoother");
      d(i) = 1.0 / d(i);
    }
    inv_diag_.push_back(std::move(d));
  }
  coarse_ = std::make_unique<DirectSolver>(mats_.back());
}

Vec Multigrid::smooth(int level, const Vec& rhs, Vec x, int steps) const {
  const SpMat& m = mats_[level];
  const Vec& dinv = inv_diag_[level];
  for (int s = 0; s < steps; ++s)
    x += Complex(opt_.omega) * dinv.cwiseProduct(rhs - m * x);
  return x;
}

Vec Multigrid::cycle_at(int level, const Vec& rhs, Vec x) const {
  if (level == levels() - 1) return coarse_->solve(rhs);
  x = smooth(level, rhs, std::move(x), opt_.smooth_steps);
  const Vec r = rhs - mats_[level] * x;
  const SpMat& z = trans_c_[level];
  const Vec rc = z.transpose() * r;
  const Vec ec = cycle_at(level + 1, rc, Vec::Zero(rc.size()));
  x += z * ec;
  return smooth(level, rhs, std::move(x), opt_.smooth_steps);
}

Vec Multigrid::vcycle(const Vec& rhs, Vec x) const {
  return cycle_at(0, rhs, std::move(x));
}

Vec Multigrid::solve(const Vec& rhs, int cycles) const {
  Vec x = Vec::Zero(rhs.size());
  for (int c = 0; c < cycles; ++c) x = vcycle(rhs, std::move(x));
  return x;
}

SpMat shifted_operator(const DiscreteSystem& sys, double beta2) {
  return sys.A + Complex(0.0, beta2) * sys.shift_mass;
}

TwoGridProxy::TwoGridProxy(const SpMat& M, Eigen::Index per_dim, Dimension dim,
                           double omega, int nu)
    : M_(M), omega_(omega), nu_(nu) {
  SpMatR z1 = linear_stencil(per_dim);
  Z_ = (dim == Dimension::Two ? kron_real(z1, z1) : z1).cast<Complex>();
  SpMat coarse = (Z_.transpose() * M_ * Z_).pruned();
  coarse.makeCompressed();
  coarse_.compute(coarse);
  if (coarse_.info() != Eigen::Success)
    throw std::runtime_error("coarse shifted operator factorization failed");
  inv_diag_ = M_.diagonal();
  for (Eigen::Index i = 0; i < inv_diag_.size(); ++i)
    inv_diag_(i) = 1.0 / inv_diag_(i);
}

Vec TwoGridProxy::apply(const Vec& v) const {
  const auto smooth_factor = [&](Vec w) {
    for (int s = 0; s < nu_; ++s)
      w -= Complex(omega_) * inv_diag_.cwiseProduct(M_ * w);
    return w;
  };
  Vec w = smooth_factor(v);
  const Vec ec = coarse_.solve(Z_.transpose() * w);
  w -= Z_ * ec;
  return smooth_factor(std::move(w));
}

SolverSetup compose(const DiscreteSystem& sys, const PrecondSpec& spec) {
  SolverSetup setup;
  setup.counts = std::make_shared<OperationCounts>();
  const SpMat* A = &sys.A;

  LinearOp shift_inverse;
  if (spec.shift) {
    const SpMat M = shifted_operator(sys, spec.beta2);
    if (spec.cycles <= 0) {
      setup.shift_solver = std::make_shared<DirectSolver>(M);
      auto lu = setup.shift_solver;
      auto counts = setup.counts;
      shift_inverse = [lu, counts](const Vec& v) {
        ++counts->shift_solves;
        return lu->solve(v);
      };
    } else {
      MultigridOptions opt;
      opt.omega = spec.omega;
      opt.smooth_steps = spec.smooth_steps;
      setup.multigrid = std::make_shared<Multigrid>(M, sys.per_dim, sys.dim, opt);
      auto mg = setup.multigrid;
      auto counts = setup.counts;
      const int cycles = spec.cycles;
      shift_inverse = [mg, counts, cycles](const Vec& v) {
        ++counts->shift_solves;
        counts->vcycles += cycles;
        return mg->solve(v, cycles);
      };
    }
  }

  if (spec.deflate) {
    SpMatR z1 = halving_stencil(sys.per_dim, spec.drop);
    SpMatR z = sys.dim == Dimension::Two ? kron_real(z1, z1) : z1;
    setup.deflation = std::make_shared<Deflation>(sys.A, z);
  }

  auto defl = setup.deflation;
  auto counts = setup.counts;
  setup.op = [A, shift_inverse, defl, counts](const Vec& v) {
    ++counts->matvecs;
    Vec w = (*A) * v;
    if (shift_inverse) w = shift_inverse(w);
    if (defl) {
      ++counts->coarse_solves;
      w = defl->project(w);
    }
    return w;
  };

  Vec b = sys.rhs;
  if (shift_inverse) b = shift_inverse(b);
  if (defl) {
    ++counts->coarse_solves;
    b = defl->project(b);
  }
  setup.rhs = std::move(b);

  setup.start = defl ? defl->coarse_start(sys.rhs) : Vec::Zero(sys.rhs.size());
  if (defl) ++counts->coarse_solves;

  const double fnorm = sys.rhs.norm();
  const Vec f = sys.rhs;
  setup.monitor = [A, f, fnorm](const Vec& x) {
    const double scale = fnorm > 0.0 ? fnorm : 1.0;
    return (f - (*A) * x).norm() / scale;
  };
  return setup;
}

}  // namespace helmdef
