// SPDX-License-Identifier: Apache-2.0

#include "helmdef/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "helmdef/problems.hpp"

namespace helmdef {

namespace {

Vec embed_with_lift(const DiscreteSystem& sys, const Vec& coefs) {
  Vec full = sys.lift;
  for (size_t i = 0; i < sys.kept.size(); ++i) full(sys.kept[i]) += coefs(i);
  return full;
}

Complex eval_full(const DiscreteSystem& sys, const Vec& full, double x) {
  const int p = sys.kv.degree;
  const int e = sys.kv.span_of(x);
  Complex u = 0.0;
  for (int l = 0; l <= p; ++l)
    u += full(e + l) * bspline_value(sys.kv, e + l, x);
  return u;
}

}  // namespace

double l2_error(const DiscreteSystem& sys, const Vec& coefs,
                const ScalarField1d& exact, int points_per_element,
                const std::vector<double>& exclude) {
  if (sys.dim != Dimension::One)
    throw std::logic_error("error quadrature is implemented for 1D systems");
  const Vec full = embed_with_lift(sys, coefs);
  const auto rule = GaussRule::legendre(points_per_element);
  const double h = 1.0 / sys.kv.elements;
  double acc = 0.0;
  for (int e = 0; e < sys.kv.elements; ++e) {
    const double a = e * h, b = (e + 1) * h;
    bool skip = false;
    for (double pt : exclude)
      if (pt >= a - 1e-14 && pt <= b + 1e-14) skip = true;
    if (skip) continue;
    for (size_t q = 0; q < rule.nodes.size(); ++q) {
      const double x = a + 0.5 * h * (rule.nodes[q] + 1.0);
      const double w = 0.5 * h * rule.weights[q];
      acc += w * std::norm(eval_full(sys, full, x) - exact(x));
    }
  }
  return std::sqrt(acc);
}

double sampled_error(const DiscreteSystem& sys, const Vec& coefs,
                     const ScalarField1d& exact, int samples) {
  if (sys.dim != Dimension::One)
    throw std::logic_error("sampled error is implemented for 1D systems");
  const Vec full = embed_with_lift(sys, coefs);
  double acc = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = static_cast<double>(i) / (samples - 1);
    acc += std::norm(eval_full(sys, full, x) - exact(x));
  }
  return std::sqrt(acc) / samples;
}

double fit_slope(const std::vector<double>& elements,
                 const std::vector<double>& errors, double plateau) {
  std::vector<double> xs, ys;
  for (size_t i = 0; i < elements.size(); ++i) {
    if (errors[i] < plateau) continue;
    xs.push_back(std::log(1.0 / elements[i]));
    ys.push_back(std::log(errors[i]));
  }
  if (xs.size() < 2)
    throw std::domain_error("slope fit needs at least two levels above the floor");
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  return num / den;
}

ConvergenceStudy convergence_study(double k, int order,
                                   const std::vector<int>& element_counts,
                                   int samples) {
  ConvergenceStudy study;
  std::vector<double> ns, sampled_errs, quad_errs;
  for (int n : element_counts) {
    const Problem pb = travelling_wave_1d(n, order, k);
    const DiscreteSystem sys = assemble(pb);
    const DirectSolver lu(sys.A);
    const Vec x = lu.solve(sys.rhs);
    const auto exact = [k](double t) { return plane_wave(k, t); };
    ConvergenceRow row;
    row.elements = n;
    row.dofs = sys.A.rows();
    row.sampled = sampled_error(sys, x, exact, samples);
    row.quadrature_error = l2_error(sys, x, exact, order + 2);
    study.rows.push_back(row);
    ns.push_back(n);
    sampled_errs.push_back(row.sampled);
    quad_errs.push_back(row.quadrature_error);
  }
  study.slope_sampled = fit_slope(ns, sampled_errs);
  study.slope_quadrature = fit_slope(ns, quad_errs);
  return study;
}

std::vector<PollutionRow> pollution_study(const std::vector<double>& ks,
                                          const std::vector<int>& orders,
                                          double kh_target, int samples) {
  std::vector<PollutionRow> rows;
  for (int p : orders) {
    for (double k : ks) {
      const int n = resolution_for(k, kh_target);
      const Problem pb = travelling_wave_1d(n, p, k);
      const DiscreteSystem sys = assemble(pb);
      const DirectSolver lu(sys.A);
      const Vec x = lu.solve(sys.rhs);
      const auto exact = [k](double t) { return plane_wave(k, t); };
      PollutionRow row;
      row.k = k;
      row.order = p;
      row.elements = n;
      row.kh = k / n;
      row.dofs = sys.A.rows();
      row.sampled = sampled_error(sys, x, exact, samples);
      row.quadrature_error = l2_error(sys, x, exact, p + 2);
      rows.push_back(row);
    }
  }
  return rows;
}

Eigen::VectorXcd operator_spectrum(const DiscreteSystem& sys,
                                   const SpectrumOptions& opt) {
  const Eigen::Index n = sys.A.rows();
  if (n > opt.dense_cap)
    throw std::invalid_argument("system exceeds the dense spectrum cap");

  std::shared_ptr<Deflation> defl;
  if (opt.kind == SpectrumKind::Deflated ||
      opt.kind == SpectrumKind::DeflatedShifted) {
    SpMatR z1 = halving_stencil(sys.per_dim, opt.drop);
    SpMatR z = sys.dim == Dimension::Two ? kron_real(z1, z1) : z1;
    defl = std::make_shared<Deflation>(sys.A, z);
  }
  std::shared_ptr<TwoGridProxy> proxy;
  if (opt.kind == SpectrumKind::Shifted ||
      opt.kind == SpectrumKind::DeflatedShifted) {
    proxy = std::make_shared<TwoGridProxy>(shifted_operator(sys, opt.beta2),
                                           sys.per_dim, sys.dim, opt.omega,
                                           opt.nu);
  }
  const SpMat* A = &sys.A;
  const LinearOp op = [A, defl, proxy](const Vec& v) {
    Vec w = (*A) * v;
    if (proxy) w = proxy->apply(w);
    if (defl) w = defl->project(w);
    return w;
  };
  return spectrum(materialize(op, n));
}

}  // namespace helmdef
