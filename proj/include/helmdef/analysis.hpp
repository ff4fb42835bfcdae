// Error measurement and study drivers: continuous and sampled L2 errors,
// mesh-refinement and wave-number sweeps, and operator spectra.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "helmdef/assembly.hpp"
#include "helmdef/linalg.hpp"
#include "helmdef/precond.hpp"

namespace helmdef {

using ScalarField1d = std::function<Complex(double)>;

/// Quadrature L2 error sqrt(integral of |u_h - u|^2) on [0,1]. Elements whose
/// closure touches a point in `exclude` are skipped (kinked point-source
/// solutions would spoil the measured order there).
double l2_error(const DiscreteSystem& sys, const Vec& coefs,
                const ScalarField1d& exact, int points_per_element,
                const std::vector<double>& exclude = {});

/// Pointwise comparison on `samples` equally spaced points spanning [0,1]:
/// Euclidean norm of the difference vector divided by the sample count.
double sampled_error(const DiscreteSystem& sys, const Vec& coefs,
                     const ScalarField1d& exact, int samples = 1000);

struct ConvergenceRow {
  int elements = 0;
  long dofs = 0;
  double quadrature_error = 0.0;
  double sampled = 0.0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  double slope_sampled = 0.0;    // log-log fit vs h, plateau rows excluded
  double slope_quadrature = 0.0;
};

/// Mesh refinement on the travelling-wave problem at fixed k, solved
/// directly; reports both error measures and their fitted orders.
ConvergenceStudy convergence_study(double k, int order,
                                   const std::vector<int>& element_counts,
                                   int samples = 1000);

struct PollutionRow {
  double k = 0.0;
  int order = 0;
  int elements = 0;
  double kh = 0.0;
  long dofs = 0;
  double sampled = 0.0;
  double quadrature_error = 0.0;
};

/// Error at (approximately) fixed resolution kh across wave numbers.
std::vector<PollutionRow> pollution_study(const std::vector<double>& ks,
                                          const std::vector<int>& orders,
                                          double kh_target, int samples = 1000);

/// Which composed operator a spectrum is taken of.
enum class SpectrumKind {
  Plain,            // A itself
  Deflated,         // project(A v)
  DeflatedShifted,  // project(two-grid-inverse(A v))
  Shifted,          // two-grid-inverse(A v)
};

struct SpectrumOptions {
  SpectrumKind kind = SpectrumKind::Deflated;
  double drop = 0.0;
  double beta2 = 1.0;
  int nu = 1;
  double omega = 0.6;
  Eigen::Index dense_cap = 4000;  // refuse larger dense eigenproblems
};

/// Dense spectrum of the composed operator; shifted compositions use the
/// two-grid stand-in for the inverse.
Eigen::VectorXcd operator_spectrum(const DiscreteSystem& sys,
                                   const SpectrumOptions& opt);

/// Least-squares slope of log(error) against log(h), h = 1/elements. Rows
/// with error below `plateau` sit at the floating-point floor and are left
/// out of the fit.
double fit_slope(const std::vector<double>& elements,
                 const std::vector<double>& errors, double plateau = 1e-14);

}  // namespace helmdef
