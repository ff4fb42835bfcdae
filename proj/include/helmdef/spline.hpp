// B-spline basis on open uniform knot vectors: Cox-de Boor evaluation,
// derivatives, Gauss-Legendre quadrature and Greville abscissae.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace helmdef {

/// Open uniform knot vector on [0,1]: end knots repeated degree+1 times,
/// interior knots equally spaced. basis_count() == elements + degree.
struct KnotVector {
  int degree = 1;
  int elements = 1;
  std::vector<double> knots;

  static KnotVector open_uniform(int n_elements, int degree);

  int basis_count() const { return elements + degree; }

  /// Index of the knot span containing x; the last span is closed at x = 1.
  int span_of(double x) const;
};

/// Cox-de Boor recursion for basis function j of kv.degree at x.
/// 0/0 terms are dropped; the support of the last function is closed at x = 1.
double bspline_value(const KnotVector& kv, int j, double x);

/// First derivative of basis function j at x.
double bspline_derivative(const KnotVector& kv, int j, double x);

/// Global indices of the degree+1 basis functions supported on an element.
std::vector<int> active_basis(const KnotVector& kv, int element);

/// Greville abscissae: knot averages, one per basis function.
std::vector<double> greville_points(const KnotVector& kv);

/// Gauss-Legendre rule on [-1,1]; nodes by Newton iteration on P_n.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  static GaussRule legendre(int points);
};

}  // namespace helmdef
