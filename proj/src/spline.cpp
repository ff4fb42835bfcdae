// SPDX-License-Identifier: Apache-2.0

#include "helmdef/spline.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace helmdef {

KnotVector KnotVector::open_uniform(int n_elements, int degree) {
  if (n_elements < 1 || degree < 1)
    throw std::invalid_argument("knot vector needs n_elements >= 1 and degree >= 1");
  KnotVector kv;
  kv.degree = degree;
  kv.elements = n_elements;
  kv.knots.reserve(n_elements + 1 + 2 * degree);
  for (int i = 0; i < degree; ++i) kv.knots.push_back(0.0);
  for (int i = 0; i <= n_elements; ++i)
    kv.knots.push_back(static_cast<double>(i) / n_elements);
  for (int i = 0; i < degree; ++i) kv.knots.push_back(1.0);
  return kv;
}

int KnotVector::span_of(double x) const {
  if (x >= 1.0) return elements - 1;
  if (x <= 0.0) return 0;
  int e = static_cast<int>(x * elements);
  if (e >= elements) e = elements - 1;
  return e;
}

namespace {

// Half-open support test with closure of the global right end.
bool in_zero_span(const std::vector<double>& t, int j, double x) {
  if (t[j] <= x && x < t[j + 1]) return true;
  // x == 1 belongs to the last non-empty span
  return x == t.back() && t[j] < t[j + 1] && t[j + 1] == t.back();
}

}  // namespace

double bspline_value(const KnotVector& kv, int j, double x) {
  const auto& t = kv.knots;
  const int p = kv.degree;
  assert(j >= 0 && j + p + 1 < static_cast<int>(t.size()));
  // degree-0 seed values over the relevant spans
  std::vector<double> N(p + 1);
  for (int r = 0; r <= p; ++r) N[r] = in_zero_span(t, j + r, x) ? 1.0 : 0.0;
  // triangular recursion; 0/0 := 0
  for (int d = 1; d <= p; ++d) {
    for (int r = 0; r + d <= p; ++r) {
      double left = 0.0, right = 0.0;
      const double den_l = t[j + r + d] - t[j + r];
      const double den_r = t[j + r + d + 1] - t[j + r + 1];
      if (den_l > 0.0) left = (x - t[j + r]) / den_l * N[r];
      if (den_r > 0.0) right = (t[j + r + d + 1] - x) / den_r * N[r + 1];
      N[r] = left + right;
    }
  }
  return N[0];
}

double bspline_derivative(const KnotVector& kv, int j, double x) {
  const auto& t = kv.knots;
  const int p = kv.degree;
  // d/dx N_{j,p} = p * (N_{j,p-1}/(t_{j+p}-t_j) - N_{j+1,p-1}/(t_{j+p+1}-t_{j+1}))
  double left = 0.0, right = 0.0;
  const double den_l = t[j + p] - t[j];
  const double den_r = t[j + p + 1] - t[j + 1];
  if (p == 0) return 0.0;
  if (den_l > 0.0) {
    // value of N_{j,p-1} on the same knot sequence
    KnotVector sub = kv;
    sub.degree = p - 1;
    left = bspline_value(sub, j, x) / den_l;
  }
  if (den_r > 0.0) {
    KnotVector sub = kv;
    sub.degree = p - 1;
    right = bspline_value(sub, j + 1, x) / den_r;
  }
  return p * (left - right);
}

std::vector<int> active_basis(const KnotVector& kv, int element) {
  std::vector<int> idx(kv.degree + 1);
  for (int l = 0; l <= kv.degree; ++l) idx[l] = element + l;
  return idx;
}

std::vector<double> greville_points(const KnotVector& kv) {
  std::vector<double> g(kv.basis_count());
  for (int j = 0; j < kv.basis_count(); ++j) {
    double s = 0.0;
    for (int r = 1; r <= kv.degree; ++r) s += kv.knots[j + r];
    g[j] = s / kv.degree;
  }
  return g;
}

GaussRule GaussRule::legendre(int points) {
  GaussRule rule;
  rule.nodes.resize(points);
  rule.weights.resize(points);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < points; ++i) {
    // Chebyshev initial guess, Newton on P_n(x) = 0
    double x = std::cos(pi * (i + 0.75) / (points + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      if (points == 1) { p1 = x; }
      for (int n = 2; n <= points; ++n) {
        const double p2 = ((2 * n - 1) * x * p1 - (n - 1) * p0) / n;
        p0 = p1;
        p1 = p2;
      }
      const double pn = (points == 1) ? x : p1;
      const double pm = (points == 1) ? 1.0 : p0;
      pp = points * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return rule;
}

}  // namespace helmdef
