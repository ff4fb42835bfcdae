// SPDX-License-Identifier: Apache-2.0

#include "helmdef/assembly.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace helmdef {

namespace {

using Triplet = Eigen::Triplet<double>;
using TripletC = Eigen::Triplet<Complex>;

// Local element matrices for one element: values and derivatives of the
// degree+1 active functions at the mapped Gauss points.
struct LocalMats {
  Eigen::MatrixXd stiffness;
  Eigen::MatrixXd mass;
};

LocalMats local_mats(const KnotVector& kv, const GaussRule& rule, int element) {
  const int p = kv.degree;
  const int nq = static_cast<int>(rule.nodes.size());
  const double h = 1.0 / kv.elements;
  const double a = element * h;
  const auto idx = active_basis(kv, element);
  Eigen::MatrixXd vals(nq, p + 1), ders(nq, p + 1);
  Eigen::VectorXd w(nq);
  for (int q = 0; q < nq; ++q) {
    const double x = a + 0.5 * h * (rule.nodes[q] + 1.0);
    w(q) = 0.5 * h * rule.weights[q];
    for (int l = 0; l <= p; ++l) {
      vals(q, l) = bspline_value(kv, idx[l], x);
      ders(q, l) = bspline_derivative(kv, idx[l], x);
    }
  }
  LocalMats lm;
  lm.stiffness = ders.transpose() * w.asDiagonal() * ders;
  lm.mass = vals.transpose() * w.asDiagonal() * vals;
  return lm;
}

// Uniform open knot vectors repeat the same interior element matrices;
// only the first/last `degree` elements differ.
class LocalCache {
 public:
  LocalCache(const KnotVector& kv, const GaussRule& rule) : kv_(kv), rule_(rule) {}
  const LocalMats& get(int element) {
    const int p = kv_.degree;
    const bool interior = element >= p && element < kv_.elements - p;
    if (interior) {
      if (!have_interior_) {
        interior_ = local_mats(kv_, rule_, std::min(p, kv_.elements - 1));
        have_interior_ = true;
      }
      return interior_;
    }
    auto it = boundary_.find(element);
    if (it == boundary_.end())
      it = boundary_.emplace(element, local_mats(kv_, rule_, element)).first;
    return it->second;
  }

 private:
  const KnotVector& kv_;
  const GaussRule& rule_;
  bool have_interior_ = false;
  LocalMats interior_;
  std::map<int, LocalMats> boundary_;
};

SpMatR reduce(const SpMatR& full, const std::vector<int>& kept) {
  std::vector<int> pos(full.rows(), -1);
  for (size_t i = 0; i < kept.size(); ++i) pos[kept[i]] = static_cast<int>(i);
  std::vector<Triplet> trip;
  trip.reserve(full.nonZeros());
  for (int c = 0; c < full.outerSize(); ++c)
    for (SpMatR::InnerIterator it(full, c); it; ++it)
      if (pos[it.row()] >= 0 && pos[it.col()] >= 0)
        trip.emplace_back(pos[it.row()], pos[it.col()], it.value());
  SpMatR out(kept.size(), kept.size());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

SpMat to_complex(const SpMatR& m) {
  return m.cast<Complex>();
}

}  // namespace

Forms1d assemble_forms_1d(int elements, int order) {
  Forms1d f;
  f.kv = KnotVector::open_uniform(elements, order);
  const int nb = f.kv.basis_count();
  const auto rule = GaussRule::legendre(order + 1);
  LocalCache cache(f.kv, rule);
  std::vector<Triplet> ts, tm;
  ts.reserve(elements * (order + 1) * (order + 1));
  tm.reserve(ts.capacity());
  for (int e = 0; e < elements; ++e) {
    const auto& lm = cache.get(e);
    const auto idx = active_basis(f.kv, e);
    for (int a = 0; a <= order; ++a)
      for (int b = 0; b <= order; ++b) {
        ts.emplace_back(idx[a], idx[b], lm.stiffness(a, b));
        tm.emplace_back(idx[a], idx[b], lm.mass(a, b));
      }
  }
  f.stiffness.resize(nb, nb);
  f.mass.resize(nb, nb);
  f.stiffness.setFromTriplets(ts.begin(), ts.end());
  f.mass.setFromTriplets(tm.begin(), tm.end());
  return f;
}

SpMatR assemble_mass_on_interval(const KnotVector& kv, double x0, double x1) {
  const int nb = kv.basis_count();
  const int p = kv.degree;
  const auto rule = GaussRule::legendre(p + 1);
  const int nq = static_cast<int>(rule.nodes.size());
  const double h = 1.0 / kv.elements;
  std::vector<Triplet> tm;
  for (int e = 0; e < kv.elements; ++e) {
    const double a = std::max(e * h, x0);
    const double b = std::min((e + 1) * h, x1);
    if (b - a < 1e-14) continue;
    const auto idx = active_basis(kv, e);
    Eigen::MatrixXd vals(nq, p + 1);
    Eigen::VectorXd w(nq);
    for (int q = 0; q < nq; ++q) {
      const double x = a + 0.5 * (b - a) * (rule.nodes[q] + 1.0);
      w(q) = 0.5 * (b - a) * rule.weights[q];
      for (int l = 0; l <= p; ++l) vals(q, l) = bspline_value(kv, idx[l], x);
    }
    const Eigen::MatrixXd local = vals.transpose() * w.asDiagonal() * vals;
    for (int r = 0; r <= p; ++r)
      for (int c = 0; c <= p; ++c)
        tm.emplace_back(idx[r], idx[c], local(r, c));
  }
  SpMatR m(nb, nb);
  m.setFromTriplets(tm.begin(), tm.end());
  return m;
}

SpMat kron(const SpMat& outer, const SpMat& inner) {
  SpMat out(outer.rows() * inner.rows(), outer.cols() * inner.cols());
  std::vector<TripletC> trip;
  trip.reserve(static_cast<size_t>(outer.nonZeros()) * inner.nonZeros());
  for (int co = 0; co < outer.outerSize(); ++co)
    for (SpMat::InnerIterator ito(outer, co); ito; ++ito)
      for (int ci = 0; ci < inner.outerSize(); ++ci)
        for (SpMat::InnerIterator iti(inner, ci); iti; ++iti)
          trip.emplace_back(ito.row() * inner.rows() + iti.row(),
                            ito.col() * inner.cols() + iti.col(),
                            ito.value() * iti.value());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

DiscreteSystem assemble(const Problem& pb) {
  DiscreteSystem sys;
  sys.dim = pb.dim;
  const double k = pb.field.base;
  const Complex ii(0.0, 1.0);

  Forms1d forms = assemble_forms_1d(pb.elements, pb.order);
  sys.kv = forms.kv;
  const int nb = forms.kv.basis_count();

  // kept 1D basis: drop every Dirichlet end
  std::vector<int> kept;
  for (int j = 0; j < nb; ++j) {
    if (j == 0 && pb.left == BoundaryKind::Dirichlet) continue;
    if (j == nb - 1 && pb.dim == Dimension::One &&
        pb.right == BoundaryKind::Dirichlet)
      continue;
    if (j == nb - 1 && pb.dim == Dimension::Two) continue;  // all faces Dirichlet
    kept.push_back(j);
  }
  sys.kept = kept;
  sys.per_dim = static_cast<int>(kept.size());

  if (pb.dim == Dimension::One) {
    SpMat S = to_complex(forms.stiffness);
    SpMat M = to_complex(forms.mass);
    SpMat Afull = S - Complex(k * k) * M;
    if (pb.right == BoundaryKind::Radiating) {
      // boundary term -ik u(1) v(1); the last basis function is interpolatory
      std::vector<TripletC> tb{TripletC(nb - 1, nb - 1, -ii * k)};
      SpMat B(nb, nb);
      B.setFromTriplets(tb.begin(), tb.end());
      Afull += B;
    }
    sys.lift = Vec::Zero(nb);
    Vec rhs_full = Vec::Zero(nb);
    if (pb.source == SourceKind::CenterPoint) {
      for (int j = 0; j < nb; ++j)
        rhs_full(j) = bspline_value(forms.kv, j, 0.5);
    }
    if (pb.left == BoundaryKind::Dirichlet && pb.dirichlet_left != 0.0) {
      sys.lift(0) = pb.dirichlet_left;
      rhs_full -= Afull * sys.lift;
    }
    // slice to kept x kept
    const int n = sys.per_dim;
    std::vector<int> pos(nb, -1);
    for (int i = 0; i < n; ++i) pos[kept[i]] = i;
    std::vector<TripletC> ta, tw;
    for (int c = 0; c < Afull.outerSize(); ++c)
      for (SpMat::InnerIterator it(Afull, c); it; ++it)
        if (pos[it.row()] >= 0 && pos[it.col()] >= 0)
          ta.emplace_back(pos[it.row()], pos[it.col()], it.value());
    sys.A.resize(n, n);
    sys.A.setFromTriplets(ta.begin(), ta.end());
    SpMatR Mred = reduce(forms.mass, kept);
    sys.shift_mass = Complex(k * k) * to_complex(Mred);
    sys.rhs = Vec(n);
    for (int i = 0; i < n; ++i) sys.rhs(i) = rhs_full(kept[i]);
    return sys;
  }

  // 2D: tensor products of the reduced 1D forms (homogeneous Dirichlet
  // everywhere, so elimination commutes with the Kronecker structure)
  SpMat S1 = to_complex(reduce(forms.stiffness, kept));
  SpMat M1 = to_complex(reduce(forms.mass, kept));
  SpMat lap = kron(M1, S1) + kron(S1, M1);

  SpMat weighted;  // mass scaled by k(x,y)^2
  if (!pb.field.layered) {
    weighted = Complex(k * k) * kron(M1, M1);
  } else {
    std::vector<SpMat> band(4);
    for (int b = 0; b < 4; ++b)
      band[b] = to_complex(
          reduce(assemble_mass_on_interval(forms.kv, 0.25 * b, 0.25 * (b + 1)), kept));
    weighted.resize(sys.per_dim * sys.per_dim, sys.per_dim * sys.per_dim);
    for (int by = 0; by < 4; ++by)
      for (int bx = 0; bx < 4; ++bx) {
        const double mult = pb.field.multipliers[4 * by + bx];
        const double kb = k * mult;
        weighted += Complex(kb * kb) * kron(band[by], band[bx]);
      }
  }
  sys.A = lap - weighted;
  sys.shift_mass = weighted;
  sys.lift = Vec::Zero(nb);

  const int n = sys.per_dim;
  Vec phi(n);
  for (int i = 0; i < n; ++i) phi(i) = bspline_value(forms.kv, kept[i], 0.5);
  sys.rhs = Vec(n * n);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) sys.rhs(iy * n + ix) = phi(iy) * phi(ix);
  return sys;
}

Complex evaluate_solution_1d(const DiscreteSystem& sys, const Vec& x, double at) {
  if (sys.dim != Dimension::One)
    throw std::logic_error("pointwise evaluation is implemented for 1D systems");
  const int p = sys.kv.degree;
  const int e = sys.kv.span_of(at);
  Vec full = sys.lift;
  for (size_t i = 0; i < sys.kept.size(); ++i) full(sys.kept[i]) += x(i);
  Complex u = 0.0;
  for (int l = 0; l <= p; ++l) {
    const int j = e + l;
    u += full(j) * bspline_value(sys.kv, j, at);
  }
  return u;
}

}  // namespace helmdef
