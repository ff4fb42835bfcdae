// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>

#include "helmdef/assembly.hpp"
#include "helmdef/linalg.hpp"
#include "helmdef/problems.hpp"
#include "helmdef/spline.hpp"

using namespace helmdef;

namespace {

Complex green_1d(double k, double x, double s) {
  double lo = std::min(x, s), hi = std::max(x, s);
  return std::sin(k * lo) * std::sin(k * (1.0 - hi)) / (k * std::sin(k));
}

Eigen::MatrixXd dense(const SpMatR& m) { return Eigen::MatrixXd(m); }

}  // namespace

TEST_CASE("1d forms: symmetry and consistency sums") {
  for (int p : {1, 2, 3, 4}) {
    Forms1d f = assemble_forms_1d(12, p);
    Eigen::MatrixXd S = dense(f.stiffness), M = dense(f.mass);
    CHECK((S - S.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((M - M.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    // Partition of unity: sum of all mass entries is the domain length,
    // stiffness rows annihilate constants.
    CHECK(M.sum() == Catch::Approx(1.0).margin(1e-12));
    CHECK(S.sum() == Catch::Approx(0.0).margin(1e-10));
    CHECK((S * Eigen::VectorXd::Ones(S.cols())).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("dirichlet pencil reproduces sine eigenvalues") {
  Forms1d f = assemble_forms_1d(64, 3);
  int nb = f.kv.basis_count();
  Eigen::MatrixXd S = dense(f.stiffness).block(1, 1, nb - 2, nb - 2);
  Eigen::MatrixXd M = dense(f.mass).block(1, 1, nb - 2, nb - 2);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(S, M);
  REQUIRE(eig.info() == Eigen::Success);
  for (int j = 1; j <= 5; ++j) {
    double exact = std::pow(j * std::numbers::pi, 2);
    CHECK(eig.eigenvalues()(j - 1) == Catch::Approx(exact).epsilon(1e-3));
  }
}

TEST_CASE("interval masses add up to the full mass") {
  // 10 elements: the quarter boundaries fall inside elements.
  for (int p : {1, 2, 3}) {
    Forms1d f = assemble_forms_1d(10, p);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(f.mass.rows(), f.mass.cols());
    for (int b = 0; b < 4; ++b) {
      sum += dense(assemble_mass_on_interval(f.kv, 0.25 * b, 0.25 * (b + 1)));
    }
    CHECK((sum - dense(f.mass)).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("interval mass entries are monotone in the interval") {
  Forms1d f = assemble_forms_1d(8, 2);
  Eigen::MatrixXd part = dense(assemble_mass_on_interval(f.kv, 0.25, 0.5));
  Eigen::MatrixXd full = dense(f.mass);
  for (int i = 0; i < part.rows(); ++i) {
    for (int j = 0; j < part.cols(); ++j) {
      CHECK(part(i, j) >= -1e-15);
      CHECK(part(i, j) <= full(i, j) + 1e-15);
    }
  }
}

TEST_CASE("travelling wave system: structure") {
  const double k = 18.0;
  DiscreteSystem sys = assemble(travelling_wave_1d(32, 3, k));
  int n = static_cast<int>(sys.A.rows());
  CHECK(n == 32 + 3 - 1);  // only the inflow coefficient is eliminated
  Eigen::MatrixXcd A(sys.A);
  // The absorbing term sits on the last diagonal entry; everything else is real.
  CHECK(A(n - 1, n - 1).imag() == Catch::Approx(-k).margin(1e-12));
  A(n - 1, n - 1) = Complex(A(n - 1, n - 1).real(), 0.0);
  CHECK(A.imag().cwiseAbs().maxCoeff() < 1e-14);
  CHECK((A - A.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  // The load comes from lifting the inflow value, so it clusters at that end.
  CHECK(sys.rhs.head(4).norm() > 0.0);
  CHECK(sys.rhs.tail(n - 4).norm() == 0.0);
  CHECK(sys.lift(0) == Complex(1.0, 0.0));
}

TEST_CASE("travelling wave system: solution matches the plane wave") {
  const double k = 20.0;
  DiscreteSystem sys = assemble(travelling_wave_1d(64, 3, k));
  DirectSolver lu(sys.A);
  Vec x = lu.solve(sys.rhs);
  CHECK(std::abs(evaluate_solution_1d(sys, x, 0.0) - Complex(1.0, 0.0)) <
        1e-12);
  for (double at : {0.3, 0.7, 1.0}) {
    CHECK(std::abs(evaluate_solution_1d(sys, x, at) - plane_wave(k, at)) <
          2e-4);
  }
}

TEST_CASE("point source system: solution matches the green function") {
  const double k = 12.0;
  DiscreteSystem sys = assemble(point_source_1d(64, 3, k));
  CHECK(sys.A.rows() == 64 + 3 - 2);
  DirectSolver lu(sys.A);
  Vec x = lu.solve(sys.rhs);
  for (double at : {0.25, 0.4, 0.8}) {
    CHECK(std::abs(evaluate_solution_1d(sys, x, at) - green_1d(k, at, 0.5)) <
          1e-5);
  }
  // Load vector: the point evaluation of the retained basis sums to one.
  CHECK(std::abs(sys.rhs.sum() - Complex(1.0, 0.0)) < 1e-12);
}

TEST_CASE("2d system matches dense quadrature assembly") {
  const double k = 9.0;
  const int n_el = 4, p = 2;
  DiscreteSystem sys = assemble(point_source_2d(n_el, p, k));
  KnotVector kv = KnotVector::open_uniform(n_el, p);
  int nb = kv.basis_count();
  int m = static_cast<int>(sys.kept.size());
  REQUIRE(sys.A.rows() == m * m);

  // Independent assembly: tensor-product Gauss quadrature of the bilinear
  // form, evaluated basis-by-basis without the Kronecker shortcut.
  GaussRule rule = GaussRule::legendre(p + 1);
  Eigen::MatrixXd S1 = Eigen::MatrixXd::Zero(nb, nb);
  Eigen::MatrixXd M1 = Eigen::MatrixXd::Zero(nb, nb);
  double h = 1.0 / n_el;
  for (int e = 0; e < n_el; ++e) {
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      double xq = (e + 0.5 * (rule.nodes[q] + 1.0)) * h;
      double wq = 0.5 * h * rule.weights[q];
      for (int i = 0; i < nb; ++i) {
        double vi = bspline_value(kv, i, xq), di = bspline_derivative(kv, i, xq);
        if (vi == 0.0 && di == 0.0) continue;
        for (int j = 0; j < nb; ++j) {
          S1(i, j) += wq * di * bspline_derivative(kv, j, xq);
          M1(i, j) += wq * vi * bspline_value(kv, j, xq);
        }
      }
    }
  }
  Eigen::MatrixXcd ref = Eigen::MatrixXcd::Zero(m * m, m * m);
  for (int iy = 0; iy < m; ++iy)
    for (int ix = 0; ix < m; ++ix)
      for (int jy = 0; jy < m; ++jy)
        for (int jx = 0; jx < m; ++jx) {
          int I = sys.kept[ix], J = sys.kept[jx];
          int Iy = sys.kept[iy], Jy = sys.kept[jy];
          double val = M1(Iy, Jy) * S1(I, J) + S1(Iy, Jy) * M1(I, J) -
                       k * k * M1(Iy, Jy) * M1(I, J);
          ref(iy * m + ix, jy * m + jx) = val;
        }
  CHECK((Eigen::MatrixXcd(sys.A) - ref).cwiseAbs().maxCoeff() < 1e-11);

  // Point load: tensor product of midpoint basis values.
  for (int iy = 0; iy < m; ++iy)
    for (int ix = 0; ix < m; ++ix) {
      double want = bspline_value(kv, sys.kept[ix], 0.5) *
                    bspline_value(kv, sys.kept[iy], 0.5);
      CHECK(std::abs(sys.rhs(iy * m + ix) - Complex(want, 0.0)) < 1e-13);
    }
}

TEST_CASE("layered field with unit multipliers reduces to the constant case") {
  const double k = 15.0;
  Problem lay = layered_medium_2d(10, 2, k);  // 10 elements: blocks cut elements
  lay.field.multipliers.fill(1.0);
  DiscreteSystem a = assemble(lay);
  DiscreteSystem b = assemble(point_source_2d(10, 2, k));
  CHECK((Eigen::MatrixXcd(a.A) - Eigen::MatrixXcd(b.A)).cwiseAbs().maxCoeff() <
        1e-10);
  CHECK((Eigen::MatrixXcd(a.shift_mass) - Eigen::MatrixXcd(b.shift_mass))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
}

TEST_CASE("layered system differs from the constant one and stays symmetric") {
  const double k = 15.0;
  DiscreteSystem a = assemble(layered_medium_2d(10, 2, k));
  DiscreteSystem b = assemble(point_source_2d(10, 2, k));
  Eigen::MatrixXcd A(a.A);
  CHECK((A - Eigen::MatrixXcd(b.A)).cwiseAbs().maxCoeff() > 1e-3);
  CHECK((A - A.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("kron follows the inner-fastest layout") {
  SpMat a(2, 2), b(2, 2);
  a.insert(0, 0) = Complex(1, 0);
  a.insert(0, 1) = Complex(2, 0);
  a.insert(1, 1) = Complex(3, 0);
  b.insert(0, 0) = Complex(5, 0);
  b.insert(1, 0) = Complex(7, 0);
  SpMat kp = kron(a, b);
  Eigen::MatrixXcd K(kp);
  REQUIRE(K.rows() == 4);
  CHECK(K(0, 0) == Complex(5, 0));    // a00 * b00
  CHECK(K(1, 0) == Complex(7, 0));    // a00 * b10
  CHECK(K(0, 2) == Complex(10, 0));   // a01 * b00
  CHECK(K(3, 2) == Complex(21, 0));   // a11 * b10
}
