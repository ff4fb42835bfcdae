// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "helmdef/problems.hpp"

using namespace helmdef;

namespace {

// Closed-form Green's function of -u'' - k^2 u = delta(x - s) with
// homogeneous Dirichlet ends: independent cross-check for the sine series.
Complex green_1d(double k, double x, double s) {
  double lo = std::min(x, s), hi = std::max(x, s);
  return std::sin(k * lo) * std::sin(k * (1.0 - hi)) / (k * std::sin(k));
}

}  // namespace

TEST_CASE("plane wave") {
  Complex v = plane_wave(5.0, 0.3);
  CHECK(std::abs(v - std::exp(Complex(0.0, 1.5))) < 1e-15);
  CHECK(std::abs(plane_wave(2.0, 0.0) - Complex(1.0, 0.0)) < 1e-15);
}

TEST_CASE("point source series matches the closed form") {
  const double k = 29.3;
  for (double x : {0.1, 0.37, 0.5 - 1e-6, 0.73, 0.95}) {
    Complex series = dirichlet_point_source_solution_1d(k, x, 0.5, 20000);
    CHECK(std::abs(series - green_1d(k, x, 0.5)) < 1e-4);
  }
  // Off-center source.
  Complex series = dirichlet_point_source_solution_1d(k, 0.6, 0.3, 20000);
  CHECK(std::abs(series - green_1d(k, 0.6, 0.3)) < 1e-4);
}

TEST_CASE("point source series vanishes at the ends") {
  Complex a = dirichlet_point_source_solution_1d(40.0, 0.0, 0.5, 500);
  Complex b = dirichlet_point_source_solution_1d(40.0, 1.0, 0.5, 500);
  CHECK(std::abs(a) < 1e-12);
  CHECK(std::abs(b) < 1e-12);
}

TEST_CASE("resonant wave numbers are rejected") {
  CHECK_THROWS_AS(
      dirichlet_point_source_solution_1d(std::numbers::pi, 0.3, 0.5, 100),
      std::domain_error);
  CHECK_THROWS_AS(dirichlet_point_source_solution_2d(
                      std::sqrt(2.0) * std::numbers::pi, 0.3, 0.4, 0.5, 0.5, 50),
                  std::domain_error);
}

TEST_CASE("2d series is symmetric for a centered source") {
  const double k = 21.7;
  Complex a = dirichlet_point_source_solution_2d(k, 0.3, 0.45, 0.5, 0.5, 400);
  Complex b = dirichlet_point_source_solution_2d(k, 0.45, 0.3, 0.5, 0.5, 400);
  Complex c = dirichlet_point_source_solution_2d(k, 0.7, 0.55, 0.5, 0.5, 400);
  CHECK(std::abs(a - b) < 1e-10);
  CHECK(std::abs(a - c) < 1e-10);  // reflection through the center
}

TEST_CASE("step field multipliers are pinned") {
  auto m = layered_multipliers();
  // Horizontal bands with in-band variation, values within [1/2, 3/2].
  CHECK(m[0] == 1.00);
  CHECK(m[1] == 0.50);
  CHECK(m[2] == 1.25);
  CHECK(m[3] == 0.75);
  CHECK(m[4] == 1.50);
  CHECK(m[15] == 1.00);
  for (double v : m) {
    CHECK(v >= 0.5);
    CHECK(v <= 1.5);
  }
}

TEST_CASE("step field lookup") {
  WaveField f;
  f.base = 100.0;
  f.layered = true;
  f.multipliers = layered_multipliers();
  CHECK(f.at(0.1, 0.1) == Catch::Approx(100.0));
  CHECK(f.at(0.3, 0.1) == Catch::Approx(50.0));    // block (1,0)
  CHECK(f.at(0.5, 0.25) == Catch::Approx(50.0));   // block (2,1)
  CHECK(f.at(0.999, 0.999) == Catch::Approx(100.0));
  CHECK(f.at(1.0, 1.0) == Catch::Approx(100.0));   // clamped to block (3,3)
  CHECK(f.max_value() == Catch::Approx(150.0));
}

TEST_CASE("constant field ignores the block table") {
  WaveField f;
  f.base = 7.0;
  CHECK(f.at(0.1, 0.9) == Catch::Approx(7.0));
  CHECK(f.max_value() == Catch::Approx(7.0));
}

TEST_CASE("resolution rule") {
  CHECK(resolution_for(100.0, 0.625) == 160);
  CHECK(resolution_for(50.0, 0.625) == 80);
  CHECK(resolution_for(1.0, 0.625) == 2);
  CHECK(resolution_for(100.0, 0.5) == 200);  // exact division stays exact
  CHECK(resolution_for(100.0, 0.825) == 122);
}

TEST_CASE("problem factories") {
  Problem tw = travelling_wave_1d(16, 2, 30.0);
  CHECK(tw.dim == Dimension::One);
  CHECK(tw.source == SourceKind::None);
  CHECK(tw.left == BoundaryKind::Dirichlet);
  CHECK(tw.right == BoundaryKind::Radiating);
  CHECK(tw.dirichlet_left == 1.0);
  CHECK(tw.field.at(0.3, 0.0) == Catch::Approx(30.0));

  Problem ps = point_source_1d(16, 3, 40.0);
  CHECK(ps.source == SourceKind::CenterPoint);
  CHECK(ps.right == BoundaryKind::Dirichlet);
  CHECK(ps.dirichlet_left == 0.0);

  Problem ps2 = point_source_2d(10, 2, 50.0);
  CHECK(ps2.dim == Dimension::Two);
  CHECK_FALSE(ps2.field.layered);

  Problem lay = layered_medium_2d(10, 2, 50.0);  // any element count works
  CHECK(lay.field.layered);
  CHECK(lay.field.multipliers == layered_multipliers());
}
