// Model problem catalogue: 1D/2D Helmholtz setups with constant and layered
// wave numbers, plus closed-form reference solutions.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <complex>
#include <functional>
#include <string>

namespace helmdef {

using Complex = std::complex<double>;

enum class Dimension { One, Two };

/// Piecewise-constant wave number on a 4x4 grid of square blocks.
/// Multipliers scale the base value; a constant field uses all ones.
struct WaveField {
  double base = 1.0;
  bool layered = false;
  // Row-major, block(bx, by) = multipliers[4*by + bx], x fastest.
  std::array<double, 16> multipliers{1, 1, 1, 1, 1, 1, 1, 1,
                                     1, 1, 1, 1, 1, 1, 1, 1};

  double at(double x, double y) const;
  double max_value() const;
};

/// Fixed multiplier table for the layered benchmark field, values in [1/2, 3/2],
/// arranged as horizontal bands with in-band variation.
std::array<double, 16> layered_multipliers();

enum class SourceKind {
  None,          // boundary-driven
  CenterPoint,   // Dirac delta at the domain midpoint
};

enum class BoundaryKind {
  Dirichlet,     // value pinned (homogeneous unless lifted)
  Radiating,     // first-order absorbing: u' - i k u = 0 at the outflow end
};

/// Declarative description of one benchmark problem instance.
struct Problem {
  std::string name;
  Dimension dim = Dimension::One;
  int order = 1;      // B-spline degree
  int elements = 8;   // per direction
  WaveField field;
  SourceKind source = SourceKind::CenterPoint;
  BoundaryKind left = BoundaryKind::Dirichlet;   // x=0 face (and all faces in 2D)
  BoundaryKind right = BoundaryKind::Dirichlet;  // x=1 end (1D only)
  double dirichlet_left = 0.0;                   // lifted value at x=0 (1D)
};

/// 1D wave propagating to the right: u(0)=1, radiating at x=1, no source.
/// Exact solution exp(i k x).
Problem travelling_wave_1d(int elements, int order, double k);

/// 1D point source at x=1/2 with homogeneous Dirichlet ends.
Problem point_source_1d(int elements, int order, double k);

/// 2D point source at (1/2,1/2), homogeneous Dirichlet boundary.
Problem point_source_2d(int elements, int order, double k);

/// 2D point source with the layered 4x4 step field; block edges need not
/// align with element boundaries.
Problem layered_medium_2d(int elements, int order, double k);

/// exp(i k x).
Complex plane_wave(double k, double x);

/// Sine series for -u'' - k^2 u = delta(x - xs), u(0)=u(1)=0:
/// u(x) = 2 sum_j sin(j pi x) sin(j pi xs) / (j^2 pi^2 - k^2).
/// Throws if k^2 is within `guard` of a resonance j^2 pi^2.
Complex dirichlet_point_source_solution_1d(double k, double x, double xs,
                                           int terms, double guard = 1e-8);

/// Double sine series for the 2D analogue with source (xs, ys).
Complex dirichlet_point_source_solution_2d(double k, double x, double y,
                                           double xs, double ys, int terms,
                                           double guard = 1e-8);

/// Smallest element count with k / n <= kh_target.
int resolution_for(double k, double kh_target);

}  // namespace helmdef
