// SPDX-License-Identifier: Apache-2.0

#include "helmdef/problems.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace helmdef {

double WaveField::at(double x, double y) const {
  if (!layered) return base;
  auto block = [](double s) {
    int b = static_cast<int>(s * 4.0);
    return std::clamp(b, 0, 3);
  };
  return base * multipliers[4 * block(y) + block(x)];
}

double WaveField::max_value() const {
  if (!layered) return base;
  return base * *std::max_element(multipliers.begin(), multipliers.end());
}

std::array<double, 16> layered_multipliers() {
  // Four horizontal bands, values sweep [1/2, 3/2] with jumps at every
  // block edge; fixed here so runs are reproducible.
  return {1.00, 0.50, 1.25, 0.75,
          1.50, 1.00, 0.50, 1.25,
          0.75, 1.50, 1.00, 0.50,
          1.25, 0.75, 1.50, 1.00};
}

Problem travelling_wave_1d(int elements, int order, double k) {
  Problem pb;
  pb.name = "travelling_wave_1d";
  pb.dim = Dimension::One;
  pb.order = order;
  pb.elements = elements;
  pb.field.base = k;
  pb.source = SourceKind::None;
  pb.left = BoundaryKind::Dirichlet;
  pb.right = BoundaryKind::Radiating;
  pb.dirichlet_left = 1.0;
  return pb;
}

Problem point_source_1d(int elements, int order, double k) {
  Problem pb;
  pb.name = "point_source_1d";
  pb.dim = Dimension::One;
  pb.order = order;
  pb.elements = elements;
  pb.field.base = k;
  pb.source = SourceKind::CenterPoint;
  pb.left = BoundaryKind::Dirichlet;
  pb.right = BoundaryKind::Dirichlet;
  return pb;
}

Problem point_source_2d(int elements, int order, double k) {
  Problem pb = point_source_1d(elements, order, k);
  pb.name = "point_source_2d";
  pb.dim = Dimension::Two;
  return pb;
}

Problem layered_medium_2d(int elements, int order, double k) {
  Problem pb = point_source_2d(elements, order, k);
  pb.name = "layered_medium_2d";
  pb.field.layered = true;
  pb.field.multipliers = layered_multipliers();
  return pb;
}

Complex plane_wave(double k, double x) {
  return std::exp(Complex(0.0, k * x));
}

Complex dirichlet_point_source_solution_1d(double k, double x, double xs,
                                           int terms, double guard) {
  const double pi = std::acos(-1.0);
  Complex u = 0.0;
  for (int j = 1; j <= terms; ++j) {
    const double lam = j * pi * j * pi - k * k;
    if (std::abs(lam) < guard)
      throw std::domain_error("wave number too close to a resonance");
    u += 2.0 * std::sin(j * pi * x) * std::sin(j * pi * xs) / lam;
  }
  return u;
}

Complex dirichlet_point_source_solution_2d(double k, double x, double y,
                                           double xs, double ys, int terms,
                                           double guard) {
  const double pi = std::acos(-1.0);
  Complex u = 0.0;
  for (int i = 1; i <= terms; ++i) {
    for (int j = 1; j <= terms; ++j) {
      const double lam = (i * i + j * j) * pi * pi - k * k;
      if (std::abs(lam) < guard)
        throw std::domain_error("wave number too close to a resonance");
      u += 4.0 * std::sin(i * pi * x) * std::sin(i * pi * xs) *
           std::sin(j * pi * y) * std::sin(j * pi * ys) / lam;
    }
  }
  return u;
}

int resolution_for(double k, double kh_target) {
  if (k <= 0.0 || kh_target <= 0.0)
    throw std::invalid_argument("resolution_for needs positive k and kh");
  return static_cast<int>(std::ceil(k / kh_target - 1e-12));
}

}  // namespace helmdef
