#pragma once

#include <vector>

#include "fpi/tensor2.hpp"

namespace fpi {

struct QuadPoint {
  Point x;
  double w = 0.0;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule1D {
  std::vector<double> xi;
  std::vector<double> w;
};
const GaussRule1D& gauss_legendre(int npoints);

/// Tensor Gauss rule on the reference square [-1,1]^2.
std::vector<QuadPoint> gauss_square(int npoints_per_dir);

/// Collapsed (Duffy) product rule on a physical triangle; positive weights,
/// exact for total degree 2n-2.
void append_triangle_rule(const Point& a, const Point& b, const Point& c, int n,
                          std::vector<QuadPoint>& out);

/// Points/weights of an n-point Gauss rule on segment [a, b].
void append_segment_rule(const Point& a, const Point& b, int n, std::vector<QuadPoint>& out);

}  // namespace fpi
