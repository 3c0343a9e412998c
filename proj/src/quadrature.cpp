#include "fpi/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "fpi/error.hpp"

namespace fpi {

namespace {

GaussRule1D compute_gauss_legendre(int n) {
  GaussRule1D r;
  r.xi.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.xi[n - 1 - i] = x;
    r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

}  // namespace

const GaussRule1D& gauss_legendre(int npoints) {
  if (npoints < 1) fail(ErrorKind::InvalidArgument, "gauss_legendre: npoints must be >= 1");
  static std::mutex mutex;
  static std::map<int, GaussRule1D> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(npoints);
  if (it == cache.end()) it = cache.emplace(npoints, compute_gauss_legendre(npoints)).first;
  return it->second;
}

std::vector<QuadPoint> gauss_square(int n) {
  const auto& g = gauss_legendre(n);
  std::vector<QuadPoint> out;
  out.reserve(n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) out.push_back({{g.xi[i], g.xi[j]}, g.w[i] * g.w[j]});
  return out;
}

void append_triangle_rule(const Point& a, const Point& b, const Point& c, int n,
                          std::vector<QuadPoint>& out) {
  const double area2 = cross(b - a, c - a);
  const double jac = std::abs(area2);
  if (jac == 0.0) return;
  const auto& g = gauss_legendre(n);
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (g.xi[i] + 1.0);
    for (int j = 0; j < n; ++j) {
      const double v = 0.5 * (g.xi[j] + 1.0);
      // (u, v) in the unit square -> barycentric (s, t) = (u(1-v), v)
      const double s = u * (1.0 - v);
      const double t = v;
      const Point p = a + (b - a) * s + (c - a) * t;
      out.push_back({p, 0.25 * g.w[i] * g.w[j] * (1.0 - v) * jac});
    }
  }
}

void append_segment_rule(const Point& a, const Point& b, int n, std::vector<QuadPoint>& out) {
  const auto& g = gauss_legendre(n);
  const double len = norm(b - a);
  for (int i = 0; i < n; ++i) {
    const double s = 0.5 * (g.xi[i] + 1.0);
    out.push_back({a + (b - a) * s, 0.5 * len * g.w[i]});
  }
}

}  // namespace fpi
