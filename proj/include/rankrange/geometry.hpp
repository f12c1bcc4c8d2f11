#pragma once

// Small planar helpers on std::complex<double> treated as points of R^2.

#include <rankrange/spectrum.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace rankrange::geom {

inline double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }
inline double dot(Complex a, Complex b) { return a.real() * b.real() + a.imag() * b.imag(); }

/// Euclidean distance from p to the closed segment [a, b].
inline double segment_distance(Complex p, Complex a, Complex b) {
  const Complex d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p - a);
  const double s = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
  return std::abs(p - (a + s * d));
}

/// Andrew's monotone chain. Returns hull vertices counterclockwise without
/// collinear points; 1 or 2 points for degenerate input.
inline std::vector<Complex> convex_hull(std::vector<Complex> pts) {
  auto less = [](Complex a, Complex b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  };
  std::sort(pts.begin(), pts.end(), less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;

  std::vector<Complex> hull(2 * pts.size());
  std::size_t m = 0;
  for (const auto& p : pts) {
    while (m >= 2 && cross(hull[m - 1] - hull[m - 2], p - hull[m - 2]) <= 0.0) --m;
    hull[m++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = m + 1; i-- > 0;) {
    while (m >= lower && cross(hull[m - 1] - hull[m - 2], pts[i] - hull[m - 2]) <= 0.0) --m;
    hull[m++] = pts[i];
  }
  hull.resize(m - 1);
  return hull;
}

/// Signed distance from p to the convex polygon given counterclockwise:
/// positive inside (distance to the nearest edge line), negative outside
/// (minus the distance to the polygon). Points and segments have no interior.
inline double signed_distance_to_hull(Complex p, const std::vector<Complex>& hull) {
  if (hull.empty()) return -std::numeric_limits<double>::infinity();
  if (hull.size() == 1) return -std::abs(p - hull[0]);
  if (hull.size() == 2) return -segment_distance(p, hull[0], hull[1]);

  bool inside = true;
  double inner = std::numeric_limits<double>::infinity();
  double outer = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Complex a = hull[i];
    const Complex b = hull[(i + 1) % hull.size()];
    const double c = cross(b - a, p - a) / std::abs(b - a);
    if (c < 0.0) inside = false;
    inner = std::min(inner, c);
    outer = std::min(outer, segment_distance(p, a, b));
  }
  return inside ? inner : -outer;
}

}  // namespace rankrange::geom
