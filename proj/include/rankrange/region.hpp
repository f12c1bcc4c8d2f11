#pragma once

// The rank-k region of a unitary spectrum as an intersection of chord-arc
// disk segments D(i, i+k), plus an independent brute-force oracle that
// intersects convex hulls of all (N-k+1)-point eigenvalue sub-multisets.

#include <rankrange/error.hpp>
#include <rankrange/geometry.hpp>
#include <rankrange/spectrum.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace rankrange {

inline constexpr double kDefaultMembershipTol = 1e-9;
inline constexpr double kCoincidenceTol = 1e-9;
inline constexpr int kBruteForceMaxDim = 16;

enum class Verdict { Inside, Boundary, Outside };

constexpr const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Inside: return "inside";
    case Verdict::Boundary: return "boundary";
    case Verdict::Outside: return "outside";
  }
  return "?";
}

enum class ChordKind {
  HalfPlane,  // ordinary chord: keep the side containing the counterclockwise arc
  Point,      // endpoints coincide after a full turn: D is the single point {a}
  Vacuous,    // endpoints coincide with zero angular span: D is the whole disk
};

struct ChordConstraint {
  int start = 1;  // i
  int end = 1;    // canonical index of i + k
  Complex a;      // lambda_i
  Complex b;      // lambda_{i+k}
  int sign = 1;
  ChordKind kind = ChordKind::HalfPlane;

  bool degenerate() const { return kind != ChordKind::HalfPlane; }

  /// Signed distance to the chord line, positive on the kept side.
  double margin(Complex z) const {
    const Complex d = b - a;
    return sign * geom::cross(d, z - a) / std::abs(d);
  }
};

class OmegaRegion {
 public:
  OmegaRegion(int k, std::vector<ChordConstraint> constraints)
      : k_(k), constraints_(std::move(constraints)) {
    for (const auto& c : constraints_)
      if (c.kind == ChordKind::Point) points_.push_back(c.a);
  }

  int k() const { return k_; }
  int dim() const { return static_cast<int>(constraints_.size()); }
  const std::vector<ChordConstraint>& constraints() const { return constraints_; }
  const std::vector<Complex>& point_constraints() const { return points_; }

  /// Smallest slack over all constraints including the unit disk; positive
  /// exactly on the interior.
  double min_margin(Complex z) const {
    double m = 1.0 - std::abs(z);
    for (const auto& p : points_) m = std::min(m, -std::abs(z - p));
    for (const auto& c : constraints_)
      if (c.kind == ChordKind::HalfPlane) m = std::min(m, c.margin(z));
    return m;
  }

  /// Distance-like gap from z to the nearest constraint boundary (chord
  /// lines, point constraints and the unit circle).
  double boundary_gap(Complex z) const {
    double g = std::abs(1.0 - std::abs(z));
    for (const auto& p : points_) g = std::min(g, std::abs(z - p));
    for (const auto& c : constraints_)
      if (c.kind == ChordKind::HalfPlane) g = std::min(g, std::abs(c.margin(z)));
    return g;
  }

 private:
  int k_;
  std::vector<ChordConstraint> constraints_;
  std::vector<Complex> points_;
};

inline OmegaRegion build_region(const EigenSystem& es, int k) {
  const int n = es.dim();
  if (k < 1 || k > n)
    throw Error(ErrorCode::InvalidRank,
                "k = " + std::to_string(k) + " outside 1.." + std::to_string(n));
  std::vector<ChordConstraint> cs;
  cs.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    ChordConstraint c;
    c.start = i;
    c.end = canonical_index(i + k, n);
    c.a = es.eigenvalue(i);
    c.b = es.eigenvalue(i + k);
    const double from = es.unwrapped_phase(i);
    const double to = es.unwrapped_phase(i + k);
    if (std::abs(c.a - c.b) <= kCoincidenceTol) {
      c.kind = (to - from > kTwoPi / 2) ? ChordKind::Point : ChordKind::Vacuous;
      c.sign = 1;
    } else {
      // Midpoint of the counterclockwise arc from lambda_{i+k} back to lambda_i.
      const Complex mid = unit(0.5 * (to + from + kTwoPi));
      c.sign = geom::cross(c.b - c.a, mid - c.a) > 0.0 ? 1 : -1;
    }
    cs.push_back(c);
  }
  return OmegaRegion(k, std::move(cs));
}

inline Verdict contains(const OmegaRegion& region, Complex z, double tol = kDefaultMembershipTol) {
  if (std::abs(z) > 1.0 + tol) return Verdict::Outside;
  for (const auto& p : region.point_constraints())
    if (std::abs(z - p) > tol) return Verdict::Outside;
  // A point-collapsed region has no interior.
  bool on_boundary = !region.point_constraints().empty();
  for (const auto& c : region.constraints()) {
    if (c.kind != ChordKind::HalfPlane) continue;
    const double m = c.margin(z);
    if (m < -tol) return Verdict::Outside;
    if (m <= tol) on_boundary = true;
  }
  return on_boundary ? Verdict::Boundary : Verdict::Inside;
}

/// Membership straight from the hull-intersection definition. Exponential in
/// N, guarded at N <= 16.
inline Verdict brute_force_contains(const EigenSystem& es, int k, Complex z,
                                    double tol = kDefaultMembershipTol) {
  const int n = es.dim();
  if (k < 1 || k > n) throw Error(ErrorCode::InvalidRank, "k outside 1..N");
  if (n > kBruteForceMaxDim)
    throw Error(ErrorCode::TooLarge, "brute-force oracle is limited to N <= 16");
  const int subset = n - k + 1;
  const auto values = es.eigenvalues();

  double worst = std::numeric_limits<double>::infinity();
  std::vector<Complex> pts;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != subset) continue;
    pts.clear();
    for (int j = 0; j < n; ++j)
      if (mask & (1u << j)) pts.push_back(values[j]);
    worst = std::min(worst, geom::signed_distance_to_hull(z, geom::convex_hull(pts)));
    if (worst < -tol) return Verdict::Outside;
  }
  return worst > tol ? Verdict::Inside : Verdict::Boundary;
}

/// Grid search over [-1,1]^2 for the point maximizing the minimum constraint
/// margin, followed by two rounds of local refinement. `resolution` is the
/// number of grid cells per axis. Empty when no positive-margin point exists.
inline std::optional<Complex> interior_point(const OmegaRegion& region, int resolution = 64) {
  resolution = std::max(resolution, 8);
  Complex center(0.0, 0.0);
  double half = 1.0;
  Complex best = center;
  double best_margin = -std::numeric_limits<double>::infinity();
  for (int round = 0; round < 3; ++round) {
    const double step = 2.0 * half / resolution;
    for (int iy = 0; iy <= resolution; ++iy) {
      for (int ix = 0; ix <= resolution; ++ix) {
        const Complex z(center.real() - half + ix * step, center.imag() - half + iy * step);
        const double m = region.min_margin(z);
        if (m > best_margin) {
          best_margin = m;
          best = z;
        }
      }
    }
    center = best;
    half = step;
  }
  if (best_margin > 0.0) return best;
  return std::nullopt;
}

namespace detail {

struct BoundaryPiece {
  bool arc = false;
  Complex from;
  Complex to;
  double arc_start = 0.0;  // angle, for arcs
  double arc_sweep = 0.0;  // counterclockwise sweep, for arcs

  double length() const { return arc ? arc_sweep : std::abs(to - from); }
  Complex at(double s) const {
    return arc ? unit(arc_start + s * arc_sweep) : from + s * (to - from);
  }
};

inline std::vector<Complex> clip_halfplane(const std::vector<Complex>& poly,
                                           const ChordConstraint& c) {
  std::vector<Complex> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Complex p = poly[i];
    const Complex q = poly[(i + 1) % n];
    const double mp = c.margin(p);
    const double mq = c.margin(q);
    if (mp >= 0.0) out.push_back(p);
    if ((mp >= 0.0) != (mq >= 0.0)) out.push_back(p + (mp / (mp - mq)) * (q - p));
  }
  return out;
}

inline std::vector<Complex> dedupe_cyclic(const std::vector<Complex>& poly) {
  std::vector<Complex> out;
  for (const auto& p : poly)
    if (out.empty() || std::abs(p - out.back()) > 1e-13) out.push_back(p);
  while (out.size() > 1 && std::abs(out.front() - out.back()) <= 1e-13) out.pop_back();
  return out;
}

}  // namespace detail

/// Counterclockwise points on the boundary of the region: vertices first,
/// then uniform samples along chord segments and unit-circle arcs.
inline std::vector<Complex> boundary_samples(const OmegaRegion& region, int count) {
  count = std::max(count, 3);
  const auto& points = region.point_constraints();
  if (!points.empty()) {
    const Complex p = points.front();
    for (const auto& q : points)
      if (std::abs(q - p) > kCoincidenceTol)
        throw Error(ErrorCode::EmptyRegion, "inconsistent point constraints");
    if (contains(region, p) == Verdict::Outside)
      throw Error(ErrorCode::EmptyRegion, "point constraint violates a chord");
    return std::vector<Complex>(static_cast<std::size_t>(count), p);
  }

  std::vector<Complex> poly = {{-2.0, -2.0}, {2.0, -2.0}, {2.0, 2.0}, {-2.0, 2.0}};
  for (const auto& c : region.constraints()) {
    if (c.kind != ChordKind::HalfPlane) continue;
    poly = detail::dedupe_cyclic(detail::clip_halfplane(poly, c));
    if (poly.empty()) throw Error(ErrorCode::EmptyRegion, "chord constraints are infeasible");
  }

  // Intersect the convex polygon with the closed unit disk edge by edge.
  struct Span {
    Complex from, to;
    bool enters, exits;
  };
  std::vector<Span> spans;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Complex u = poly[i];
    const Complex v = poly[(i + 1) % poly.size()];
    const Complex d = v - u;
    const double a = std::norm(d);
    if (a == 0.0) continue;
    const double b = geom::dot(u, d);
    const double c = std::norm(u) - 1.0;
    const double disc = b * b - a * c;
    if (disc < 0.0) continue;
    const double root = std::sqrt(disc);
    const double t0 = std::max(0.0, (-b - root) / a);
    const double t1 = std::min(1.0, (-b + root) / a);
    if (t0 > t1) continue;
    spans.push_back({u + t0 * d, u + t1 * d, t0 > 0.0, t1 < 1.0});
  }

  std::vector<detail::BoundaryPiece> pieces;
  if (spans.empty()) {
    bool disk_inside = true;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Complex u = poly[i];
      const Complex v = poly[(i + 1) % poly.size()];
      if (geom::cross(v - u, -u) / std::abs(v - u) < 1.0) disk_inside = false;
    }
    if (!disk_inside) throw Error(ErrorCode::EmptyRegion, "region misses the unit disk");
    pieces.push_back({true, unit(0.0), unit(0.0), 0.0, kTwoPi});
  } else {
    for (std::size_t i = 0; i < spans.size(); ++i) {
      const auto& s = spans[i];
      if (std::abs(s.to - s.from) > 1e-13) pieces.push_back({false, s.from, s.to});
      const auto& next = spans[(i + 1) % spans.size()];
      if (s.exits || next.enters) {
        if (std::abs(next.from - s.to) <= 1e-12) continue;
        const double start = phase_of(s.to);
        double sweep = phase_of(next.from) - start;
        if (sweep < 0.0) sweep += kTwoPi;
        pieces.push_back({true, s.to, next.from, start, sweep});
      }
    }
    if (pieces.empty()) return std::vector<Complex>(static_cast<std::size_t>(count), spans[0].from);
  }

  double total = 0.0;
  for (const auto& p : pieces) total += p.length();
  const int extra = std::max(0, count - static_cast<int>(pieces.size()));
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(count));
  for (const auto& p : pieces) {
    const int m = total > 0.0 ? static_cast<int>(std::floor(extra * p.length() / total)) : 0;
    for (int j = 0; j <= m; ++j) out.push_back(p.at(static_cast<double>(j) / (m + 1)));
  }
  return out;
}

}  // namespace rankrange
