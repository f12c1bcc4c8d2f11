#pragma once

// Triangles of eigenvalues: cyclic gap validation, barycentric weights of a
// target value and weak-vertex classification.

#include <rankrange/error.hpp>
#include <rankrange/geometry.hpp>
#include <rankrange/region.hpp>
#include <rankrange/spectrum.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

namespace rankrange {

inline constexpr double kWeightClamp = -1e-12;
inline constexpr double kWeightSumTol = 1e-10;
inline constexpr double kReconstructionTol = 1e-9;
inline constexpr double kContainmentTol = 1e-8;

/// Three distinct eigen-indices of an N-dimensional spectrum, stored as
/// ascending canonical labels (a < b < c).
class TriangleSpec {
 public:
  TriangleSpec(long i, long j, long m, int dim) : dim_(dim) {
    if (dim < 3) throw Error(ErrorCode::InvalidRank, "triangles need N >= 3");
    idx_ = {canonical_index(i, dim), canonical_index(j, dim), canonical_index(m, dim)};
    std::sort(idx_.begin(), idx_.end());
    if (idx_[0] == idx_[1] || idx_[1] == idx_[2])
      throw Error(ErrorCode::InvalidRank, "triangle vertices must be distinct");
  }

  int dim() const { return dim_; }
  const std::array<int, 3>& indices() const { return idx_; }
  int operator[](std::size_t i) const { return idx_[i]; }
  std::array<int, 3> gaps() const {
    return {idx_[1] - idx_[0], idx_[2] - idx_[1], dim_ + idx_[0] - idx_[2]};
  }
  bool has(int j) const { return std::find(idx_.begin(), idx_.end(), j) != idx_.end(); }

  friend bool operator==(const TriangleSpec&, const TriangleSpec&) = default;

 private:
  std::array<int, 3> idx_{};
  int dim_ = 3;
};

/// Gap rule: every cyclic gap at most k. Triangles passing it contain the
/// whole rank-k region.
inline bool validate_triangle(const TriangleSpec& t, int k) {
  const auto g = t.gaps();
  return std::all_of(g.begin(), g.end(), [k](int gap) { return gap >= 1 && gap <= k; });
}

struct BarycentricWeights {
  TriangleSpec triangle;
  std::array<double, 3> weights{};  // aligned with triangle.indices()
  double residual = 0.0;            // |sum p * lambda_vertex - lambda|

  double weight_of(int index) const {
    for (std::size_t i = 0; i < 3; ++i)
      if (triangle[i] == index) return weights[i];
    return 0.0;
  }
};

namespace detail {

inline std::optional<std::array<double, 3>> accept_weights(std::array<double, 3> w,
                                                            const std::array<Complex, 3>& v,
                                                            Complex target) {
  for (double p : w)
    if (!(p >= kWeightClamp)) return std::nullopt;
  for (double& p : w) p = std::clamp(p, 0.0, 1.0);
  const double sum = w[0] + w[1] + w[2];
  if (std::abs(sum - 1.0) > 1e-6) return std::nullopt;
  for (double& p : w) p /= sum;
  const Complex r = w[0] * v[0] + w[1] * v[1] + w[2] * v[2] - target;
  if (std::abs(r) > kReconstructionTol) return std::nullopt;
  return w;
}

}  // namespace detail

/// Convex weights of `target` over the triangle's eigenvalues. Solves the
/// 3x3 real system directly; for collinear or coincident vertices falls back
/// to the three edges and then the three vertices.
inline BarycentricWeights solve_barycentric(const EigenSystem& es, const TriangleSpec& t,
                                            Complex target) {
  const std::array<Complex, 3> v = {es.eigenvalue(t[0]), es.eigenvalue(t[1]),
                                    es.eigenvalue(t[2])};
  auto finish = [&](const std::array<double, 3>& w) {
    BarycentricWeights out{t, w, 0.0};
    out.residual = std::abs(w[0] * v[0] + w[1] * v[1] + w[2] * v[2] - target);
    return out;
  };

  // Cramer's rule on [1 1 1; Re v; Im v] p = [1; Re target; Im target],
  // i.e. signed sub-triangle areas over the full area.
  const double det = geom::cross(v[1] - v[0], v[2] - v[0]);
  if (std::abs(det) > 1e-14) {
    const std::array<double, 3> w = {geom::cross(v[1] - target, v[2] - target) / det,
                                     geom::cross(v[2] - target, v[0] - target) / det,
                                     geom::cross(v[0] - target, v[1] - target) / det};
    if (auto ok = detail::accept_weights(w, v, target)) return finish(*ok);
  }

  constexpr std::array<std::array<int, 2>, 3> edges = {{{0, 1}, {1, 2}, {0, 2}}};
  for (const auto& [u, w] : edges) {
    const Complex d = v[w] - v[u];
    const double len2 = std::norm(d);
    if (len2 <= 1e-24) continue;
    const double s = geom::dot(target - v[u], d) / len2;
    std::array<double, 3> p{};
    p[u] = 1.0 - s;
    p[w] = s;
    if (auto ok = detail::accept_weights(p, v, target)) return finish(*ok);
  }
  for (std::size_t i = 0; i < 3; ++i) {
    std::array<double, 3> p{};
    p[i] = 1.0;
    if (auto ok = detail::accept_weights(p, v, target)) return finish(*ok);
  }
  throw Error(ErrorCode::NoConvexSolution, "target lies outside triangle {" +
                                               std::to_string(t[0]) + "," +
                                               std::to_string(t[1]) + "," +
                                               std::to_string(t[2]) + "}");
}

/// Vertices with weight <= 1/2 (inclusive, no tolerance band).
inline std::vector<int> weak_vertices(const BarycentricWeights& w) {
  std::vector<int> out;
  for (std::size_t i = 0; i < 3; ++i)
    if (w.weights[i] <= 0.5) out.push_back(w.triangle[i]);
  return out;
}

inline bool is_weak(const BarycentricWeights& w, int index) { return w.weight_of(index) <= 0.5; }

/// Numerical check that sampled boundary points of the rank-k region lie in
/// the closed triangle. An empty region is contained trivially.
inline bool containment_check(const EigenSystem& es, const TriangleSpec& t, int k,
                              int samples = 256) {
  const auto region = build_region(es, k);
  std::vector<Complex> boundary;
  try {
    boundary = boundary_samples(region, samples);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::EmptyRegion) return true;
    throw;
  }
  const auto hull = geom::convex_hull({es.eigenvalue(t[0]), es.eigenvalue(t[1]),
                                       es.eigenvalue(t[2])});
  return std::all_of(boundary.begin(), boundary.end(), [&](Complex z) {
    return geom::signed_distance_to_hull(z, hull) >= -kContainmentTol;
  });
}

}  // namespace rankrange
