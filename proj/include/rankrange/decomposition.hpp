#pragma once

// Triangle plans for N in {3k, 3k-1, 3k-2 (k >= 5)} and rank one, and the
// assembly of the rank-k projector P with P sigma P = lambda P.
//
// Plans are built in a "frame": a labeling of the eigen-indices that is
// either the identity or the orientation-reversing reflection sending a
// chosen pivot to 1. Triangles are listed in the frame and mapped back to
// original labels before they leave this file.

#include <rankrange/compression.hpp>
#include <rankrange/error.hpp>
#include <rankrange/pair.hpp>
#include <rankrange/region.hpp>
#include <rankrange/spectrum.hpp>
#include <rankrange/triangle.hpp>

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rankrange {

enum class DimensionCase {
  ThreeK,
  ThreeKMinus1,
  ThreeKMinus2Case1,
  ThreeKMinus2Case2,
  Rank1,
  ScalarSpectrum,  // sigma = lambda I: any k eigenvectors work
};

constexpr std::string_view to_string(DimensionCase c) {
  switch (c) {
    case DimensionCase::ThreeK: return "ThreeK";
    case DimensionCase::ThreeKMinus1: return "ThreeKMinus1";
    case DimensionCase::ThreeKMinus2Case1: return "ThreeKMinus2-Case1";
    case DimensionCase::ThreeKMinus2Case2: return "ThreeKMinus2-Case2";
    case DimensionCase::Rank1: return "Rank1";
    case DimensionCase::ScalarSpectrum: return "ScalarSpectrum";
  }
  return "?";
}

struct Pairing {
  std::array<int, 2> triangles{};  // positions in DecompositionPlan::triangles
  int shared = 0;                  // original eigen-index
};

struct DecompositionPlan {
  DimensionCase dimension_case = DimensionCase::ThreeK;
  int dim = 0;
  int k = 0;
  std::vector<TriangleSpec> triangles;  // original labels
  std::vector<Pairing> pairings;
  std::optional<int> reflection_pivot;  // original label sent to 1 by the frame
  std::vector<std::pair<int, double>> rank1_support;  // Rank1 only: index, weight
};

using IndexTriple = std::array<int, 3>;

struct PlanLayout {
  std::vector<IndexTriple> triangles;  // frame labels
  std::vector<Pairing> pairings;       // shared vertex in frame labels
};

/// Triangle layout of a dimension case in frame labels. Pure integer data.
inline PlanLayout plan_layout(DimensionCase c, int k) {
  PlanLayout out;
  switch (c) {
    case DimensionCase::ThreeK:
      for (int m = 1; m <= k; ++m) out.triangles.push_back({m, k + m, 2 * k + m});
      break;
    case DimensionCase::ThreeKMinus1:
      out.triangles.push_back({1, k + 1, 2 * k + 1});
      out.triangles.push_back({1, k, 2 * k});
      out.pairings.push_back({{0, 1}, 1});
      for (int m = 1; m <= k - 2; ++m) out.triangles.push_back({k - m, 2 * k - m, 3 * k - m});
      break;
    case DimensionCase::ThreeKMinus2Case1:
      out.triangles.push_back({1, k - 1, 2 * k - 1});
      out.triangles.push_back({1, k + 1, 2 * k + 1});
      out.triangles.push_back({k - 2, 2 * k - 2, 3 * k - 3});
      out.triangles.push_back({k, 2 * k - 2, 3 * k - 2});
      out.triangles.push_back({2, k + 2, 2 * k});
      out.pairings.push_back({{0, 1}, 1});
      out.pairings.push_back({{2, 3}, 2 * k - 2});
      for (int m = 3; m <= k - 3; ++m) out.triangles.push_back({m, k + m, 2 * k + m - 1});
      break;
    case DimensionCase::ThreeKMinus2Case2:
      out.triangles.push_back({1, k - 1, 2 * k - 1});
      out.triangles.push_back({1, k + 1, 2 * k + 1});
      out.triangles.push_back({k - 2, 2 * k - 2, 3 * k - 3});
      out.triangles.push_back({k - 3, 2 * k - 3, 3 * k - 3});
      out.triangles.push_back({k, 2 * k, 3 * k - 2});
      out.pairings.push_back({{0, 1}, 1});
      out.pairings.push_back({{2, 3}, 3 * k - 3});
      for (int m = 2; m <= k - 4; ++m) out.triangles.push_back({m, k + m, 2 * k + m});
      break;
    case DimensionCase::Rank1:
    case DimensionCase::ScalarSpectrum:
      break;
  }
  return out;
}

inline int case_dimension(DimensionCase c, int k) {
  switch (c) {
    case DimensionCase::ThreeK: return 3 * k;
    case DimensionCase::ThreeKMinus1: return 3 * k - 1;
    case DimensionCase::ThreeKMinus2Case1:
    case DimensionCase::ThreeKMinus2Case2: return 3 * k - 2;
    default: return 0;
  }
}

/// Maps a frame layout to original labels. `pivot` selects the reflection
/// frame r(j) = ((pivot - j) mod N) + 1.
inline DecompositionPlan materialize(DimensionCase c, int k, std::optional<int> pivot) {
  const int n = case_dimension(c, k);
  DecompositionPlan plan;
  plan.dimension_case = c;
  plan.dim = n;
  plan.k = k;
  plan.reflection_pivot = pivot;
  const auto layout = plan_layout(c, k);
  std::vector<int> frame;
  if (pivot) frame = reflect_labels(n, *pivot);
  auto to_original = [&](int j) { return pivot ? frame[canonical_index(j, n)] : canonical_index(j, n); };
  for (const auto& t : layout.triangles)
    plan.triangles.emplace_back(to_original(t[0]), to_original(t[1]), to_original(t[2]), n);
  for (auto p : layout.pairings) {
    p.shared = to_original(p.shared);
    plan.pairings.push_back(p);
  }
  return plan;
}

/// Integer invariants: k triangles passing the gap rule, every index covered,
/// each pairing's shared vertex in exactly its two triangles, every other
/// index in exactly one, and the pairing count fixed by the case.
inline bool plan_is_exact_cover(const DecompositionPlan& plan) {
  if (plan.dimension_case == DimensionCase::Rank1 ||
      plan.dimension_case == DimensionCase::ScalarSpectrum)
    return true;
  const int n = plan.dim;
  if (static_cast<int>(plan.triangles.size()) != plan.k) return false;
  std::size_t expected_pairings = 0;
  if (plan.dimension_case == DimensionCase::ThreeKMinus1) expected_pairings = 1;
  if (plan.dimension_case == DimensionCase::ThreeKMinus2Case1 ||
      plan.dimension_case == DimensionCase::ThreeKMinus2Case2)
    expected_pairings = 2;
  if (plan.pairings.size() != expected_pairings) return false;

  std::vector<int> uses(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& t : plan.triangles) {
    if (t.dim() != n || !validate_triangle(t, plan.k)) return false;
    for (int j : t.indices()) ++uses[j];
  }
  std::vector<int> expected(static_cast<std::size_t>(n) + 1, 1);
  for (const auto& p : plan.pairings) {
    const auto& t0 = plan.triangles.at(p.triangles[0]);
    const auto& t1 = plan.triangles.at(p.triangles[1]);
    if (!t0.has(p.shared) || !t1.has(p.shared)) return false;
    for (int j : t0.indices())
      if (j != p.shared && t1.has(j)) return false;
    expected[p.shared] = 2;
  }
  for (int j = 1; j <= n; ++j)
    if (uses[j] != expected[j]) return false;
  return true;
}

inline bool supported_dimension(int n, int k) {
  if (k < 1 || k > n) return false;
  return n == 3 * k || k == 1 || (n == 3 * k - 1 && k >= 2) || (n == 3 * k - 2 && k >= 5);
}

/// Convex support of target on at most three eigenvalues: a matching vertex,
/// else an edge, else the first triangle in lexicographic order.
inline std::vector<std::pair<int, double>> caratheodory_support(const EigenSystem& es,
                                                                Complex target) {
  const int n = es.dim();
  for (int i = 1; i <= n; ++i)
    if (std::abs(es.eigenvalue(i) - target) <= kReconstructionTol) return {{i, 1.0}};
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      const Complex a = es.eigenvalue(i), d = es.eigenvalue(j) - a;
      const double len2 = std::norm(d);
      if (len2 <= 1e-24) continue;
      const double s = geom::dot(target - a, d) / len2;
      if (s < kWeightClamp || s > 1.0 - kWeightClamp) continue;
      const double sc = std::clamp(s, 0.0, 1.0);
      if (std::abs(a + sc * d - target) <= kReconstructionTol) return {{i, 1.0 - sc}, {j, sc}};
    }
  }
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (int m = j + 1; m <= n; ++m) {
        try {
          const auto w = solve_barycentric(es, TriangleSpec(i, j, m, n), target);
          return {{i, w.weights[0]}, {j, w.weights[1]}, {m, w.weights[2]}};
        } catch (const Error& e) {
          if (e.code() != ErrorCode::NoConvexSolution) throw;
        }
      }
  throw Error(ErrorCode::LambdaOutsideRegion, "target is not in the convex hull of the spectrum");
}

namespace detail {

inline void require_member(const EigenSystem& es, int k, Complex target, double tol) {
  const auto verdict = contains(build_region(es, k), target, tol);
  const bool ok = verdict == Verdict::Inside || (k == 1 && verdict == Verdict::Boundary);
  if (!ok)
    throw Error(ErrorCode::LambdaOutsideRegion,
                std::string("target is ") + to_string(verdict) + " of the rank-" +
                    std::to_string(k) + " region (interior required)");
}

inline double frame_weight(const EigenSystem& es, const IndexTriple& frame_triangle,
                           const std::vector<int>& frame, int frame_vertex, Complex target) {
  const int n = es.dim();
  auto orig = [&](int j) { return frame.empty() ? canonical_index(j, n) : frame[canonical_index(j, n)]; };
  const TriangleSpec t(orig(frame_triangle[0]), orig(frame_triangle[1]), orig(frame_triangle[2]), n);
  return solve_barycentric(es, t, target).weight_of(orig(frame_vertex));
}

}  // namespace detail

/// Chooses triangles and pairings for the given spectrum, rank and target.
inline DecompositionPlan plan(const EigenSystem& es, int k, Complex target,
                              double tol = kDefaultMembershipTol) {
  const int n = es.dim();
  if (k < 1 || k > n)
    throw Error(ErrorCode::InvalidRank, "k = " + std::to_string(k) + " outside 1..N");
  if (!supported_dimension(n, k))
    throw Error(ErrorCode::UnsupportedDimension,
                "(N, k) = (" + std::to_string(n) + ", " + std::to_string(k) +
                    ") is not one of N = 3k, 3k-1 (k >= 2), 3k-2 (k >= 5) or k = 1");
  detail::require_member(es, k, target, tol);

  DecompositionPlan out;
  if (n == 3 * k) {
    out = materialize(DimensionCase::ThreeK, k, std::nullopt);
  } else if (k == 1) {
    out.dimension_case = DimensionCase::Rank1;
    out.dim = n;
    out.k = 1;
    out.rank1_support = caratheodory_support(es, target);
    return out;
  } else if (n == 3 * k - 1) {
    const std::vector<int> identity;
    const IndexTriple probe = {1, k + 1, 2 * k + 1};
    std::optional<int> pivot;
    if (detail::frame_weight(es, probe, identity, 1, target) > 0.5) pivot = 2 * k + 1;
    out = materialize(DimensionCase::ThreeKMinus1, k, pivot);
  } else {
    std::optional<int> pivot;
    if (detail::frame_weight(es, {1, k - 1, 2 * k - 1}, {}, 1, target) > 0.5) pivot = k - 1;
    const auto frame = pivot ? reflect_labels(n, *pivot) : std::vector<int>{};
    const IndexTriple second = {k - 2, 2 * k - 2, 3 * k - 3};
    const bool case1 = detail::frame_weight(es, second, frame, 2 * k - 2, target) <= 0.5;
    out = materialize(case1 ? DimensionCase::ThreeKMinus2Case1 : DimensionCase::ThreeKMinus2Case2,
                      k, pivot);
  }
  if (!plan_is_exact_cover(out))
    throw Error(ErrorCode::GramFailure, "internal: plan violates the exact-cover invariants");
  return out;
}

struct ResidualReport {
  double hermitian = 0.0;    // ||P - P^H||_F
  double idempotent = 0.0;   // ||P^2 - P||_F
  double trace = 0.0;        // |tr P - k|
  double compression = 0.0;  // ||P sigma P - lambda P||_F
  bool pass = false;
};

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kIdempotentTol = 1e-9;
inline constexpr double kTraceTol = 1e-9;
inline constexpr double kCompressionTol = 1e-8;
inline constexpr double kGramTol = 1e-9;

/// Residuals of a candidate rank-k compression projector. Thresholds are
/// the defaults above scaled by tol / 1e-9.
inline ResidualReport verify_projector(const Matrix& p, const Matrix& sigma, Complex target, int k,
                                       double tol = 1e-9) {
  if (p.rows() != p.cols() || sigma.rows() != sigma.cols() || p.rows() != sigma.rows())
    throw Error(ErrorCode::ShapeMismatch, "projector and matrix shapes differ");
  ResidualReport r;
  r.hermitian = (p - p.adjoint()).norm();
  r.idempotent = (p * p - p).norm();
  r.trace = std::abs(p.trace() - Complex(k, 0.0));
  r.compression = (p * sigma * p - target * p).norm();
  const double scale = tol / 1e-9;
  r.pass = k >= 1 && r.hermitian <= kHermitianTol * scale && r.idempotent <= kIdempotentTol * scale &&
           r.trace <= kTraceTol * scale && r.compression <= kCompressionTol * scale;
  return r;
}

enum class ConstructionMethod {
  Elementary,  // triangle and pair vectors as built
  Refined,     // elementary vectors left cross terms; numerical solve
};

constexpr std::string_view to_string(ConstructionMethod m) {
  return m == ConstructionMethod::Elementary ? "elementary" : "refined";
}

struct Projector {
  Matrix matrix;   // N x N, in the basis of the input matrix
  Matrix vectors;  // N x k orthonormal columns spanning the range
  int rank = 0;
  Complex target;
  ResidualReport residuals;
  DecompositionPlan plan;
  ConstructionMethod method = ConstructionMethod::Elementary;
  double elementary_compression = 0.0;  // ||P sigma P - lambda P|| of the elementary vectors
  int solver_restarts = 0;
  int solver_iterations = 0;
};

namespace detail {

inline Projector assemble(const EigenSystem& es, Complex target, DecompositionPlan plan,
                          const std::vector<VectorCoefficients>& vecs) {
  const int n = es.dim();
  const int k = static_cast<int>(vecs.size());
  Matrix z = Matrix::Zero(n, k);
  for (int s = 0; s < k; ++s)
    for (const auto& [j, c] : vecs[s].coefficients) z(canonical_index(j, n) - 1, s) = c;

  const double gram = (z.adjoint() * z - Matrix::Identity(k, k)).norm();
  if (gram > kGramTol)
    throw Error(ErrorCode::GramFailure, "vectors are not orthonormal (Gram residual " +
                                            std::to_string(gram) + ")");
  for (const auto& v : vecs)
    if (v.compression_residual > kGramTol)
      throw Error(ErrorCode::GramFailure, "vector misses the target expectation value");

  Projector out;
  out.vectors = es.basis() * z;
  out.matrix = out.vectors * out.vectors.adjoint();
  out.rank = k;
  out.target = target;
  out.residuals = verify_projector(out.matrix, es.matrix(), target, k);
  out.plan = std::move(plan);
  return out;
}

}  // namespace detail

/// Rank-one witness from a Caratheodory support of the target.
inline Projector caratheodory_rank1(const EigenSystem& es, Complex target,
                                    double tol = kDefaultMembershipTol) {
  detail::require_member(es, 1, target, tol);
  DecompositionPlan pl;
  pl.dimension_case = DimensionCase::Rank1;
  pl.dim = es.dim();
  pl.k = 1;
  pl.rank1_support = caratheodory_support(es, target);
  VectorCoefficients v;
  for (const auto& [j, w] : pl.rank1_support) v.coefficients[j] = std::sqrt(w);
  attach_residuals(v, es, target);
  return detail::assemble(es, target, std::move(pl), {v});
}

/// Projector from the elementary vectors only: one per unpaired triangle, two
/// per shared-vertex pairing. Every vector has the target expectation value
/// and the family is orthonormal, but pairings can leave cross terms
/// <phi_s, sigma phi_p> != 0, so residuals.pass may be false.
inline Projector construct_elementary(const EigenSystem& es, int k, Complex target,
                                      double tol = kDefaultMembershipTol) {
  const int n = es.dim();
  if (k < 1 || k > n)
    throw Error(ErrorCode::InvalidRank, "k = " + std::to_string(k) + " outside 1..N");

  bool scalar = true;
  for (int j = 1; j <= n; ++j)
    if (std::abs(es.eigenvalue(j) - target) > tol) scalar = false;
  if (scalar) {
    DecompositionPlan pl;
    pl.dimension_case = DimensionCase::ScalarSpectrum;
    pl.dim = n;
    pl.k = k;
    std::vector<VectorCoefficients> vecs(static_cast<std::size_t>(k));
    for (int s = 0; s < k; ++s) {
      vecs[s].coefficients[s + 1] = 1.0;
      attach_residuals(vecs[s], es, target);
    }
    return detail::assemble(es, target, std::move(pl), vecs);
  }

  auto pl = plan(es, k, target, tol);
  if (pl.dimension_case == DimensionCase::Rank1) return caratheodory_rank1(es, target, tol);

  std::vector<BarycentricWeights> weights;
  weights.reserve(pl.triangles.size());
  for (const auto& t : pl.triangles) weights.push_back(solve_barycentric(es, t, target));

  std::vector<VectorCoefficients> vecs;
  std::vector<bool> used(pl.triangles.size(), false);
  for (const auto& p : pl.pairings) {
    const auto problem =
        shared_vertex_problem(weights[p.triangles[0]], weights[p.triangles[1]], p.shared, target);
    auto sol = solve_pair(problem, es);
    vecs.push_back(std::move(sol.first));
    vecs.push_back(std::move(sol.second));
    used[p.triangles[0]] = used[p.triangles[1]] = true;
  }
  for (std::size_t i = 0; i < pl.triangles.size(); ++i)
    if (!used[i]) vecs.push_back(vector_from_triangle(weights[i], es, target));
  return detail::assemble(es, target, std::move(pl), vecs);
}

/// Builds a rank-k P with P sigma P = target P. Uses the elementary vectors
/// when they already compress exactly, otherwise solves for the isometry
/// numerically (the plan is still validated and reported).
inline Projector construct_projector(const EigenSystem& es, int k, Complex target,
                                     double tol = kDefaultMembershipTol,
                                     const CompressionSolveOptions& solver = {}) {
  Projector out = construct_elementary(es, k, target, tol);
  out.elementary_compression = out.residuals.compression;
  if (out.residuals.pass) return out;

  const auto eig = es.eigenvalues();
  const auto sol = solve_compression(std::span<const Complex>(eig.data(), eig.size()), k, target, solver);
  if (!sol)
    throw Error(ErrorCode::NoSolution, "numerical compression solve did not converge");
  out.vectors = es.basis() * sol->isometry;
  out.matrix = out.vectors * out.vectors.adjoint();
  out.residuals = verify_projector(out.matrix, es.matrix(), target, k);
  out.method = ConstructionMethod::Refined;
  out.solver_restarts = sol->restarts;
  out.solver_iterations = sol->iterations;
  if (!out.residuals.pass)
    throw Error(ErrorCode::GramFailure, "refined projector fails verification");
  return out;
}

}  // namespace rankrange
