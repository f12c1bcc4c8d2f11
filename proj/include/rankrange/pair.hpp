#pragma once

// Two orthonormal compression vectors from two weight systems that share a
// single eigen-index (the shared vertex), provided the shared vertex carries
// weight at most 1/2 in one of them.
//
// With s the shared index, T and R the remaining supports and weights
// p_s + sum p_t = 1, q_s + sum q_r = 1, both reproducing the target:
//
//   phi1 = [sqrt(p_s) cos(theta) + i sqrt(q_s) sin(theta)] psi_s
//          + e^{i alpha} cos(theta) sum sqrt(p_t) psi_t + e^{i beta} sin(theta) sum sqrt(q_r) psi_r
//   phi2 = [sqrt(p_s) cos(tau) + i sqrt(q_s) sin(tau)] psi_s
//          + cos(tau) sum sqrt(p_t) psi_t + sin(tau) sum sqrt(q_r) psi_r
//
// are unit vectors with <phi, sigma phi> = target for any angles. Orthogonality
// is arranged with the gauge beta = 0, theta = 0, cos(alpha) = -p_s/(1-p_s),
// sin(alpha) = sqrt(1-2p_s)/(1-p_s) and tau = atan2(sqrt(1-2p_s), sqrt(p_s q_s)).
//
// The pair is not a compression on its own: the cross term
// <phi1, sigma phi2> = e^{-i alpha} cos(tau) (target - lambda_s) is generally
// nonzero. Assembly checks the full compression and refines when it fails.

#include <rankrange/error.hpp>
#include <rankrange/spectrum.hpp>
#include <rankrange/triangle.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <utility>
#include <vector>

namespace rankrange {

inline constexpr double kOrthogonalityTol = 1e-10;
inline constexpr double kPairEquationTol = 1e-10;
inline constexpr double kDegenerateProduct = 1e-14;

/// Expansion coefficients of a vector in the eigenbasis, keyed by eigen-index.
struct VectorCoefficients {
  std::map<int, Complex> coefficients;
  double norm_residual = 0.0;         // |sum |z|^2 - 1|
  double compression_residual = 0.0;  // |sum lambda |z|^2 - target|

  Complex at(int index) const {
    auto it = coefficients.find(index);
    return it == coefficients.end() ? Complex{} : it->second;
  }
};

/// <u, v>, conjugate-linear in u.
inline Complex inner(const VectorCoefficients& u, const VectorCoefficients& v) {
  Complex acc{};
  for (const auto& [j, zu] : u.coefficients) acc += std::conj(zu) * v.at(j);
  return acc;
}

inline void attach_residuals(VectorCoefficients& v, const EigenSystem& es, Complex target) {
  double norm2 = 0.0;
  Complex expect{};
  for (const auto& [j, z] : v.coefficients) {
    norm2 += std::norm(z);
    expect += es.eigenvalue(j) * std::norm(z);
  }
  v.norm_residual = std::abs(norm2 - 1.0);
  v.compression_residual = std::abs(expect - target);
}

/// Vector sum sqrt(p) psi over the triangle's vertices.
inline VectorCoefficients vector_from_triangle(const BarycentricWeights& w, const EigenSystem& es,
                                               Complex target) {
  VectorCoefficients v;
  for (std::size_t i = 0; i < 3; ++i) v.coefficients[w.triangle[i]] = std::sqrt(w.weights[i]);
  attach_residuals(v, es, target);
  return v;
}

struct SharedVertexProblem {
  int shared = 1;
  double p1 = 0.0;  // shared weight in the first system
  double q1 = 0.0;  // shared weight in the second system
  std::vector<std::pair<int, double>> t_weights;
  std::vector<std::pair<int, double>> r_weights;
  Complex target;

  /// Disjoint supports, unit sums, both systems reproduce the target.
  bool well_formed(const EigenSystem& es) const {
    std::map<int, int> seen;
    ++seen[canonical_index(shared, es.dim())];
    for (const auto& [t, p] : t_weights) ++seen[canonical_index(t, es.dim())];
    for (const auto& [r, q] : r_weights) ++seen[canonical_index(r, es.dim())];
    for (const auto& [j, count] : seen)
      if (count != 1) return false;
    double sp = p1, sq = q1;
    Complex lp = es.eigenvalue(shared) * p1, lq = es.eigenvalue(shared) * q1;
    for (const auto& [t, p] : t_weights) {
      if (p < 0.0) return false;
      sp += p;
      lp += es.eigenvalue(t) * p;
    }
    for (const auto& [r, q] : r_weights) {
      if (q < 0.0) return false;
      sq += q;
      lq += es.eigenvalue(r) * q;
    }
    return std::abs(sp - 1.0) <= kWeightSumTol && std::abs(sq - 1.0) <= kWeightSumTol &&
           std::abs(lp - target) <= kReconstructionTol && std::abs(lq - target) <= kReconstructionTol;
  }
};

/// Builds the problem for two triangles sharing exactly one vertex.
inline SharedVertexProblem shared_vertex_problem(const BarycentricWeights& first,
                                                 const BarycentricWeights& second, int shared,
                                                 Complex target) {
  SharedVertexProblem pr;
  pr.shared = shared;
  pr.p1 = first.weight_of(shared);
  pr.q1 = second.weight_of(shared);
  pr.target = target;
  for (std::size_t i = 0; i < 3; ++i) {
    if (first.triangle[i] != shared) pr.t_weights.emplace_back(first.triangle[i], first.weights[i]);
    if (second.triangle[i] != shared)
      pr.r_weights.emplace_back(second.triangle[i], second.weights[i]);
  }
  return pr;
}

enum class PairPath { ClosedForm, Degenerate, Fallback };

struct PairParameters {
  double alpha = 0.0;
  double beta = 0.0;
  double theta = 0.0;
  double tau = 0.0;
  double x = 0.0;  // tan(theta)
  double y = 0.0;  // tan(tau); infinite on the degenerate path
  double A = 0.0;
  double B = 0.0;
  PairPath path = PairPath::ClosedForm;
};

struct PairSolution {
  VectorCoefficients first;
  VectorCoefficients second;
  PairParameters params;
  bool swapped = false;  // roles of the two systems were exchanged
};

/// Coefficients of x^2 + A x + B = 0 obtained by eliminating y = tan(tau)
/// from the real and imaginary orthogonality equations.
inline std::pair<double, double> discriminant_coeffs(double p1, double q1, double alpha,
                                                     double beta) {
  const double den = q1 + (1.0 - q1) * std::cos(beta);
  if (std::abs(den) <= 1e-12)
    throw Error(ErrorCode::DegenerateDenominator, "q1 + (1 - q1) cos(beta) vanishes");
  if (!(p1 * q1 > 0.0))
    throw Error(ErrorCode::DegenerateDenominator, "p1 * q1 must be positive");
  const double num_a = (p1 - 1.0) * std::sin(alpha) * den +
                       (q1 - 1.0) * std::sin(beta) * ((p1 - 1.0) * std::cos(alpha) - p1);
  const double A = num_a / (std::sqrt(p1 * q1) * den);
  const double B = (p1 + (1.0 - p1) * std::cos(alpha)) / den;
  return {A, B};
}

/// Real part of <phi1, phi2> divided by cos(theta) cos(tau).
inline double pair_equation_real(double p1, double q1, double alpha, double beta, double x,
                                 double y) {
  return p1 + q1 * x * y + std::cos(alpha) * (1.0 - p1) + std::cos(beta) * (1.0 - q1) * x * y;
}

/// Imaginary part of the same, up to sign.
inline double pair_equation_imag(double p1, double q1, double alpha, double beta, double x,
                                 double y) {
  return std::sqrt(p1 * q1) * (x - y) + std::sin(alpha) * (1.0 - p1) +
         std::sin(beta) * (1.0 - q1) * x * y;
}

/// y solving the imaginary equation for given x (it is linear in y).
inline double pair_y_for(double p1, double q1, double alpha, double beta, double x) {
  const double s = std::sqrt(p1 * q1);
  return (s * x + std::sin(alpha) * (1.0 - p1)) / (s - std::sin(beta) * (1.0 - q1) * x);
}

inline bool satisfies_pair_equations(double p1, double q1, double alpha, double beta, double x,
                                     double y, double tol = kPairEquationTol) {
  return std::isfinite(y) && std::abs(pair_equation_real(p1, q1, alpha, beta, x, y)) <= tol &&
         std::abs(pair_equation_imag(p1, q1, alpha, beta, x, y)) <= tol;
}

/// Real roots of x^2 + A x + B = 0 that, paired with their y, satisfy both
/// orthogonality equations. Roots failing either equation are dropped.
inline std::vector<std::pair<double, double>> consistent_roots(double p1, double q1, double alpha,
                                                               double beta) {
  const auto [A, B] = discriminant_coeffs(p1, q1, alpha, beta);
  std::vector<std::pair<double, double>> out;
  const double disc = A * A - 4.0 * B;
  if (disc < 0.0) return out;
  const double root = std::sqrt(disc);
  for (double x : {(-A - root) / 2.0, (-A + root) / 2.0}) {
    const double y = pair_y_for(p1, q1, alpha, beta, x);
    if (satisfies_pair_equations(p1, q1, alpha, beta, x, y)) out.emplace_back(x, y);
  }
  return out;
}

/// The two vectors for explicit angles.
inline std::pair<VectorCoefficients, VectorCoefficients> pair_vectors(
    const SharedVertexProblem& pr, const EigenSystem& es, double alpha, double beta, double theta,
    double tau) {
  const double sp = std::sqrt(pr.p1), sq = std::sqrt(pr.q1);
  const Complex i(0.0, 1.0);
  VectorCoefficients phi1, phi2;
  phi1.coefficients[pr.shared] = sp * std::cos(theta) + i * sq * std::sin(theta);
  phi2.coefficients[pr.shared] = sp * std::cos(tau) + i * sq * std::sin(tau);
  for (const auto& [t, p] : pr.t_weights) {
    phi1.coefficients[t] = std::polar(std::cos(theta) * std::sqrt(p), alpha);
    phi2.coefficients[t] = std::cos(tau) * std::sqrt(p);
  }
  for (const auto& [r, q] : pr.r_weights) {
    phi1.coefficients[r] = std::polar(std::sin(theta) * std::sqrt(q), beta);
    phi2.coefficients[r] = std::sin(tau) * std::sqrt(q);
  }
  attach_residuals(phi1, es, pr.target);
  attach_residuals(phi2, es, pr.target);
  return {std::move(phi1), std::move(phi2)};
}

namespace detail {

inline bool pair_ok(const VectorCoefficients& a, const VectorCoefficients& b) {
  return std::abs(inner(a, b)) <= kOrthogonalityTol && a.norm_residual <= kPairEquationTol &&
         b.norm_residual <= kPairEquationTol && a.compression_residual <= kReconstructionTol &&
         b.compression_residual <= kReconstructionTol;
}

// Worst equation residual over consistent candidates for (alpha, beta).
inline double pair_objective(double p1, double q1, double alpha, double beta, double* x_out,
                             double* y_out) {
  const double den = q1 + (1.0 - q1) * std::cos(beta);
  if (std::abs(den) <= 1e-12) return std::numeric_limits<double>::infinity();
  const auto [A, B] = discriminant_coeffs(p1, q1, alpha, beta);
  double best = std::numeric_limits<double>::infinity();
  const double disc = A * A - 4.0 * B;
  if (disc < 0.0) return best;
  const double root = std::sqrt(disc);
  // Both sign conventions for the linear coefficient are scanned; the
  // equations themselves decide which roots are genuine.
  for (double x : {(-A - root) / 2.0, (-A + root) / 2.0, (A - root) / 2.0, (A + root) / 2.0}) {
    const double y = pair_y_for(p1, q1, alpha, beta, x);
    if (!std::isfinite(y)) continue;
    const double r = std::abs(pair_equation_real(p1, q1, alpha, beta, x, y)) +
                     std::abs(pair_equation_imag(p1, q1, alpha, beta, x, y));
    if (r < best) {
      best = r;
      *x_out = x;
      *y_out = y;
    }
  }
  return best;
}

}  // namespace detail

/// Deterministic numerical search over (alpha, beta) for a root of both
/// orthogonality equations, seeded at (alpha0, beta0). Requires p1 q1 > 0.
inline PairSolution fallback_pair_search(const SharedVertexProblem& pr, const EigenSystem& es,
                                         double alpha0, double beta0) {
  const double p1 = pr.p1, q1 = pr.q1;
  if (!(p1 * q1 > 0.0)) throw Error(ErrorCode::NoSolution, "fallback needs p1 * q1 > 0");
  double x = 0.0, y = 0.0;
  double best_a = alpha0, best_b = beta0;
  double best = detail::pair_objective(p1, q1, alpha0, beta0, &x, &y);

  // Coarse grid, then compass search around the best point.
  constexpr int grid = 48;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double a = alpha0 + kTwoPi * i / grid, b = beta0 + kTwoPi * j / grid;
      double xx, yy;
      const double f = detail::pair_objective(p1, q1, a, b, &xx, &yy);
      if (f < best) best = f, best_a = a, best_b = b, x = xx, y = yy;
    }
  }
  for (double step = 0.1; step > 1e-15 && best > 1e-14;) {
    bool moved = false;
    for (auto [da, db] : {std::pair{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}}) {
      double xx, yy;
      const double f = detail::pair_objective(p1, q1, best_a + da, best_b + db, &xx, &yy);
      if (f < best) {
        best = f, best_a += da, best_b += db, x = xx, y = yy;
        moved = true;
        break;
      }
    }
    if (!moved) step *= 0.5;
  }

  PairSolution sol;
  sol.params.alpha = best_a;
  sol.params.beta = best_b;
  sol.params.x = x;
  sol.params.y = y;
  sol.params.theta = std::atan(x);
  sol.params.tau = std::atan(y);
  std::tie(sol.params.A, sol.params.B) = discriminant_coeffs(p1, q1, best_a, best_b);
  sol.params.path = PairPath::Fallback;
  std::tie(sol.first, sol.second) =
      pair_vectors(pr, es, best_a, best_b, sol.params.theta, sol.params.tau);
  if (!detail::pair_ok(sol.first, sol.second))
    throw Error(ErrorCode::NoSolution, "fallback search did not reach an orthogonal pair");
  return sol;
}

/// Closed-form orthonormal pair; see the file comment for the gauge.
inline PairSolution solve_pair(SharedVertexProblem pr, const EigenSystem& es) {
  bool swapped = false;
  if (pr.p1 > 0.5) {
    if (pr.q1 > 0.5)
      throw Error(ErrorCode::BothHeavy, "shared vertex weight exceeds 1/2 in both systems");
    std::swap(pr.p1, pr.q1);
    std::swap(pr.t_weights, pr.r_weights);
    swapped = true;
  }
  const double p1 = pr.p1, q1 = pr.q1;
  const double cos_a = -p1 / (1.0 - p1);
  const double sin_a = std::sqrt(std::max(0.0, 1.0 - 2.0 * p1)) / (1.0 - p1);

  PairSolution sol;
  sol.swapped = swapped;
  auto& par = sol.params;
  par.alpha = std::atan2(sin_a, cos_a);
  par.beta = 0.0;
  par.theta = 0.0;
  par.x = 0.0;
  par.tau = std::atan2(std::sqrt(std::max(0.0, 1.0 - 2.0 * p1)), std::sqrt(p1 * q1));
  if (p1 * q1 <= kDegenerateProduct) {
    par.path = PairPath::Degenerate;
    par.y = p1 * q1 > 0.0 ? std::tan(par.tau) : std::numeric_limits<double>::infinity();
    par.A = 0.0;
    par.B = (p1 + (1.0 - p1) * std::cos(par.alpha)) / 1.0;
  } else {
    par.path = PairPath::ClosedForm;
    par.y = std::tan(par.tau);
    std::tie(par.A, par.B) = discriminant_coeffs(p1, q1, par.alpha, par.beta);
  }
  std::tie(sol.first, sol.second) = pair_vectors(pr, es, par.alpha, par.beta, par.theta, par.tau);
  if (detail::pair_ok(sol.first, sol.second)) return sol;
  if (par.path == PairPath::Degenerate)
    throw Error(ErrorCode::NoSolution, "degenerate pair failed orthogonality");
  auto fb = fallback_pair_search(pr, es, par.alpha, par.beta);
  fb.swapped = swapped;
  return fb;
}

}  // namespace rankrange
