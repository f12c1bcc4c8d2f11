#pragma once

// Numerical search for an N x k isometry V with V^H D V = lambda I, where D is
// the diagonal of eigenvalues. Solves the real system
//
//   V^H V - I = 0          (Hermitian, k^2 real equations)
//   V^H D V - lambda I = 0 (complex, 2 k^2 real equations)
//
// in the 2Nk real unknowns of V with Levenberg-Marquardt steps in the
// minimum-norm form  dV = -J^T (J J^T + mu I)^{-1} r,  restarted from seeded
// random isometries. Used when the triangle construction leaves nonzero
// cross terms <phi_s, sigma phi_p>.

#include <rankrange/error.hpp>
#include <rankrange/spectrum.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>

namespace rankrange {

struct CompressionSolveOptions {
  std::uint64_t seed = 0x5eed5eedULL;  // std::mt19937_64
  int max_restarts = 24;
  int max_iterations = 200;
  double tolerance = 1e-14;  // on the residual 2-norm
};

struct CompressionSolveResult {
  Matrix isometry;  // N x k, eigenbasis coordinates
  double residual = 0.0;
  int restarts = 0;
  int iterations = 0;
};

namespace detail {

inline Eigen::VectorXd compression_residual(const Matrix& v, const Vector& d, Complex target) {
  const auto k = v.cols();
  const Matrix g = v.adjoint() * v - Matrix::Identity(k, k);
  const Matrix h = v.adjoint() * d.asDiagonal() * v - target * Matrix::Identity(k, k);
  Eigen::VectorXd r(3 * k * k);
  Eigen::Index c = 0;
  for (Eigen::Index a = 0; a < k; ++a) {
    r(c++) = g(a, a).real();
    for (Eigen::Index b = a + 1; b < k; ++b) {
      r(c++) = g(a, b).real();
      r(c++) = g(a, b).imag();
    }
  }
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < k; ++b) {
      r(c++) = h(a, b).real();
      r(c++) = h(a, b).imag();
    }
  return r;
}

// Column 2(i + N s) + {0, 1} is the derivative along Re/Im of V(i, s).
inline Eigen::MatrixXd compression_jacobian(const Matrix& v, const Vector& d) {
  const auto n = v.rows(), k = v.cols();
  const Matrix dv = d.asDiagonal() * v;
  const Matrix dhv = d.conjugate().asDiagonal() * v;
  Eigen::MatrixXd jac(3 * k * k, 2 * n * k);
  Matrix dg(k, k), dh(k, k);
  for (Eigen::Index col = 0; col < 2 * n * k; ++col) {
    const Eigen::Index idx = col / 2, i = idx % n, s = idx / n;
    const Complex e = (col % 2) ? Complex(0.0, 1.0) : Complex(1.0, 0.0);
    dg.setZero();
    dh.setZero();
    dg.row(s) += std::conj(e) * v.row(i);
    dg.col(s) += v.row(i).adjoint() * e;
    dh.row(s) += std::conj(e) * dv.row(i);
    dh.col(s) += dhv.row(i).adjoint() * e;
    Eigen::Index c = 0;
    for (Eigen::Index a = 0; a < k; ++a) {
      jac(c++, col) = dg(a, a).real();
      for (Eigen::Index b = a + 1; b < k; ++b) {
        jac(c++, col) = dg(a, b).real();
        jac(c++, col) = dg(a, b).imag();
      }
    }
    for (Eigen::Index a = 0; a < k; ++a)
      for (Eigen::Index b = 0; b < k; ++b) {
        jac(c++, col) = dh(a, b).real();
        jac(c++, col) = dh(a, b).imag();
      }
  }
  return jac;
}

inline Matrix step_isometry(const Matrix& v, const Eigen::VectorXd& step) {
  Matrix out = v;
  const auto n = v.rows();
  for (Eigen::Index col = 0; col < step.size(); col += 2) {
    const Eigen::Index idx = col / 2;
    out(idx % n, idx / n) += Complex(step(col), step(col + 1));
  }
  return out;
}

inline Matrix random_isometry(Eigen::Index n, Eigen::Index k, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(n, k);
}

// Returns the final residual norm; v is updated in place.
inline double levenberg_marquardt(Matrix& v, const Vector& d, Complex target, int max_iterations,
                                  double tolerance, int* iterations) {
  double mu = 1e-3;
  Eigen::VectorXd r = compression_residual(v, d, target);
  double f = r.squaredNorm();
  int it = 0;
  for (; it < max_iterations && std::sqrt(f) > tolerance; ++it) {
    const Eigen::MatrixXd jac = compression_jacobian(v, d);
    const Eigen::MatrixXd normal = jac * jac.transpose();
    bool accepted = false;
    for (int attempt = 0; attempt < 40 && !accepted; ++attempt) {
      Eigen::MatrixXd damped = normal;
      damped.diagonal().array() += mu;
      const Eigen::VectorXd step = -jac.transpose() * damped.ldlt().solve(r);
      Matrix trial = step_isometry(v, step);
      Eigen::VectorXd rt = compression_residual(trial, d, target);
      const double ft = rt.squaredNorm();
      if (ft < f) {
        v = std::move(trial);
        r = std::move(rt);
        f = ft;
        mu = std::max(mu / 4.0, 1e-15);
        accepted = true;
      } else {
        mu *= 4.0;
      }
    }
    if (!accepted) break;
  }
  *iterations = it;
  return std::sqrt(f);
}

}  // namespace detail

/// Finds V (N x k, eigen-coordinates) with V^H V = I and V^H diag(d) V = target I.
/// Deterministic for fixed options. Empty if no restart converges.
inline std::optional<CompressionSolveResult> solve_compression(
    std::span<const Complex> eigenvalues, int k, Complex target,
    const CompressionSolveOptions& opts = {}) {
  const auto n = static_cast<Eigen::Index>(eigenvalues.size());
  if (k < 1 || k > n) throw Error(ErrorCode::InvalidRank, "k outside 1..N");
  Vector d(n);
  for (Eigen::Index j = 0; j < n; ++j) d(j) = eigenvalues[j];

  std::mt19937_64 rng(opts.seed);
  for (int restart = 0; restart < opts.max_restarts; ++restart) {
    Matrix v = detail::random_isometry(n, k, rng);
    int its = 0;
    const double res =
        detail::levenberg_marquardt(v, d, target, opts.max_iterations, opts.tolerance, &its);
    if (res <= opts.tolerance * 100) return CompressionSolveResult{std::move(v), res, restart, its};
  }
  return std::nullopt;
}

}  // namespace rankrange
