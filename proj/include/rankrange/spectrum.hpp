#pragma once

// Eigensystems of unitary matrices: ingestion, canonical phase ordering and
// cyclic index arithmetic. Eigen-indices are 1-based throughout the library
// and extend cyclically: index j + N names the same eigenpair as j, with its
// angular coordinate advanced by 2*pi.

#include <rankrange/error.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rankrange {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kDefaultUnitarityTol = 1e-9;
inline constexpr double kDefaultResidualTol = 1e-9;

/// Argument of z mapped into [0, 2*pi).
inline double phase_of(Complex z) {
  double t = std::atan2(z.imag(), z.real());
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

inline Complex unit(double phase) { return std::polar(1.0, phase); }

/// An integer label together with the dimension it is reduced against.
struct CyclicIndex {
  long raw = 1;
  int dim = 1;
};

struct ResolvedIndex {
  int canonical;          // in 1..dim
  double angular_offset;  // 2*pi times the number of wraps
};

inline int floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return static_cast<int>(q);
}

inline int canonical_index(long raw, int dim) {
  long r = (raw - 1) % dim;
  if (r < 0) r += dim;
  return static_cast<int>(r) + 1;
}

inline ResolvedIndex resolve(CyclicIndex idx) {
  return {canonical_index(idx.raw, idx.dim), kTwoPi * floor_div(idx.raw - 1, idx.dim)};
}

/// Validated eigensystem of a unitary matrix with eigenphases sorted
/// ascending in [0, 2*pi). Immutable after construction.
class EigenSystem {
 public:
  int dim() const { return static_cast<int>(phases_.size()); }
  const std::vector<double>& phases() const { return phases_; }
  /// Columns are orthonormal eigenvectors, ordered like phases().
  const Matrix& basis() const { return basis_; }
  /// The matrix the system was ingested from (diagonal for raw spectra).
  const Matrix& matrix() const { return matrix_; }
  double unitarity_residual() const { return unitarity_residual_; }
  double gram_residual() const { return gram_residual_; }
  double max_eigen_residual() const { return max_eigen_residual_; }

  double phase(long j) const { return phases_[canonical_index(j, dim()) - 1]; }
  /// Angular coordinate of a cyclic index (phase plus 2*pi per wrap).
  double unwrapped_phase(long j) const {
    auto r = resolve({j, dim()});
    return phases_[r.canonical - 1] + r.angular_offset;
  }
  Complex eigenvalue(long j) const { return unit(phase(j)); }
  std::vector<Complex> eigenvalues() const {
    std::vector<Complex> out;
    out.reserve(phases_.size());
    for (double t : phases_) out.push_back(unit(t));
    return out;
  }

 private:
  friend EigenSystem ingest_matrix(const Matrix&, double);
  friend EigenSystem ingest_spectrum(std::span<const double>);
  friend EigenSystem with_basis(const EigenSystem&, const Matrix&);

  std::vector<double> phases_;
  Matrix basis_;
  Matrix matrix_;
  double unitarity_residual_ = 0.0;
  double gram_residual_ = 0.0;
  double max_eigen_residual_ = 0.0;
};

namespace detail {

inline std::vector<int> stable_phase_order(const std::vector<double>& phases) {
  std::vector<int> order(phases.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return phases[a] < phases[b]; });
  return order;
}

inline bool is_exactly_diagonal(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j && m(i, j) != Complex(0.0, 0.0)) return false;
  return true;
}

inline double max_column_residual(const Matrix& sigma, const Matrix& basis,
                                  const std::vector<double>& phases) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    Vector col = basis.col(j);
    double r = (sigma * col - unit(phases[j]) * col).norm();
    worst = std::max(worst, r);
  }
  return worst;
}

}  // namespace detail

/// Eigendecomposition of a unitary matrix. Uses the complex Schur form, which
/// is diagonal for normal matrices, so the Schur vectors form an orthonormal
/// eigenbasis even for repeated eigenvalues.
inline EigenSystem ingest_matrix(const Matrix& sigma, double tol = kDefaultUnitarityTol) {
  if (sigma.rows() != sigma.cols())
    throw Error(ErrorCode::ShapeMismatch, "matrix must be square");
  const auto n = sigma.rows();
  if (n < 1) throw Error(ErrorCode::EmptySpectrum, "matrix has no rows");
  if (!sigma.allFinite()) throw Error(ErrorCode::ParseError, "matrix has non-finite entries");

  const double unitarity = (sigma.adjoint() * sigma - Matrix::Identity(n, n)).norm();
  if (unitarity > tol)
    throw Error(ErrorCode::NotUnitary,
                "||S^H S - I||_F = " + std::to_string(unitarity) + " exceeds tolerance");

  std::vector<double> raw_phases(static_cast<std::size_t>(n));
  Matrix vectors;
  if (detail::is_exactly_diagonal(sigma)) {
    for (Eigen::Index j = 0; j < n; ++j) raw_phases[j] = phase_of(sigma(j, j));
    vectors = Matrix::Identity(n, n);
  } else {
    Eigen::ComplexSchur<Matrix> schur(sigma, true);
    if (schur.info() != Eigen::Success)
      throw Error(ErrorCode::EigensolveFailed, "Schur iteration did not converge");
    const Matrix& t = schur.matrixT();
    for (Eigen::Index j = 0; j < n; ++j) raw_phases[j] = phase_of(t(j, j));
    vectors = schur.matrixU();
  }

  const auto order = detail::stable_phase_order(raw_phases);
  EigenSystem es;
  es.phases_.resize(order.size());
  es.basis_.resize(n, n);
  for (std::size_t j = 0; j < order.size(); ++j) {
    es.phases_[j] = raw_phases[order[j]];
    es.basis_.col(static_cast<Eigen::Index>(j)) = vectors.col(order[j]);
  }
  es.matrix_ = sigma;
  es.unitarity_residual_ = unitarity;
  es.gram_residual_ = (es.basis_.adjoint() * es.basis_ - Matrix::Identity(n, n)).norm();
  es.max_eigen_residual_ = detail::max_column_residual(sigma, es.basis_, es.phases_);
  if (es.max_eigen_residual_ > tol || es.gram_residual_ > tol)
    throw Error(ErrorCode::EigensolveFailed,
                "eigen-residual " + std::to_string(es.max_eigen_residual_) +
                    " or basis Gram residual " + std::to_string(es.gram_residual_) +
                    " exceeds tolerance");
  return es;
}

/// Builds the eigensystem of diag(exp(i*phase)). Phases are reduced through
/// the same complex-argument route as ingest_matrix, so both paths agree
/// bitwise on the implied diagonal matrix.
inline EigenSystem ingest_spectrum(std::span<const double> phases) {
  if (phases.empty()) throw Error(ErrorCode::EmptySpectrum, "spectrum is empty");
  const auto n = static_cast<Eigen::Index>(phases.size());
  Matrix sigma = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!std::isfinite(phases[j])) throw Error(ErrorCode::ParseError, "non-finite phase");
    sigma(j, j) = unit(phases[j]);
  }
  std::vector<double> reduced(phases.size());
  for (std::size_t j = 0; j < phases.size(); ++j) reduced[j] = phase_of(sigma(j, j));
  const auto order = detail::stable_phase_order(reduced);

  EigenSystem es;
  es.phases_.resize(order.size());
  es.basis_ = Matrix::Zero(n, n);
  for (std::size_t j = 0; j < order.size(); ++j) {
    es.phases_[j] = reduced[order[j]];
    es.basis_(order[j], static_cast<Eigen::Index>(j)) = 1.0;
  }
  es.matrix_ = std::move(sigma);
  es.max_eigen_residual_ = detail::max_column_residual(es.matrix_, es.basis_, es.phases_);
  return es;
}

inline EigenSystem ingest_spectrum(std::initializer_list<double> phases) {
  return ingest_spectrum(std::span<const double>(phases.begin(), phases.size()));
}

/// Same eigensystem with a different orthonormal eigenbasis (for example a
/// rotation inside a degenerate eigenspace). Checked against the residual
/// contract.
inline EigenSystem with_basis(const EigenSystem& es, const Matrix& basis) {
  if (basis.rows() != es.dim() || basis.cols() != es.dim())
    throw Error(ErrorCode::ShapeMismatch, "basis shape does not match dimension");
  EigenSystem out = es;
  out.basis_ = basis;
  const auto n = basis.rows();
  out.gram_residual_ = (basis.adjoint() * basis - Matrix::Identity(n, n)).norm();
  out.max_eigen_residual_ = detail::max_column_residual(out.matrix_, basis, out.phases_);
  if (out.gram_residual_ > kDefaultResidualTol || out.max_eigen_residual_ > kDefaultResidualTol)
    throw Error(ErrorCode::EigensolveFailed, "replacement basis violates the residual contract");
  return out;
}

/// Orientation-reversing relabeling r(j) = ((c - j) mod N) + 1, which sends
/// the pivot c to 1. Returned as a 1-based table: map[j] = r(j), map[0] unused.
/// r is an involution and preserves cyclic gap multisets.
inline std::vector<int> reflect_labels(int dim, int pivot) {
  std::vector<int> map(static_cast<std::size_t>(dim) + 1, 0);
  for (int j = 1; j <= dim; ++j) map[j] = canonical_index(pivot - j + 1, dim);
  return map;
}

}  // namespace rankrange
