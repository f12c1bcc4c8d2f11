#pragma once

// Seeded random spectra, unitaries and disk points (std::mt19937_64).

#include <rankrange/spectrum.hpp>

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace rankrange::sampling {

using Rng = std::mt19937_64;

inline std::vector<double> random_phases(Rng& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (double& t : out) t = u(rng);
  return out;
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the
/// phases of R's diagonal absorbed into Q.
inline Matrix random_unitary(Rng& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const double m = std::abs(r(j, j));
    if (m > 0.0) q.col(j) *= r(j, j) / m;
  }
  return q;
}

/// U diag(e^{i theta}) U^H.
inline Matrix conjugated(const Matrix& u, const std::vector<double>& phases) {
  Vector d(static_cast<Eigen::Index>(phases.size()));
  for (std::size_t j = 0; j < phases.size(); ++j) d(static_cast<Eigen::Index>(j)) = unit(phases[j]);
  return u * d.asDiagonal() * u.adjoint();
}

inline Complex random_disk_point(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = std::sqrt(u(rng));
  return std::polar(r, kTwoPi * u(rng));
}

inline Vector random_unit_vector(Rng& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  return v / v.norm();
}

}  // namespace rankrange::sampling
