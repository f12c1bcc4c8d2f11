#pragma once

// Shared generators for the test binaries.

#include <rankrange/pair.hpp>
#include <rankrange/sampling.hpp>

#include <optional>

namespace rankrange::testing {

struct PairCase {
  EigenSystem es;
  SharedVertexProblem problem;
};

/// Five random eigenvalues, interleaved triangles {1,2,4} and {1,3,5} sharing vertex 1,
/// target drawn until it lies in both with shared weight <= 1/2 in the first.
inline PairCase random_pair_case(sampling::Rng& rng) {
  for (;;) {
    const auto p = sampling::random_phases(rng, 5);
    const auto es = ingest_spectrum(std::span<const double>(p));
    const TriangleSpec t(1, 2, 4, 5), r(1, 3, 5, 5);
    for (int attempt = 0; attempt < 50; ++attempt) {
      const Complex z = sampling::random_disk_point(rng);
      try {
        const auto wt = solve_barycentric(es, t, z);
        const auto wr = solve_barycentric(es, r, z);
        if (wt.weight_of(1) > 0.5) continue;
        return {es, shared_vertex_problem(wt, wr, 1, z)};
      } catch (const Error&) {
      }
    }
  }
}

/// <phi_a, D phi_b> in eigen-coordinates.
inline Complex sandwich(const VectorCoefficients& a, const VectorCoefficients& b,
                        const EigenSystem& es) {
  Complex acc{};
  for (const auto& [j, z] : a.coefficients) acc += std::conj(z) * es.eigenvalue(j) * b.at(j);
  return acc;
}

}  // namespace rankrange::testing
