#include <rankrange/sampling.hpp>
#include <rankrange/spectrum.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>

using namespace rankrange;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> fifth_roots() {
  std::vector<double> p;
  for (int j = 0; j < 5; ++j) p.push_back(kTwoPi * j / 5);
  return p;
}

}  // namespace

TEST(Ingest, IdentityMatrix) {
  const auto es = ingest_matrix(Matrix::Identity(4, 4), 1e-10);
  EXPECT_EQ(es.dim(), 4);
  for (double t : es.phases()) EXPECT_EQ(t, 0.0);
  EXPECT_LE((es.basis() - Matrix::Identity(4, 4)).norm(), 1e-15);
}

TEST(Ingest, DiagonalFifthRoots) {
  Matrix m = Matrix::Zero(5, 5);
  const auto p = fifth_roots();
  for (int j = 0; j < 5; ++j) m(j, j) = unit(p[j]);
  const auto es = ingest_matrix(m);
  for (int j = 0; j < 5; ++j) EXPECT_NEAR(es.phases()[j], p[j], 1e-15);
  EXPECT_LE((es.basis() - Matrix::Identity(5, 5)).norm(), 1e-15);
}

TEST(Ingest, ConjugatedFifthRoots) {
  sampling::Rng rng(11);
  const auto q = sampling::random_unitary(rng, 5);
  const auto p = fifth_roots();
  const auto es = ingest_matrix(sampling::conjugated(q, p));
  for (int j = 0; j < 5; ++j) EXPECT_NEAR(es.phases()[j], p[j], 1e-10);
  EXPECT_LE(es.max_eigen_residual(), 1e-10);
  EXPECT_LE((es.basis().adjoint() * es.basis() - Matrix::Identity(5, 5)).norm(), 1e-10);
  for (int j = 1; j <= 5; ++j) {
    const Vector v = es.basis().col(j - 1);
    EXPECT_LE((es.matrix() * v - es.eigenvalue(j) * v).norm(), 1e-10);
  }
}

TEST(Ingest, RandomUnitariesMeetResidualContract) {
  sampling::Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 12;
    const auto es = ingest_matrix(sampling::random_unitary(rng, n));
    EXPECT_LE(es.max_eigen_residual(), kDefaultResidualTol);
    EXPECT_LE(es.gram_residual(), 1e-10);
    EXPECT_TRUE(std::is_sorted(es.phases().begin(), es.phases().end()));
    for (double t : es.phases()) {
      EXPECT_GE(t, 0.0);
      EXPECT_LT(t, kTwoPi);
    }
  }
}

TEST(Ingest, RejectsNonUnitary) {
  Matrix m = Matrix::Identity(3, 3);
  m(0, 1) = 0.1;
  try {
    ingest_matrix(m);
    FAIL() << "expected NotUnitary";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotUnitary);
  }
}

TEST(Ingest, RejectsNonSquare) {
  EXPECT_THROW(ingest_matrix(Matrix::Zero(2, 3)), Error);
}

TEST(Spectrum, SingleAndReduced) {
  EXPECT_EQ(ingest_spectrum({0.0}).dim(), 1);
  const auto es = ingest_spectrum({3 * kPi, kPi / 2});
  ASSERT_EQ(es.dim(), 2);
  EXPECT_NEAR(es.phases()[0], kPi / 2, 1e-15);
  EXPECT_NEAR(es.phases()[1], kPi, 1e-15);
}

TEST(Spectrum, Multiplicity) {
  const auto es = ingest_spectrum({0.0, 0.0, 0.0});
  EXPECT_EQ(es.dim(), 3);
  for (double t : es.phases()) EXPECT_EQ(t, 0.0);
}

TEST(Spectrum, EmptyRejected) {
  std::vector<double> none;
  try {
    ingest_spectrum(std::span<const double>(none));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptySpectrum);
  }
}

TEST(Spectrum, MatchesMatrixPathBitwise) {
  const std::vector<double> p = {5.9, 0.3, 2.2, 4.0};
  const auto a = ingest_spectrum(std::span<const double>(p));
  Matrix m = Matrix::Zero(4, 4);
  for (int j = 0; j < 4; ++j) m(j, j) = unit(p[j]);
  const auto b = ingest_matrix(m);
  EXPECT_EQ(a.phases(), b.phases());
}

TEST(CyclicIndex, Resolve) {
  auto r = resolve({6, 5});
  EXPECT_EQ(r.canonical, 1);
  EXPECT_DOUBLE_EQ(r.angular_offset, kTwoPi);
  r = resolve({1, 5});
  EXPECT_EQ(r.canonical, 1);
  EXPECT_DOUBLE_EQ(r.angular_offset, 0.0);
  r = resolve({0, 5});
  EXPECT_EQ(r.canonical, 5);
  EXPECT_DOUBLE_EQ(r.angular_offset, -kTwoPi);
  EXPECT_EQ(canonical_index(-9, 5), 1);
}

TEST(CyclicIndex, UnwrappedPhase) {
  const auto es = ingest_spectrum({0.5, 2.0, 4.0});
  EXPECT_DOUBLE_EQ(es.unwrapped_phase(4), 0.5 + kTwoPi);
  EXPECT_DOUBLE_EQ(es.unwrapped_phase(0), 4.0 - kTwoPi);
}

TEST(Reflection, ThirteenPivotFour) {
  const auto r = reflect_labels(13, 4);
  EXPECT_EQ(r[4], 1);
  EXPECT_EQ(r[1], 4);
  EXPECT_EQ(r[9], 9);
}

TEST(Reflection, FivePivotFive) {
  const auto r = reflect_labels(5, 5);
  EXPECT_EQ(r[5], 1);
  EXPECT_EQ(r[4], 2);
  EXPECT_EQ(r[3], 3);
}

TEST(Reflection, InvolutionAndGapMultisets) {
  sampling::Rng rng(5);
  for (int n = 3; n <= 20; ++n) {
    for (int c = 1; c <= n; ++c) {
      const auto r = reflect_labels(n, c);
      for (int j = 1; j <= n; ++j) EXPECT_EQ(r[r[j]], j);
    }
    std::uniform_int_distribution<int> pick(1, n);
    for (int t = 0; t < 50; ++t) {
      std::array<int, 3> v = {pick(rng), pick(rng), pick(rng)};
      std::sort(v.begin(), v.end());
      if (v[0] == v[1] || v[1] == v[2]) continue;
      const auto r = reflect_labels(n, pick(rng));
      auto gaps = [n](std::array<int, 3> a) {
        std::sort(a.begin(), a.end());
        std::array<int, 3> g = {a[1] - a[0], a[2] - a[1], n + a[0] - a[2]};
        std::sort(g.begin(), g.end());
        return g;
      };
      EXPECT_EQ(gaps(v), gaps({r[v[0]], r[v[1]], r[v[2]]}));
    }
  }
}
