#include <gtest/gtest.h>

#include <cmath>

#include "dynev/dynamic_operator.hpp"
#include "dynev/error.hpp"
#include "support.hpp"

using namespace dynev;
using dynev::testing::dense_of;
using dynev::testing::random_sparse;

namespace {

DenseVector vec(std::initializer_list<double> v) {
  DenseVector x(static_cast<Index>(v.size()));
  Index i = 0;
  for (double a : v) x[i++] = a;
  return x;
}

}  // namespace

TEST(SparseVector, RejectsBadEntries) {
  EXPECT_THROW(SparseVector(3, {2, 1}, {1.0, 1.0}), DimensionError);
  EXPECT_THROW(SparseVector(3, {3}, {1.0}), DimensionError);
  EXPECT_THROW(SparseVector(3, {0}, {std::nan("")}), NumericalError);
  SparseVector v(4, {0, 2}, {0.0, 5.0});
  EXPECT_EQ(v.nnz(), 1u);
  EXPECT_EQ(v.indices()[0], 2);
}

TEST(SparseVector, FromPairsSortsAndRejectsDuplicates) {
  auto v = SparseVector::from_pairs(5, {{3, 1.0}, {1, 2.0}});
  EXPECT_EQ(v.indices()[0], 1);
  EXPECT_THROW(SparseVector::from_pairs(5, {{1, 1.0}, {1, 2.0}}), DimensionError);
}

TEST(SparseSymMatrix, MirrorsTriangleAndSumsDuplicates) {
  auto a = SparseSymMatrix::from_triangle(3, {{1, 0, 2.0}, {1, 0, 1.0}, {2, 2, 4.0}});
  EXPECT_DOUBLE_EQ(a(0, 1), 3.0);
  EXPECT_DOUBLE_EQ(a(1, 0), 3.0);
  EXPECT_DOUBLE_EQ(a(2, 2), 4.0);
  EXPECT_EQ(a.nnz(), 3u);
  DenseMatrix d = a.to_dense();
  EXPECT_TRUE(d.isApprox(d.transpose()));
}

TEST(SparseSymMatrix, FromDenseRejectsAsymmetry) {
  DenseMatrix m(2, 2);
  m << 1, 2, 3, 1;
  EXPECT_THROW(SparseSymMatrix::from_dense(m), DimensionError);
}

TEST(Matvec, SpecExamples) {
  DynamicOperator op(SparseSymMatrix::diagonal({2, 1}));
  op.push_update(SparseVector::unit(2, 1));
  EXPECT_TRUE(op.matvec(vec({1, 1})).isApprox(vec({2, 0})));

  DynamicOperator id(SparseSymMatrix::identity(3));
  EXPECT_EQ(id.matvec(vec({1, 2, 3})), vec({1, 2, 3}));

  DynamicOperator drained(SparseSymMatrix::identity(2));
  drained.push_update(SparseVector::unit(2, 0));
  drained.push_update(SparseVector::unit(2, 1));
  EXPECT_EQ(drained.matvec(vec({0.3, -7})), vec({0, 0}));
}

TEST(Matvec, Errors) {
  DynamicOperator op(SparseSymMatrix::identity(2));
  EXPECT_THROW(op.matvec(vec({1, 2, 3})), DimensionError);
  DynamicOperator big(SparseSymMatrix::identity(2, 1e300));
  big.set_scale(1e300);
  EXPECT_THROW(big.matvec(vec({1, 1})), NumericalError);
}

TEST(QuadForm, SpecExamples) {
  DynamicOperator id(SparseSymMatrix::identity(2));
  EXPECT_DOUBLE_EQ(id.quad_form(vec({1, 0})), 1.0);

  DynamicOperator op(SparseSymMatrix::identity(2));
  op.push_update(SparseVector::unit(2, 1));
  EXPECT_NEAR(op.quad_form(vec({1, 1}) / std::sqrt(2.0)), 0.5, 1e-15);

  DynamicOperator scaled(SparseSymMatrix::diagonal({4, 1}), 0.25);
  EXPECT_DOUBLE_EQ(scaled.quad_form(vec({1, 0})), 1.0);
  EXPECT_THROW(scaled.quad_form(vec({1})), DimensionError);
}

TEST(QuadFormIncrement, SpecExamples) {
  EXPECT_DOUBLE_EQ(quad_form_increment(1.0, SparseVector::unit(2, 1), vec({1, 0}), 1.0), 1.0);
  EXPECT_DOUBLE_EQ(quad_form_increment(1.0, SparseVector::unit(2, 0), vec({1, 0}), 1.0), 0.0);
  SparseVector ones(2, {0, 1}, {1.0, 1.0});
  EXPECT_DOUBLE_EQ(quad_form_increment(2.0, ones, vec({1, 0}), 1.0), 1.0);

  // matches full recomputation
  DynamicOperator op(SparseSymMatrix::diagonal({2, 3}));
  DenseVector w = vec({1, 0});
  const double q0 = op.quad_form(w);
  op.push_update(ones);
  EXPECT_DOUBLE_EQ(quad_form_increment(q0, ones, w, 1.0), op.quad_form(w));
}

TEST(PushUpdate, SpecExamples) {
  DynamicOperator op(SparseSymMatrix::identity(2));
  op.push_update(SparseVector::unit(2, 0));
  EXPECT_EQ(op.update_count(), 1u);
  op.push_update(SparseVector::unit(2, 1, 2.0));
  ASSERT_EQ(op.update_count(), 2u);
  EXPECT_EQ(op.update(0), SparseVector::unit(2, 0));
  EXPECT_EQ(op.update(1), SparseVector::unit(2, 1, 2.0));
  EXPECT_THROW(op.push_update(SparseVector::unit(3, 2)), DimensionError);
  EXPECT_THROW(SparseVector::unit(2, 2), DimensionError);
}

TEST(PushUpdate, EmptyUpdateIsNoop) {
  DynamicOperator op(SparseSymMatrix::identity(3));
  op.push_update(SparseVector(3));
  EXPECT_EQ(op.update_count(), 1u);
  EXPECT_TRUE(op.to_dense().isApprox(DenseMatrix::Identity(3, 3)));
}

TEST(GaussianVector, DeterministicForSeed) {
  Rng a(42), b(42);
  EXPECT_EQ(gaussian_vector(17, a), gaussian_vector(17, b));
}

TEST(GaussianVector, NormConcentrates) {
  int ok = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng r(s);
    const double n2 = gaussian_vector(10000, r).squaredNorm();
    ok += std::abs(n2 - 1e4) <= 0.3e4;
  }
  EXPECT_EQ(ok, 50);
}

TEST(GaussianVector, MeanNearZero) {
  Rng r(9);
  const DenseVector x = gaussian_vector(100000, r);
  EXPECT_LE(std::abs(x.mean()), 3.0 / std::sqrt(1e5));
}

// Random operator states against the dense oracle.
TEST(DynamicOperatorProperty, QuadFormMatchesDense) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const Index n = 5 + static_cast<Index>(seed * 5 % 96);
    DenseMatrix g = DenseMatrix::Random(n, n);
    DynamicOperator op(SparseSymMatrix::from_dense(g * g.transpose()));
    const SparseSymMatrix base_copy = op.base();
    std::uniform_int_distribution<int> pushes(0, 100);
    const int P = pushes(rng);
    for (int k = 0; k < P; ++k) op.push_update(random_sparse(n, 1 + k % 7, rng, 0.3));
    const DenseMatrix a = dense_of(op);
    for (int trial = 0; trial < 5; ++trial) {
      DenseVector w = gaussian_vector(n, rng);
      const double exact = w.dot(a * w);
      EXPECT_NEAR(op.quad_form(w), exact, 1e-10 * std::max(1.0, std::abs(exact)));
      EXPECT_TRUE(op.matvec(w).isApprox(a * w, 1e-10));
    }
    // base untouched by pushes
    EXPECT_EQ(op.base().nnz(), base_copy.nnz());
    EXPECT_TRUE(op.base().to_dense() == base_copy.to_dense());
    EXPECT_TRUE(op.compact().to_dense().isApprox(a, 1e-12));
  }
}

TEST(DynamicOperatorProperty, ChainedIncrementsMatchFull) {
  Rng rng(5);
  const Index n = 60;
  DenseMatrix g = DenseMatrix::Random(n, n);
  DynamicOperator op(SparseSymMatrix::from_dense(g * g.transpose()));
  DenseVector w = gaussian_vector(n, rng).normalized();
  double q = op.quad_form(w);
  for (int k = 0; k < 2000; ++k) {
    SparseVector v = random_sparse(n, 1 + k % 9, rng, 0.05);
    op.push_update(v);
    q = quad_form_increment(q, v, w, op.scale());
    const double full = op.quad_form(w);
    ASSERT_NEAR(q, full, 1e-8 * (1.0 + std::abs(full)));
  }
}

TEST(DynamicOperatorProperty, TouchedCountsAreExact) {
  Rng rng(3);
  const Index n = 40;
  DynamicOperator op(SparseSymMatrix::identity(n));
  std::size_t logged = 0;
  for (int k = 0; k < 30; ++k) {
    SparseVector v = random_sparse(n, 1 + k % 5, rng);
    logged += v.nnz();
    op.push_update(v);
  }
  WorkMeter m;
  DenseVector x = gaussian_vector(n, rng);
  op.matvec(x, &m);
  EXPECT_EQ(m.touched, op.base().nnz() + logged);
  WorkMeter q;
  op.quad_form(x, &q);
  EXPECT_EQ(q.touched, op.base().nnz() + logged);
  WorkMeter inc;
  SparseVector v = random_sparse(n, 6, rng);
  quad_form_increment(1.0, v, x, 1.0, &inc);
  EXPECT_EQ(inc.touched, 6u);
}

TEST(DynamicOperator, DenseCacheAgreesWithReplay) {
  Rng rng(8);
  const Index n = 25;
  DynamicOperator a(SparseSymMatrix::identity(n, 3.0), 0.5);
  DynamicOperator b(SparseSymMatrix::identity(n, 3.0), 0.5);
  b.enable_dense_cache();
  for (int k = 0; k < 40; ++k) {
    SparseVector v = random_sparse(n, 4, rng, 0.2);
    a.push_update(v);
    b.push_update(v);
  }
  EXPECT_TRUE(a.to_dense().isApprox(b.to_dense(), 1e-13));
}
