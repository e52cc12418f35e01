#include <gtest/gtest.h>

#include <cmath>

#include "dynev/checkpsd.hpp"
#include "dynev/error.hpp"
#include "dynev/spectral_oracle.hpp"
#include "dynev/stream_gen.hpp"
#include "support.hpp"

using namespace dynev;

TEST(DeflatedMatvec, Examples) {
  auto id = SparseSymMatrix::identity(2);
  DenseVector e1 = DenseVector::Unit(2, 0);
  DenseVector x(2);
  x << 0.3, -2;
  EXPECT_EQ(deflated_matvec(id, {}, x), x);
  DenseVector y = deflated_matvec(id, {{1.0, e1}}, e1);
  EXPECT_NEAR(y[0], 0.9, 1e-15);
  EXPECT_EQ(y[1], 0.0);
  EXPECT_EQ(deflated_matvec(id, {{0.0, e1}}, x), x);
  EXPECT_THROW(deflated_matvec(id, {}, DenseVector::Ones(3)), DimensionError);
}

TEST(DeflatedOperator, MatchesExplicitDeflation) {
  Rng rng(1);
  auto a = dynev::testing::planted(dynev::testing::linear_spectrum(12, 1, 0.1), rng);
  DeflatedOperator op(a);
  std::vector<Deflation> defl;
  for (int k = 0; k < 20; ++k) {  // crosses the n/2 fold point
    DenseVector w = gaussian_vector(12, rng).normalized();
    const double mu = 0.05 * (k + 1);
    op.deflate(mu, w);
    defl.push_back({mu, w});
    DenseVector x = gaussian_vector(12, rng);
    DenseVector y;
    op.apply(x, y, nullptr);
    ASSERT_TRUE(y.isApprox(deflated_matvec(a, defl, x), 1e-12));
  }
  EXPECT_EQ(op.count(), 20u);
}

TEST(CheckConfig, StepCount) {
  auto c = CheckConfig::make(0.1, 1.0, 10);
  EXPECT_DOUBLE_EQ(c.eps_run, 0.75);
  EXPECT_DOUBLE_EQ(c.eps_num, 0.05);
  EXPECT_EQ(c.steps, static_cast<std::size_t>(std::ceil(20.0 / (0.75 * 0.0625) * std::log2(10.0))));
  auto d = CheckConfig::make(0.5, 2.0, 10);
  EXPECT_DOUBLE_EQ(d.eps_run, 0.5 / 1.5);
  EXPECT_THROW(CheckConfig::make(0.0, 2, 3), std::invalid_argument);
  EXPECT_THROW(CheckConfig::make(0.1, 0.5, 3), std::invalid_argument);
}

TEST(CheckPsd, HardCap) {
  auto c = CheckConfig::make(0.1, 1.0, 10);
  c.max_steps = 10;
  EXPECT_THROW(check_psd(SparseSymMatrix::identity(10), 1, c), std::invalid_argument);
}

TEST(CheckPsd, IdentityCertified) {
  auto a = SparseSymMatrix::identity(10);
  auto v = check_psd(0.1, 1.0, a, 3);
  ASSERT_TRUE(v.certified());
  const DenseMatrix r = a.to_dense() - v.X * v.X.transpose();
  EXPECT_LE(exact_spectral_norm(r), 0.1);
  EXPECT_GE(v.min_mu, -1e-9);
}

TEST(CheckPsd, IndefiniteRejected) {
  auto v = check_psd(0.1, 2.0, SparseSymMatrix::diagonal({1, -1}), 3);
  EXPECT_FALSE(v.certified());
  // either an intermediate mu_t < 0 or the final residual check
  if (!v.failed_step) EXPECT_GE(v.sigma, (1 - 0.75) * 1.0 / 2.0);
  EXPECT_TRUE(v.failed_step || v.final_check_failed);
}

TEST(CheckPsd, NegativeFirstStepRejected) {
  auto v = check_psd(0.1, 2.0, SparseSymMatrix::diagonal({-1, -2}), 3);
  EXPECT_FALSE(v.certified());
  ASSERT_TRUE(v.failed_step);
  EXPECT_EQ(*v.failed_step, 1u);
}

TEST(CheckPsd, PlantedConditionNumber) {
  const Index n = 20;
  const double kappa = 20;
  Rng rng(44);
  std::vector<double> d(n);
  for (Index i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = std::pow(kappa, -double(i) / double(n - 1));
  const DenseMatrix a = planted_matrix(d, random_orthogonal(n, rng));
  auto v = check_psd(0.1, kappa, SparseSymMatrix::from_dense(a), 5);
  ASSERT_TRUE(v.certified());
  EXPECT_GE(v.min_mu, -1e-9);
  EXPECT_LE(exact_spectral_norm(a - v.X * v.X.transpose()), 0.1 * exact_lambda_min(a) + 1e-8);
  EXPECT_EQ(v.X.cols(), static_cast<Index>(v.steps));
}

TEST(CheckPsd, Property1DiagnosticsRecorded) {
  auto c = CheckConfig::make(0.5, 2.0, 6);
  c.property1 = true;
  auto v = check_psd(SparseSymMatrix::identity(6), 1, c);
  EXPECT_TRUE(v.certified());
  EXPECT_EQ(v.property1.steps_checked, v.steps);
}

TEST(CheckPsd, Deterministic) {
  Rng rng(2);
  auto a = dynev::testing::planted(dynev::testing::linear_spectrum(8, 1, 0.2), rng);
  auto x = check_psd(0.2, 5, a, 9);
  auto y = check_psd(0.2, 5, a, 9);
  EXPECT_EQ(x.X, y.X);
  EXPECT_EQ(x.sigma, y.sigma);
}
