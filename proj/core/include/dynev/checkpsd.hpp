#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dynev/power_method.hpp"

namespace dynev {

struct Deflation {
  double mu;
  DenseVector w;
};

/// A x - sum (mu_i / 10) w_i (w_i^T x), never materializing the deflated matrix.
DenseVector deflated_matvec(const SparseSymMatrix& a, const std::vector<Deflation>& deflations,
                            const DenseVector& x);

/// A - sum (mu_i/10) w_i w_i^T. Pending rank-one terms are folded into a
/// dense matrix once there are more than n/2 of them.
class DeflatedOperator final : public SymmetricOperator {
 public:
  explicit DeflatedOperator(const SparseSymMatrix& a);
  Index dim() const override { return a_->n(); }
  void deflate(double mu, const DenseVector& w);
  std::size_t count() const noexcept { return total_; }
  void apply(const DenseVector& x, DenseVector& y, WorkMeter* meter) const override;
  double quad_form(const DenseVector& w, WorkMeter* meter) const override;
  DenseMatrix to_dense() const override;

 private:
  void fold();

  const SparseSymMatrix* a_;
  std::optional<DenseMatrix> dense_;
  std::vector<Deflation> pending_;
  std::size_t total_ = 0;
};

struct CheckConfig {
  double delta = 0.1;
  double kappa = 1.0;
  double eps_run = 0.75;  // min(3/4, (1 - delta)/(1 + delta))
  double eps_num = 0.05;  // min(eps_run, 0.05); sets the iteration count
  std::size_t steps = 1;  // T
  std::size_t copies = 1;
  std::size_t iterations = 1;
  std::size_t max_steps = 1000000;
  // mu_t counts as negative only below -negativity_tol * mu_1
  double negativity_tol = 1e-10;
  PowerKernel kernel = PowerKernel::kAuto;
  bool property1 = false;

  static CheckConfig make(double delta, double kappa, Index n);
};

struct Property1Stats {
  std::size_t steps_checked = 0;
  std::size_t violations = 0;
  double worst_excess = 0.0;  // max over checks of (w^T u_i)^2 - bound
};

struct PsdVerdict {
  enum class Kind { kCertificate, kNotPsd };
  Kind kind = Kind::kNotPsd;
  DenseMatrix X;                          // n x T, only for certificates
  std::optional<std::size_t> failed_step;  // 1-based step with mu_t < 0
  bool final_check_failed = false;
  double mu1 = 0.0;
  double sigma = 0.0;
  double threshold = 0.0;  // (1 + eps_run) mu1 delta / kappa
  std::size_t steps = 0;
  double min_mu = 0.0;
  std::uint64_t touched = 0;
  Property1Stats property1;

  bool certified() const noexcept { return kind == Kind::kCertificate; }
};

PsdVerdict check_psd(double delta, double kappa, const SparseSymMatrix& a, std::uint64_t seed);
PsdVerdict check_psd(const SparseSymMatrix& a, std::uint64_t seed, const CheckConfig& cfg);

}  // namespace dynev
