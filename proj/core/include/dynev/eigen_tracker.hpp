#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "dynev/decremental_tracker.hpp"

namespace dynev {

struct EigenTrackerOptions {
  PowerKernel kernel = PowerKernel::kMatvec;
  // lambda is reported as 0 once the scale would drop below
  // floor_ratio * (initial estimate of lambda_max(A_0)).
  double floor_ratio = 1e-12;
};

struct EigenEstimate {
  double lambda = 0.0;
  const DenseVector* w = nullptr;  // unit; valid until the next update
  std::size_t epoch = 0;
};

/// Rank-one point Y = Q Q^T of min Tr[Y] s.t. Tr[A_t Y] >= 1, Y psd.
struct SdpSolution {
  double value = 0.0;  // Tr[Y] = ||Q||^2
  DenseVector Q;
};

struct EigenTrackerStats {
  std::size_t t = 0;
  std::size_t epoch = 0;
  double nu = 0.0;
  std::size_t recompute_count = 0;  // power-method runs of all inner trackers
  std::size_t restarts = 0;         // inner trackers built after the first
  std::uint64_t touched_nnz_total = 0;
  bool zero_mode = false;
};

/// Approximate top eigenpair of A_t = A_0 - sum v v^T under decremental
/// updates, for any scale of A_0. The inner tracker runs on A_t / nu; when it
/// dies nu shrinks by whole epochs and the inner tracker is rebuilt.
class EigenTracker {
 public:
  // eps in (0, 1).
  EigenTracker(double eps, SparseSymMatrix a0, std::uint64_t seed, EigenTrackerOptions opts = {});

  EigenEstimate update(const SparseVector& v);
  EigenEstimate query() const;
  /// Throws InfeasibleError when lambda = 0.
  SdpSolution sdp_query() const;

  /// eps / (40 (1 + eps)), the accuracy handed to the inner tracker.
  static double inner_eps(double eps);

  double eps() const noexcept { return eps_; }
  double eps_inner() const noexcept { return eps_inner_; }
  double nu() const noexcept { return nu_; }
  double initial_nu() const noexcept { return nu0_; }
  double floor() const noexcept { return floor_; }
  double shrink_factor() const noexcept { return step_; }
  bool zero_mode() const noexcept { return !inner_; }
  std::size_t epoch() const noexcept { return epoch_; }
  // Unscaled-by-nu view is op().to_dense() / op().scale().
  const DynamicOperator& op() const;
  DenseMatrix dense_current() const;

  bool last_recomputed() const noexcept { return last_recomputed_; }
  std::uint64_t last_touched() const noexcept { return last_touched_; }
  EigenTrackerStats stats() const;
  std::string snapshot_json() const;

 private:
  double nu_at(std::size_t epoch) const;
  void start_inner(DynamicOperator op);
  void shrink();
  void enter_zero(DynamicOperator op, const DenseVector& w);

  double eps_;
  double eps_inner_;
  double step_;
  std::uint64_t seed_;
  EigenTrackerOptions opts_;
  PowerKernel inner_kernel_;

  double nu0_ = 0.0;
  double nu_ = 0.0;
  double floor_ = 0.0;
  std::size_t epoch_ = 0;

  std::optional<DecrementalTracker> inner_;
  std::optional<DynamicOperator> zero_op_;
  DenseVector zero_w_;

  std::size_t inner_builds_ = 0;
  std::size_t retired_recomputes_ = 0;
  std::uint64_t retired_touched_ = 0;
  std::uint64_t estimate_touched_ = 0;
  bool last_recomputed_ = false;
  std::uint64_t last_touched_ = 0;
};

}  // namespace dynev
