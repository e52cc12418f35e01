#pragma once

#include <cstdint>

#include "dynev/dynamic_operator.hpp"
#include "dynev/power_method.hpp"

namespace dynev {

/// splitmix64 of (seed, counter); seeds of successive power-method calls.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t counter);

struct TrackerStats {
  std::size_t recompute_count = 0;
  std::size_t t = 0;
  std::uint64_t touched_nnz_total = 0;
};

struct UpdateResult {
  bool dead = false;
  std::size_t index = 0;              // r_t, 0-based
  const DenseVector* w = nullptr;     // valid until the next update
  double quad = 0.0;
  bool recomputed = false;
  std::uint64_t touched = 0;          // work of this update
};

/// Maintains a witness w with w^T A_t w >= 1 - 40 eps for a decremental
/// operator whose top eigenvalue starts near 1, or reports death.
class DecrementalTracker {
 public:
  DecrementalTracker(double eps, DynamicOperator op, std::uint64_t seed,
                     PowerKernel kernel = PowerKernel::kMatvec);
  DecrementalTracker(double eps, SparseSymMatrix a0, std::uint64_t seed,
                     PowerKernel kernel = PowerKernel::kMatvec);

  UpdateResult update(const SparseVector& v);

  bool dead() const noexcept { return dead_; }
  double eps() const noexcept { return eps_; }
  double threshold() const noexcept { return 1.0 - 40.0 * eps_; }
  std::size_t current_index() const noexcept { return r_; }
  const DenseVector& witness() const { return set_.witnesses[r_]; }
  double current_quad() const { return set_.quad_forms[r_]; }
  // Latest candidate set; after death it still holds the failed run.
  const CandidateSet& candidates() const noexcept { return set_; }
  const PowerConfig& config() const noexcept { return cfg_; }
  const DynamicOperator& op() const noexcept { return op_; }
  DynamicOperator release_operator() && { return std::move(op_); }

  TrackerStats stats() const noexcept { return {recompute_count_, op_.update_count(), touched_}; }

 private:
  void recompute();
  void refresh_caches();

  double eps_;
  DynamicOperator op_;
  std::uint64_t seed_;
  PowerConfig cfg_;
  CandidateSet set_;
  std::size_t r_ = 0;
  bool dead_ = false;
  std::size_t recompute_count_ = 0;
  std::uint64_t touched_ = 0;
};

}  // namespace dynev
