#include "dynev/decremental_tracker.hpp"

#include <cmath>

#include "dynev/error.hpp"

namespace dynev {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

DecrementalTracker::DecrementalTracker(double eps, SparseSymMatrix a0, std::uint64_t seed,
                                       PowerKernel kernel)
    : DecrementalTracker(eps, DynamicOperator(std::move(a0)), seed, kernel) {}

DecrementalTracker::DecrementalTracker(double eps, DynamicOperator op, std::uint64_t seed,
                                       PowerKernel kernel)
    : eps_(clamp_power_eps(eps)), op_(std::move(op)), seed_(seed) {
  cfg_ = PowerConfig::make(eps_, op_.dim(), seed_, kernel);
  recompute();
}

void DecrementalTracker::recompute() {
  ++recompute_count_;
  cfg_.seed = derive_seed(seed_, recompute_count_);
  WorkMeter m;
  PowerOutcome out = power_method(op_, cfg_, &m);
  touched_ += m.touched;
  set_ = std::move(out.candidates);
  if (!set_.r0) {
    dead_ = true;
    r_ = 0;
    return;
  }
  r_ = *set_.r0;
}

void DecrementalTracker::refresh_caches() {
  WorkMeter m;
  for (std::size_t r = 0; r < set_.size(); ++r) set_.quad_forms[r] = op_.quad_form(set_.witnesses[r], &m);
  touched_ += m.touched;
  for (double q : set_.quad_forms)
    if (!std::isfinite(q)) throw NumericalError("DecrementalTracker: non-finite quadratic form");
}

UpdateResult DecrementalTracker::update(const SparseVector& v) {
  UpdateResult res;
  if (v.dim() != op_.dim()) throw DimensionError("DecrementalTracker::update: dimension mismatch");
  if (dead_) {
    res.dead = true;
    return res;
  }
  const std::uint64_t before = touched_;
  op_.push_update(v);

  WorkMeter m;
  bool finite = true;
  for (std::size_t r = 0; r < set_.size(); ++r) {
    set_.quad_forms[r] = quad_form_increment(set_.quad_forms[r], v, set_.witnesses[r], op_.scale(), &m);
    finite = finite && std::isfinite(set_.quad_forms[r]);
  }
  touched_ += m.touched;
  if (!finite) refresh_caches();

  const double thr = threshold() - kThresholdSlack;
  bool found = false;
  for (std::size_t r = 0; r < set_.size(); ++r)
    if (set_.quad_forms[r] >= thr) {
      r_ = r;
      found = true;
      break;
    }
  if (!found) {
    recompute();
    res.recomputed = true;
  }
  res.touched = touched_ - before;
  if (dead_) {
    res.dead = true;
    return res;
  }
  res.index = r_;
  res.w = &set_.witnesses[r_];
  res.quad = set_.quad_forms[r_];
  return res;
}

}  // namespace dynev
