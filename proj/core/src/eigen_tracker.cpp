#include "dynev/eigen_tracker.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "dynev/error.hpp"

namespace dynev {

double EigenTracker::inner_eps(double eps) { return clamp_power_eps(eps / (40.0 * (1.0 + eps))); }

EigenTracker::EigenTracker(double eps, SparseSymMatrix a0, std::uint64_t seed,
                           EigenTrackerOptions opts)
    : eps_(eps), seed_(seed), opts_(opts) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("EigenTracker: eps must lie in (0,1)");
  if (!(opts.floor_ratio > 0.0 && opts.floor_ratio < 1.0))
    throw std::invalid_argument("EigenTracker: floor_ratio must lie in (0,1)");
  const Index n = a0.n();
  eps_inner_ = inner_eps(eps);
  step_ = 1.0 - eps_inner_ / log2n(n);

  inner_kernel_ = opts.kernel;
  DynamicOperator op(std::move(a0), 1.0);
  if (opts.kernel == PowerKernel::kSquaring ||
      (opts.kernel == PowerKernel::kAuto && n <= kSquaringMaxDim))
    op.enable_dense_cache();

  if (op.base().nnz() == 0) {
    enter_zero(std::move(op), DenseVector::Unit(n, 0));
    return;
  }

  const double e0 = clamp_power_eps(eps_inner_ / (4.0 * log2n(n)));
  WorkMeter m;
  CandidateSet est = power_copies(op, copies_for(n), iterations_for(e0, n), derive_seed(seed_, 0),
                                  opts.kernel, &m);
  estimate_touched_ = m.touched;
  nu0_ = est.quad_forms[est.best()];
  if (!(nu0_ > 0.0)) {
    enter_zero(std::move(op), est.witnesses[est.best()]);
    return;
  }
  nu_ = nu0_;
  floor_ = nu0_ * opts.floor_ratio;
  op.set_scale(1.0 / nu_);
  start_inner(std::move(op));
  if (inner_->dead()) shrink();
}

double EigenTracker::nu_at(std::size_t epoch) const {
  return nu0_ * std::pow(step_, static_cast<double>(epoch));
}

void EigenTracker::start_inner(DynamicOperator op) {
  if (inner_) {
    retired_recomputes_ += inner_->stats().recompute_count;
    retired_touched_ += inner_->stats().touched_nnz_total;
    inner_.reset();
  }
  ++inner_builds_;
  inner_.emplace(eps_inner_, std::move(op), derive_seed(seed_, inner_builds_), inner_kernel_);
}

void EigenTracker::enter_zero(DynamicOperator op, const DenseVector& w) {
  if (inner_) {
    retired_recomputes_ += inner_->stats().recompute_count;
    retired_touched_ += inner_->stats().touched_nnz_total;
    inner_.reset();
  }
  zero_w_ = w;
  zero_op_.emplace(std::move(op));
}

void EigenTracker::shrink() {
  const double one_minus = 1.0 - eps_inner_;
  while (inner_ && inner_->dead()) {
    const CandidateSet& c = inner_->candidates();
    const std::size_t b = c.best();
    const double rho = nu_ * c.quad_forms[b];
    if (!(rho > floor_)) {
      DenseVector w = c.witnesses[b];
      enter_zero(std::move(*inner_).release_operator(), w);
      return;
    }
    // First epoch whose scale lets the failed run's best witness pass the
    // 1 - eps test. The power method output does not depend on the scale, so
    // every skipped epoch would have failed on the same witnesses.
    const double target = rho / one_minus;
    std::size_t k = 1;
    const double guess = std::ceil(std::log(target / nu_) / std::log(step_));
    if (std::isfinite(guess) && guess > 1.0) k = static_cast<std::size_t>(guess);
    while (k > 1 && nu_at(epoch_ + k - 1) <= target) --k;
    while (nu_at(epoch_ + k) > target) ++k;
    const double nu_next = nu_at(epoch_ + k);
    if (nu_next < floor_) {
      DenseVector w = c.witnesses[b];
      enter_zero(std::move(*inner_).release_operator(), w);
      return;
    }
    epoch_ += k;
    nu_ = nu_next;
    DynamicOperator op = std::move(*inner_).release_operator();
    op.set_scale(1.0 / nu_);
    start_inner(std::move(op));
  }
}

EigenEstimate EigenTracker::update(const SparseVector& v) {
  last_recomputed_ = false;
  last_touched_ = 0;
  if (!inner_) {
    zero_op_->push_update(v);
    return query();
  }
  const std::uint64_t before = stats().touched_nnz_total;
  UpdateResult r = inner_->update(v);
  last_recomputed_ = r.recomputed;
  if (r.dead) shrink();
  last_touched_ = stats().touched_nnz_total - before;
  return query();
}

EigenEstimate EigenTracker::query() const {
  if (!inner_) return {0.0, &zero_w_, epoch_};
  return {nu_ * inner_->current_quad(), &inner_->witness(), epoch_};
}

SdpSolution EigenTracker::sdp_query() const {
  const EigenEstimate e = query();
  if (!(e.lambda > 0.0)) throw InfeasibleError("sdp_query: Tr[A_t Y] >= 1 is infeasible (lambda = 0)");
  SdpSolution s;
  s.Q = *e.w / std::sqrt(e.lambda);
  s.value = 1.0 / e.lambda;
  return s;
}

const DynamicOperator& EigenTracker::op() const { return inner_ ? inner_->op() : *zero_op_; }

DenseMatrix EigenTracker::dense_current() const {
  const DynamicOperator& o = op();
  return o.to_dense() / o.scale();
}

EigenTrackerStats EigenTracker::stats() const {
  EigenTrackerStats s;
  s.t = op().update_count();
  s.epoch = epoch_;
  s.nu = nu_;
  s.recompute_count = retired_recomputes_ + (inner_ ? inner_->stats().recompute_count : 0);
  s.restarts = inner_builds_ > 0 ? inner_builds_ - 1 : 0;
  s.touched_nnz_total =
      estimate_touched_ + retired_touched_ + (inner_ ? inner_->stats().touched_nnz_total : 0);
  s.zero_mode = !inner_;
  return s;
}

std::string EigenTracker::snapshot_json() const {
  const EigenTrackerStats s = stats();
  nlohmann::json j;
  j["t"] = s.t;
  j["epoch"] = s.epoch;
  j["nu"] = s.nu;
  j["lambda"] = query().lambda;
  j["eps"] = eps_;
  j["eps_inner"] = eps_inner_;
  j["recompute_count"] = s.recompute_count;
  j["restarts"] = s.restarts;
  j["touched_nnz_total"] = s.touched_nnz_total;
  j["zero_mode"] = s.zero_mode;
  return j.dump();
}

}  // namespace dynev
