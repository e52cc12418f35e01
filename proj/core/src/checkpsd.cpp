#include "dynev/checkpsd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dynev/decremental_tracker.hpp"
#include "dynev/error.hpp"
#include "dynev/spectral_oracle.hpp"

namespace dynev {

DenseVector deflated_matvec(const SparseSymMatrix& a, const std::vector<Deflation>& deflations,
                            const DenseVector& x) {
  if (x.size() != a.n()) throw DimensionError("deflated_matvec: dimension mismatch");
  DenseVector y;
  a.apply(x, y);
  for (const auto& d : deflations) {
    if (d.w.size() != a.n()) throw DimensionError("deflated_matvec: deflation dimension mismatch");
    y -= (d.mu / 10.0) * d.w.dot(x) * d.w;
  }
  return y;
}

DeflatedOperator::DeflatedOperator(const SparseSymMatrix& a) : a_(&a) {}

void DeflatedOperator::deflate(double mu, const DenseVector& w) {
  if (w.size() != dim()) throw DimensionError("DeflatedOperator: dimension mismatch");
  ++total_;
  if (mu == 0.0) return;
  pending_.push_back({mu, w});
  if (pending_.size() > static_cast<std::size_t>(dim() / 2)) fold();
}

void DeflatedOperator::fold() {
  if (!dense_) dense_ = a_->to_dense();
  for (const auto& d : pending_) dense_->noalias() -= (d.mu / 10.0) * d.w * d.w.transpose();
  pending_.clear();
}

void DeflatedOperator::apply(const DenseVector& x, DenseVector& y, WorkMeter* meter) const {
  if (x.size() != dim()) throw DimensionError("DeflatedOperator::apply: dimension mismatch");
  if (dense_) {
    y.noalias() = *dense_ * x;
    charge(meter, static_cast<std::uint64_t>(dense_->size()));
  } else {
    a_->apply(x, y, meter);
  }
  for (const auto& d : pending_) y -= (d.mu / 10.0) * d.w.dot(x) * d.w;
  charge(meter, 2 * pending_.size() * static_cast<std::uint64_t>(dim()));
  if (!y.allFinite()) throw NumericalError("DeflatedOperator::apply: non-finite result");
}

double DeflatedOperator::quad_form(const DenseVector& w, WorkMeter* meter) const {
  DenseVector y;
  apply(w, y, meter);
  return w.dot(y);
}

DenseMatrix DeflatedOperator::to_dense() const {
  DenseMatrix m = dense_ ? *dense_ : a_->to_dense();
  for (const auto& d : pending_) m.noalias() -= (d.mu / 10.0) * d.w * d.w.transpose();
  return m;
}

CheckConfig CheckConfig::make(double delta, double kappa, Index n) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("checkpsd: delta must lie in (0,1)");
  if (!(kappa >= 1.0) || !std::isfinite(kappa)) throw std::invalid_argument("checkpsd: kappa must be >= 1");
  if (n < 1) throw DimensionError("checkpsd: empty matrix");
  CheckConfig c;
  c.delta = delta;
  c.kappa = kappa;
  c.eps_run = std::min(0.75, (1.0 - delta) / (1.0 + delta));
  c.eps_num = std::min(c.eps_run, 0.05);
  const double e = c.eps_run;
  const double t = std::ceil(2.0 * static_cast<double>(n) / (e * (1.0 - e) * (1.0 - e)) *
                             std::log2(kappa / delta));
  c.steps = t < 1.0 ? 1 : static_cast<std::size_t>(t);
  c.copies = copies_for(n);
  c.iterations = iterations_for(c.eps_num, n);
  return c;
}

namespace {

void property1_check(const DeflatedOperator& op, const DenseVector& w, Property1Stats& st) {
  const ExactSpectrum s = exact_spectrum(op.to_dense());
  const double l1 = s.eigenvalues.front();
  ++st.steps_checked;
  if (!(l1 > 0.0)) return;
  const double n2 = static_cast<double>(op.dim()) * static_cast<double>(op.dim());
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    const double li = s.eigenvalues[i];
    if (li > l1 / 2.0) continue;
    const double proj = std::pow(s.eigenvectors.col(static_cast<Index>(i)).dot(w), 2);
    const double excess = proj - std::max(li, 0.0) / (l1 * n2);
    if (excess > 0.0) {
      ++st.violations;
      st.worst_excess = std::max(st.worst_excess, excess);
    }
  }
}

}  // namespace

PsdVerdict check_psd(double delta, double kappa, const SparseSymMatrix& a, std::uint64_t seed) {
  return check_psd(a, seed, CheckConfig::make(delta, kappa, a.n()));
}

PsdVerdict check_psd(const SparseSymMatrix& a, std::uint64_t seed, const CheckConfig& cfg) {
  if (cfg.steps > cfg.max_steps)
    throw std::invalid_argument("checkpsd: T = " + std::to_string(cfg.steps) + " exceeds the cap of " +
                                std::to_string(cfg.max_steps) +
                                " steps; use a smaller n, kappa or a larger delta");
  const Index n = a.n();
  PsdVerdict v;
  WorkMeter meter;
  DeflatedOperator op(a);
  DenseMatrix cols(n, static_cast<Index>(cfg.steps));

  for (std::size_t t = 1; t <= cfg.steps; ++t) {
    CandidateSet c = power_copies(op, cfg.copies, cfg.iterations, derive_seed(seed, t), cfg.kernel, &meter);
    const std::size_t b = c.best();
    const double mu = c.quad_forms[b];
    if (t == 1) {
      v.mu1 = mu;
      v.min_mu = mu;
    }
    v.min_mu = std::min(v.min_mu, mu);
    v.steps = t;
    if (mu < -cfg.negativity_tol * std::max(v.mu1, 0.0) || (t == 1 && mu < 0.0)) {
      v.kind = PsdVerdict::Kind::kNotPsd;
      v.failed_step = t;
      v.touched = meter.touched;
      return v;
    }
    if (cfg.property1) property1_check(op, c.witnesses[b], v.property1);
    const double m = std::max(mu, 0.0);
    cols.col(static_cast<Index>(t - 1)) = std::sqrt(m / 10.0) * c.witnesses[b];
    op.deflate(m, c.witnesses[b]);
  }

  // Residual A - X X^T is the fully deflated operator.
  DenseMatrix r = op.to_dense();
  DenseOperator sq(r * r);
  CandidateSet c = power_copies(sq, cfg.copies, cfg.iterations, derive_seed(seed, cfg.steps + 1),
                                cfg.kernel, &meter);
  v.sigma = std::sqrt(std::max(c.quad_forms[c.best()], 0.0));
  v.threshold = (1.0 + cfg.eps_run) * v.mu1 * cfg.delta / cfg.kappa;
  v.touched = meter.touched;
  if (v.sigma <= v.threshold) {
    v.kind = PsdVerdict::Kind::kCertificate;
    v.X = std::move(cols);
  } else {
    v.kind = PsdVerdict::Kind::kNotPsd;
    v.final_check_failed = true;
  }
  return v;
}

}  // namespace dynev
