#include "dynev/dynamic_operator.hpp"

#include <cmath>
#include <map>
#include <string>

#include "dynev/error.hpp"

namespace dynev {

DynamicOperator::DynamicOperator(SparseSymMatrix base, double scale)
    : DynamicOperator(std::make_shared<const SparseSymMatrix>(std::move(base)), scale) {}

DynamicOperator::DynamicOperator(std::shared_ptr<const SparseSymMatrix> base, double scale)
    : base_(std::move(base)), scale_(scale) {
  if (!base_ || base_->n() < 1) throw DimensionError("DynamicOperator: empty base matrix");
  set_scale(scale);
}

void DynamicOperator::set_scale(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("DynamicOperator: scale must be positive");
  scale_ = s;
}

void DynamicOperator::check_dim(Index d) const {
  if (d != base_->n())
    throw DimensionError("DynamicOperator: dimension " + std::to_string(d) + " != " +
                         std::to_string(base_->n()));
}

SparseVector DynamicOperator::update(std::size_t i) const {
  if (i >= update_count()) throw std::out_of_range("DynamicOperator::update");
  return SparseVector(dim(), {idx_.begin() + ptr_[i], idx_.begin() + ptr_[i + 1]},
                      {val_.begin() + ptr_[i], val_.begin() + ptr_[i + 1]});
}

void DynamicOperator::push_update(const SparseVector& v) {
  check_dim(v.dim());
  idx_.insert(idx_.end(), v.indices().begin(), v.indices().end());
  val_.insert(val_.end(), v.values().begin(), v.values().end());
  ptr_.push_back(idx_.size());
  if (dense_) {
    auto ix = v.indices();
    auto vx = v.values();
    for (std::size_t a = 0; a < ix.size(); ++a)
      for (std::size_t b = 0; b < ix.size(); ++b) (*dense_)(ix[a], ix[b]) -= vx[a] * vx[b];
  }
}

void DynamicOperator::apply(const DenseVector& x, DenseVector& y, WorkMeter* meter) const {
  check_dim(x.size());
  base_->apply(x, y, meter);
  const std::size_t t = update_count();
  for (std::size_t u = 0; u < t; ++u) {
    double d = 0.0;
    for (std::size_t k = ptr_[u]; k < ptr_[u + 1]; ++k) d += val_[k] * x[idx_[k]];
    for (std::size_t k = ptr_[u]; k < ptr_[u + 1]; ++k) y[idx_[k]] -= d * val_[k];
  }
  charge(meter, idx_.size());
  if (scale_ != 1.0) y *= scale_;
  if (!y.allFinite()) throw NumericalError("DynamicOperator::apply: non-finite result");
}

DenseVector DynamicOperator::matvec(const DenseVector& x, WorkMeter* meter) const {
  DenseVector y;
  apply(x, y, meter);
  return y;
}

double DynamicOperator::quad_form(const DenseVector& w, WorkMeter* meter) const {
  check_dim(w.size());
  double q = base_->quad_form(w, meter);
  const std::size_t t = update_count();
  for (std::size_t u = 0; u < t; ++u) {
    double d = 0.0;
    for (std::size_t k = ptr_[u]; k < ptr_[u + 1]; ++k) d += val_[k] * w[idx_[k]];
    q -= d * d;
  }
  charge(meter, idx_.size());
  return scale_ * q;
}

DenseMatrix DynamicOperator::to_dense() const {
  if (dense_) return scale_ * *dense_;
  DenseMatrix a = base_->to_dense();
  const std::size_t t = update_count();
  for (std::size_t u = 0; u < t; ++u)
    for (std::size_t p = ptr_[u]; p < ptr_[u + 1]; ++p)
      for (std::size_t q = ptr_[u]; q < ptr_[u + 1]; ++q) a(idx_[p], idx_[q]) -= val_[p] * val_[q];
  if (scale_ != 1.0) a *= scale_;
  return a;
}

SparseSymMatrix DynamicOperator::compact() const {
  std::map<std::pair<Index, Index>, double> acc;
  for (const auto& e : base_->lower_triplets()) acc[{e.row, e.col}] += e.value;
  const std::size_t t = update_count();
  for (std::size_t u = 0; u < t; ++u)
    for (std::size_t p = ptr_[u]; p < ptr_[u + 1]; ++p)
      for (std::size_t q = ptr_[u]; q <= p; ++q) acc[{idx_[p], idx_[q]}] -= val_[p] * val_[q];
  std::vector<SparseSymMatrix::Triplet> lower;
  lower.reserve(acc.size());
  for (const auto& [rc, v] : acc) lower.push_back({rc.first, rc.second, v});
  return SparseSymMatrix::from_triangle(dim(), std::move(lower));
}

void DynamicOperator::enable_dense_cache() {
  if (dense_) return;
  const double s = scale_;
  scale_ = 1.0;
  dense_ = to_dense();
  scale_ = s;
}

}  // namespace dynev
