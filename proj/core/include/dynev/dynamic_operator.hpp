#pragma once

#include <memory>
#include <optional>

#include "dynev/sparse.hpp"

namespace dynev {

/// scale * (A_0 - sum_i v_i v_i^T), kept implicit. The update log is
/// append-only; read operations may run concurrently, push_update may not.
class DynamicOperator final : public SymmetricOperator {
 public:
  explicit DynamicOperator(SparseSymMatrix base, double scale = 1.0);
  explicit DynamicOperator(std::shared_ptr<const SparseSymMatrix> base, double scale = 1.0);

  Index dim() const override { return base_->n(); }
  const SparseSymMatrix& base() const noexcept { return *base_; }
  std::shared_ptr<const SparseSymMatrix> shared_base() const noexcept { return base_; }

  std::size_t update_count() const noexcept { return ptr_.size() - 1; }
  SparseVector update(std::size_t i) const;
  std::size_t log_nnz() const noexcept { return idx_.size(); }

  double scale() const noexcept { return scale_; }
  void set_scale(double s);

  void push_update(const SparseVector& v);

  // Throws NumericalError if the result is not finite.
  void apply(const DenseVector& x, DenseVector& y, WorkMeter* meter) const override;
  DenseVector matvec(const DenseVector& x, WorkMeter* meter = nullptr) const;
  double quad_form(const DenseVector& w, WorkMeter* meter) const override;
  double quad_form(const DenseVector& w) const { return quad_form(w, nullptr); }

  /// scale * A_t densely. Served from the dense cache when enabled.
  DenseMatrix to_dense() const override;
  /// Unscaled A_t as sparse; never called internally.
  SparseSymMatrix compact() const;

  /// Maintain an unscaled dense copy of A_t alongside the log, so that dense
  /// kernels avoid replaying the whole log. Costs nnz(v)^2 per push.
  void enable_dense_cache();
  bool has_dense_cache() const noexcept { return dense_.has_value(); }

 private:
  void check_dim(Index d) const;

  std::shared_ptr<const SparseSymMatrix> base_;
  double scale_;
  std::vector<std::size_t> ptr_{0};
  std::vector<Index> idx_;
  std::vector<double> val_;
  std::optional<DenseMatrix> dense_;
};

}  // namespace dynev
