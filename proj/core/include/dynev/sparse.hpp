#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace dynev {

using Index = Eigen::Index;
using DenseVector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using Rng = std::mt19937_64;

/// Counts touched stored entries. This is the platform-independent cost
/// measure every kernel reports into.
struct WorkMeter {
  std::uint64_t touched = 0;
  void add(std::uint64_t k) noexcept { touched += k; }
};

inline void charge(WorkMeter* m, std::uint64_t k) noexcept {
  if (m) m->add(k);
}

class SparseVector {
 public:
  SparseVector() = default;
  explicit SparseVector(Index dim);
  // indices must be strictly increasing and < dim; zero values are dropped.
  SparseVector(Index dim, std::vector<Index> indices, std::vector<double> values);

  static SparseVector from_pairs(Index dim, std::vector<std::pair<Index, double>> entries);
  static SparseVector from_dense(const DenseVector& x, double drop_tol = 0.0);
  static SparseVector unit(Index dim, Index i, double value = 1.0);

  Index dim() const noexcept { return dim_; }
  std::size_t nnz() const noexcept { return idx_.size(); }
  std::span<const Index> indices() const noexcept { return idx_; }
  std::span<const double> values() const noexcept { return val_; }

  double dot(const DenseVector& x) const;
  // y += a * v
  void axpy(double a, DenseVector& y) const;
  SparseVector scaled(double c) const;
  DenseVector to_dense() const;
  double squared_norm() const noexcept;

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  Index dim_ = 0;
  std::vector<Index> idx_;
  std::vector<double> val_;
};

/// Symmetric matrix in CSR with the full pattern stored (both triangles).
class SparseSymMatrix {
 public:
  struct Triplet {
    Index row;
    Index col;
    double value;
  };

  SparseSymMatrix() = default;

  // Each off-diagonal triplet is mirrored; duplicates are summed. Pass one
  // triangle only.
  static SparseSymMatrix from_triangle(Index n, std::vector<Triplet> entries);
  static SparseSymMatrix from_dense(const DenseMatrix& a, double sym_tol = 1e-12);
  static SparseSymMatrix identity(Index n, double c = 1.0);
  static SparseSymMatrix diagonal(const std::vector<double>& d);

  Index n() const noexcept { return n_; }
  std::size_t nnz() const noexcept { return col_.size(); }
  std::span<const std::size_t> row_ptr() const noexcept { return ptr_; }
  std::span<const Index> col_idx() const noexcept { return col_; }
  std::span<const double> values() const noexcept { return val_; }

  double operator()(Index i, Index j) const;

  // y = A x; charges nnz.
  void apply(const DenseVector& x, DenseVector& y, WorkMeter* meter = nullptr) const;
  double quad_form(const DenseVector& x, WorkMeter* meter = nullptr) const;

  DenseMatrix to_dense() const;
  SparseSymMatrix scaled(double c) const;
  double frobenius_norm() const;
  // Lower triangle (row >= col) as triplets, row-major order.
  std::vector<Triplet> lower_triplets() const;

 private:
  Index n_ = 0;
  std::vector<std::size_t> ptr_{0};
  std::vector<Index> col_;
  std::vector<double> val_;
};

/// Read-only symmetric operator; the power method runs against this.
class SymmetricOperator {
 public:
  virtual ~SymmetricOperator() = default;
  virtual Index dim() const = 0;
  virtual void apply(const DenseVector& x, DenseVector& y, WorkMeter* meter) const = 0;
  virtual double quad_form(const DenseVector& w, WorkMeter* meter) const = 0;
  // Dense materialization, for the squaring kernel and the oracle.
  virtual DenseMatrix to_dense() const = 0;
};

/// Plain dense symmetric operator.
class DenseOperator final : public SymmetricOperator {
 public:
  explicit DenseOperator(DenseMatrix a);
  Index dim() const override { return a_.rows(); }
  void apply(const DenseVector& x, DenseVector& y, WorkMeter* meter) const override;
  double quad_form(const DenseVector& w, WorkMeter* meter) const override;
  DenseMatrix to_dense() const override { return a_; }
  const DenseMatrix& matrix() const noexcept { return a_; }

 private:
  DenseMatrix a_;
};

DenseVector gaussian_vector(Index n, Rng& rng);

// q_prev - scale * (v^T w)^2, touching only the nnz(v) coordinates of w.
double quad_form_increment(double q_prev, const SparseVector& v, const DenseVector& w,
                           double scale, WorkMeter* meter = nullptr);

}  // namespace dynev
