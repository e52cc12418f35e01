#include "dynev/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dynev/error.hpp"

namespace dynev {

namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw NumericalError(std::string(what) + ": non-finite value");
}

}  // namespace

SparseVector::SparseVector(Index dim) : dim_(dim) {
  if (dim < 1) throw DimensionError("SparseVector: dim must be positive");
}

SparseVector::SparseVector(Index dim, std::vector<Index> indices, std::vector<double> values)
    : dim_(dim) {
  if (dim < 1) throw DimensionError("SparseVector: dim must be positive");
  if (indices.size() != values.size())
    throw DimensionError("SparseVector: index/value length mismatch");
  idx_.reserve(indices.size());
  val_.reserve(values.size());
  Index prev = -1;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const Index i = indices[k];
    if (i < 0 || i >= dim)
      throw DimensionError("SparseVector: index " + std::to_string(i) + " out of range for dim " +
                           std::to_string(dim));
    if (i <= prev) throw DimensionError("SparseVector: indices must be strictly increasing");
    prev = i;
    require_finite(values[k], "SparseVector");
    if (values[k] == 0.0) continue;
    idx_.push_back(i);
    val_.push_back(values[k]);
  }
}

SparseVector SparseVector::from_pairs(Index dim, std::vector<std::pair<Index, double>> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Index> idx;
  std::vector<double> val;
  idx.reserve(entries.size());
  val.reserve(entries.size());
  for (auto& [i, v] : entries) {
    idx.push_back(i);
    val.push_back(v);
  }
  return SparseVector(dim, std::move(idx), std::move(val));
}

SparseVector SparseVector::from_dense(const DenseVector& x, double drop_tol) {
  std::vector<Index> idx;
  std::vector<double> val;
  for (Index i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > drop_tol) {
      idx.push_back(i);
      val.push_back(x[i]);
    }
  }
  return SparseVector(x.size(), std::move(idx), std::move(val));
}

SparseVector SparseVector::unit(Index dim, Index i, double value) {
  return SparseVector(dim, {i}, {value});
}

double SparseVector::dot(const DenseVector& x) const {
  if (x.size() != dim_) throw DimensionError("SparseVector::dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < idx_.size(); ++k) s += val_[k] * x[idx_[k]];
  return s;
}

void SparseVector::axpy(double a, DenseVector& y) const {
  if (y.size() != dim_) throw DimensionError("SparseVector::axpy: dimension mismatch");
  for (std::size_t k = 0; k < idx_.size(); ++k) y[idx_[k]] += a * val_[k];
}

SparseVector SparseVector::scaled(double c) const {
  std::vector<double> v(val_);
  for (double& x : v) x *= c;
  return SparseVector(dim_, idx_, std::move(v));
}

DenseVector SparseVector::to_dense() const {
  DenseVector x = DenseVector::Zero(dim_);
  for (std::size_t k = 0; k < idx_.size(); ++k) x[idx_[k]] = val_[k];
  return x;
}

double SparseVector::squared_norm() const noexcept {
  double s = 0.0;
  for (double v : val_) s += v * v;
  return s;
}

SparseSymMatrix SparseSymMatrix::from_triangle(Index n, std::vector<Triplet> entries) {
  if (n < 1) throw DimensionError("SparseSymMatrix: n must be positive");
  std::vector<Triplet> full;
  full.reserve(2 * entries.size());
  for (const auto& e : entries) {
    if (e.row < 0 || e.row >= n || e.col < 0 || e.col >= n)
      throw DimensionError("SparseSymMatrix: entry (" + std::to_string(e.row) + "," +
                           std::to_string(e.col) + ") out of range");
    require_finite(e.value, "SparseSymMatrix");
    full.push_back(e);
    if (e.row != e.col) full.push_back({e.col, e.row, e.value});
  }
  std::sort(full.begin(), full.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseSymMatrix m;
  m.n_ = n;
  m.ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t k = 0; k < full.size();) {
    const Index r = full[k].row, c = full[k].col;
    double s = 0.0;
    for (; k < full.size() && full[k].row == r && full[k].col == c; ++k) s += full[k].value;
    if (s == 0.0) continue;
    m.col_.push_back(c);
    m.val_.push_back(s);
    ++m.ptr_[static_cast<std::size_t>(r) + 1];
  }
  for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) m.ptr_[i + 1] += m.ptr_[i];
  return m;
}

SparseSymMatrix SparseSymMatrix::from_dense(const DenseMatrix& a, double sym_tol) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw DimensionError("SparseSymMatrix::from_dense: matrix must be square and non-empty");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  std::vector<Triplet> lower;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = j; i < a.rows(); ++i) {
      if (std::abs(a(i, j) - a(j, i)) > sym_tol * scale)
        throw DimensionError("SparseSymMatrix::from_dense: matrix is not symmetric");
      if (a(i, j) != 0.0) lower.push_back({i, j, a(i, j)});
    }
  }
  return from_triangle(a.rows(), std::move(lower));
}

SparseSymMatrix SparseSymMatrix::identity(Index n, double c) {
  std::vector<Triplet> t;
  for (Index i = 0; i < n; ++i) t.push_back({i, i, c});
  return from_triangle(n, std::move(t));
}

SparseSymMatrix SparseSymMatrix::diagonal(const std::vector<double>& d) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < d.size(); ++i)
    t.push_back({static_cast<Index>(i), static_cast<Index>(i), d[i]});
  return from_triangle(static_cast<Index>(d.size()), std::move(t));
}

double SparseSymMatrix::operator()(Index i, Index j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_) throw DimensionError("SparseSymMatrix: index out of range");
  auto first = col_.begin() + static_cast<std::ptrdiff_t>(ptr_[i]);
  auto last = col_.begin() + static_cast<std::ptrdiff_t>(ptr_[i + 1]);
  auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return val_[static_cast<std::size_t>(it - col_.begin())];
}

void SparseSymMatrix::apply(const DenseVector& x, DenseVector& y, WorkMeter* meter) const {
  if (x.size() != n_) throw DimensionError("SparseSymMatrix::apply: dimension mismatch");
  y.resize(n_);
  for (Index i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t k = ptr_[i]; k < ptr_[i + 1]; ++k) s += val_[k] * x[col_[k]];
    y[i] = s;
  }
  charge(meter, nnz());
}

double SparseSymMatrix::quad_form(const DenseVector& x, WorkMeter* meter) const {
  if (x.size() != n_) throw DimensionError("SparseSymMatrix::quad_form: dimension mismatch");
  double q = 0.0;
  for (Index i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t k = ptr_[i]; k < ptr_[i + 1]; ++k) s += val_[k] * x[col_[k]];
    q += x[i] * s;
  }
  charge(meter, nnz());
  return q;
}

DenseMatrix SparseSymMatrix::to_dense() const {
  DenseMatrix a = DenseMatrix::Zero(n_, n_);
  for (Index i = 0; i < n_; ++i)
    for (std::size_t k = ptr_[i]; k < ptr_[i + 1]; ++k) a(i, col_[k]) = val_[k];
  return a;
}

SparseSymMatrix SparseSymMatrix::scaled(double c) const {
  SparseSymMatrix m = *this;
  for (double& v : m.val_) v *= c;
  return m;
}

double SparseSymMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : val_) s += v * v;
  return std::sqrt(s);
}

std::vector<SparseSymMatrix::Triplet> SparseSymMatrix::lower_triplets() const {
  std::vector<Triplet> out;
  for (Index i = 0; i < n_; ++i)
    for (std::size_t k = ptr_[i]; k < ptr_[i + 1] && col_[k] <= i; ++k)
      out.push_back({i, col_[k], val_[k]});
  return out;
}

DenseOperator::DenseOperator(DenseMatrix a) : a_(std::move(a)) {
  if (a_.rows() != a_.cols()) throw DimensionError("DenseOperator: matrix must be square");
}

void DenseOperator::apply(const DenseVector& x, DenseVector& y, WorkMeter* meter) const {
  if (x.size() != a_.rows()) throw DimensionError("DenseOperator::apply: dimension mismatch");
  y.noalias() = a_ * x;
  charge(meter, static_cast<std::uint64_t>(a_.size()));
}

double DenseOperator::quad_form(const DenseVector& w, WorkMeter* meter) const {
  if (w.size() != a_.rows()) throw DimensionError("DenseOperator::quad_form: dimension mismatch");
  charge(meter, static_cast<std::uint64_t>(a_.size()));
  return w.dot(a_ * w);
}

DenseVector gaussian_vector(Index n, Rng& rng) {
  if (n < 1) throw DimensionError("gaussian_vector: n must be positive");
  std::normal_distribution<double> nd(0.0, 1.0);
  DenseVector x(n);
  for (Index i = 0; i < n; ++i) x[i] = nd(rng);
  return x;
}

double quad_form_increment(double q_prev, const SparseVector& v, const DenseVector& w,
                           double scale, WorkMeter* meter) {
  const double d = v.dot(w);
  charge(meter, v.nnz());
  return q_prev - scale * d * d;
}

}  // namespace dynev
