#pragma once

#include <vector>

#include "dynev/dynamic_operator.hpp"
#include "dynev/stream_gen.hpp"

namespace dynev::testing {

inline DenseMatrix dense_of(const DynamicOperator& op) { return op.to_dense(); }

// Random sparse vector with k nonzeros.
inline SparseVector random_sparse(Index n, std::size_t k, Rng& rng, double scale = 1.0) {
  std::vector<std::pair<Index, double>> e;
  std::uniform_int_distribution<Index> pick(0, n - 1);
  std::normal_distribution<double> nd;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  while (e.size() < std::min<std::size_t>(k, static_cast<std::size_t>(n))) {
    const Index i = pick(rng);
    if (used[static_cast<std::size_t>(i)]) continue;
    used[static_cast<std::size_t>(i)] = true;
    e.emplace_back(i, scale * nd(rng));
  }
  return SparseVector::from_pairs(n, std::move(e));
}

inline std::vector<double> linear_spectrum(Index n, double top, double bottom) {
  std::vector<double> d(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i)
    d[static_cast<std::size_t>(i)] = n == 1 ? top : top - (top - bottom) * double(i) / double(n - 1);
  return d;
}

inline SparseSymMatrix planted(const std::vector<double>& d, Rng& rng) {
  const auto n = static_cast<Index>(d.size());
  return SparseSymMatrix::from_dense(planted_matrix(d, random_orthogonal(n, rng)));
}

}  // namespace dynev::testing
