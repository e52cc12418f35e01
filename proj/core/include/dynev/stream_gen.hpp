#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dynev/sparse.hpp"

namespace dynev {

enum class StreamMode { kCholeskyDrain, kScaledDrain, kEigDrain, kAdversarialSlow };

const char* to_string(StreamMode m);
StreamMode parse_stream_mode(const std::string& s);

struct StreamSpec {
  StreamMode mode = StreamMode::kCholeskyDrain;
  Index n = 50;
  std::size_t T = 100;
  double density = 0.1;  // fraction of nonzeros per factor column
  std::uint64_t seed = 0;
  double eps_target = 0.1;
  std::size_t columns = 0;  // factor columns m for the drains; 0 means max(T, n)
};

struct GeneratedStream {
  SparseSymMatrix a0;
  std::vector<SparseVector> updates;
};

/// Every generator finishes before any solver sees the stream, so streams
/// never depend on solver output.
GeneratedStream generate(const StreamSpec& spec);

/// A_0 = X X^T from sparse columns scaled to ||A_0||_F = 1; removes T
/// columns in random order.
GeneratedStream gen_cholesky_drain(const StreamSpec& spec);
/// As cholesky-drain, but column i is removed as alpha_i x_i, alpha_i in [0.5, 1].
GeneratedStream gen_scaled_drain(const StreamSpec& spec);
/// Planted spectrum 1 - 0.9 i/(n-1) under a random rotation. Each update
/// removes part of the currently largest planted direction; with
/// h = ceil(T/n), the k-th hit on a direction removes 1/(h-k+1) of what is
/// left, so T = h n drains A to zero.
GeneratedStream gen_eig_drain(const StreamSpec& spec);
/// Planted cluster 1 - eps i/n; every update removes a fraction
/// eps/(2 log2 n) of the current top direction, so lambda_max creeps down.
GeneratedStream gen_adversarial_slow(const StreamSpec& spec);

/// A_0 = sum_j x_j x_j^T; update i is alphas[i] * columns[order[i]].
GeneratedStream drain_factor(const std::vector<SparseVector>& columns,
                             const std::vector<std::size_t>& order,
                             const std::vector<double>& alphas);

DenseMatrix random_orthogonal(Index n, Rng& rng);
/// Q diag(eigenvalues) Q^T, exactly symmetric.
DenseMatrix planted_matrix(const std::vector<double>& eigenvalues, const DenseMatrix& q);

}  // namespace dynev
