#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dynev/sparse.hpp"

namespace dynev {

/// How A^K x is evaluated. kMatvec performs K literal operator applications
/// per copy. kSquaring forms A^K by repeated squaring of the dense operator
/// (same direction, O(n^3 log K)). kAuto picks squaring when
/// n <= kSquaringMaxDim and matvec otherwise.
enum class PowerKernel { kMatvec, kSquaring, kAuto };

inline constexpr Index kSquaringMaxDim = 512;
inline constexpr double kMaxPowerEps = 0.24;
inline constexpr double kThresholdSlack = 1e-12;

const char* to_string(PowerKernel k);
PowerKernel parse_power_kernel(const std::string& s);

/// max(1, log2 n); the common log factor of every constant.
double log2n(Index n);
std::size_t copies_for(Index n);
std::size_t iterations_for(double eps, Index n);
// Clamps to (0, kMaxPowerEps]; throws for eps <= 0 or non-finite.
double clamp_power_eps(double eps);

struct PowerConfig {
  double eps = 0.1;
  Index n = 1;
  std::size_t copies = 1;      // R
  std::size_t iterations = 1;  // K
  std::uint64_t seed = 0;
  PowerKernel kernel = PowerKernel::kMatvec;

  static PowerConfig make(double eps, Index n, std::uint64_t seed,
                          PowerKernel kernel = PowerKernel::kMatvec);
  PowerKernel resolved_kernel() const;
};

struct CandidateSet {
  std::vector<DenseVector> witnesses;  // unit norm
  std::vector<double> quad_forms;      // witness^T A witness
  std::optional<std::size_t> r0;       // 0-based
  bool band_fallback = false;

  std::size_t size() const noexcept { return witnesses.size(); }
  // Index of the largest quad form (first on ties).
  std::size_t best() const;
};

struct PowerOutcome {
  CandidateSet candidates;
  bool witnessed() const noexcept { return candidates.r0.has_value(); }
};

/// Unnormalized Gaussian start of copy r: seeded with seed + r.
DenseVector power_start(Index n, std::uint64_t seed, std::size_t r);

/// K normalized applications starting from `start`; returns the unit iterate.
/// `zero_hit` is set if an iterate vanished (the last nonzero direction is
/// returned then).
DenseVector power_iterate(const SymmetricOperator& op, const DenseVector& start,
                          std::size_t iterations, WorkMeter* meter = nullptr,
                          bool* zero_hit = nullptr);

/// R copies of K iterations without the selection step.
CandidateSet power_copies(const SymmetricOperator& op, std::size_t copies, std::size_t iterations,
                          std::uint64_t seed, PowerKernel kernel, WorkMeter* meter = nullptr);

/// Selection rule of the static method on an evaluated set: r0 is the first
/// copy with q >= 1 - 5 eps, else the first with q >= 1 - eps (band
/// fallback), else absent.
void select_witness(CandidateSet& set, double eps);

PowerOutcome power_method(const SymmetricOperator& op, const PowerConfig& cfg,
                          WorkMeter* meter = nullptr);
PowerOutcome power_method(double eps, const SymmetricOperator& op, std::uint64_t seed,
                          PowerKernel kernel = PowerKernel::kMatvec, WorkMeter* meter = nullptr);

struct ProjectionDiagnostic {
  // projections[r][i] = (w_r^T u_i)^2
  std::vector<std::vector<double>> projections;
  // eigen-indices with lambda_i <= lambda_max / 2
  std::vector<std::size_t> checked;
  // bound for each index in `checked`; may underflow to 0, +inf when
  // 1 - 10 eps <= 0 (no decay estimate there)
  std::vector<double> bounds;
  // natural log of the same bounds (finite even when the bound underflows)
  std::vector<double> log_bounds;
};

/// Squared projections of every witness on the exact eigenvectors together
/// with the decay bound 2500 log2^2(n) (1 - 10 eps)^(2K-1) lambda_i/lambda_1.
/// eigenvalues are descending, eigenvectors column-aligned.
ProjectionDiagnostic projection_diagnostic(const CandidateSet& set,
                                           const std::vector<double>& eigenvalues,
                                           const DenseMatrix& eigenvectors, double eps,
                                           std::size_t iterations);

}  // namespace dynev
