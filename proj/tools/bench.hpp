#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dynev/eigen_tracker.hpp"
#include "dynev/spectral_oracle.hpp"
#include "dynev/stream_gen.hpp"

namespace dynev::bench {

/// DYNEV_SEED if set and numeric, else `fallback`.
std::uint64_t default_seed(std::uint64_t fallback = 0);

struct RunOptions {
  double eps = 0.1;
  std::uint64_t seed = 0;
  PowerKernel kernel = PowerKernel::kAuto;
  bool verify = false;
  bool profile = false;  // spectrum profile at t = 0 and at every recompute step
};

struct RunRow {
  std::size_t t = 0;
  double lambda = 0.0;
  double oracle_lambda_max = 0.0;  // NaN without verify
  double witness_quality = 0.0;    // w_t^T A_t w_t from the dense A_t; NaN without verify
  std::size_t recomputes = 0;      // power-method runs during this step
  std::size_t epoch = 0;
  std::uint64_t touched = 0;
};

struct Violation {
  std::size_t t;
  std::string what;
};

struct RunSummary {
  std::size_t T = 0;
  std::size_t recompute_count = 0;
  std::size_t epochs = 0;
  std::size_t restarts = 0;
  std::uint64_t total_touched_nnz = 0;
  double wall_time = 0.0;
  bool zero_mode = false;
};

struct RunReport {
  std::vector<RunRow> rows;
  RunSummary summary;
  std::optional<Violation> first_violation;
  std::size_t violations = 0;
  std::vector<SpectrumProfile> profiles;
  std::vector<std::size_t> profile_steps;
};

RunReport run_tracker(const GeneratedStream& stream, const RunOptions& opts);

/// Per-step CSV, columns t,lambda_t,oracle_lambda_max,witness_quality,recompute_flag,epoch,touched_nnz.
/// recompute_flag counts power-method runs in the step, so its column sum is
/// the summary recompute_count.
void write_run_csv(std::ostream& out, const RunReport& r);
void write_run_json(std::ostream& out, const RunReport& r);

/// Sandwich and witness-quality checks of one step against the oracle value.
std::optional<std::string> check_step(double eps, double lambda, double witness_rq, double lambda_max);

/// log2 n * log2^5(n/eps) / eps^2
double recompute_bound(Index n, double eps);

struct SweepOptions {
  std::vector<Index> ns;
  std::vector<double> epss;
  std::size_t trials = 3;
  StreamMode mode = StreamMode::kEigDrain;
  double t_factor = 4.0;            // T = t_factor * n unless fixed_T is set
  std::optional<std::size_t> fixed_T;
  double density = 0.1;
  std::uint64_t seed = 0;
  PowerKernel kernel = PowerKernel::kAuto;
};

struct SweepRow {
  Index n = 0;
  double eps = 0.0;
  std::size_t T = 0;
  std::size_t trials = 0;
  double mean_recompute = 0.0;
  std::size_t max_recompute = 0;
  double mean_epochs = 0.0;
  double bound = 0.0;
  double ratio = 0.0;  // mean_recompute / bound
};

StreamSpec sweep_stream_spec(const SweepOptions& o, Index n, double eps, std::size_t trial);
std::uint64_t sweep_tracker_seed(const SweepOptions& o, std::size_t trial);
std::vector<SweepRow> run_sweep(const SweepOptions& opts);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace dynev::bench
