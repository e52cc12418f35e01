#include <benchmark/benchmark.h>

#include "dynev/dynamic_operator.hpp"
#include "dynev/eigen_tracker.hpp"
#include "dynev/power_method.hpp"
#include "dynev/spectral_oracle.hpp"
#include "dynev/stream_gen.hpp"

using namespace dynev;

namespace {

GeneratedStream drain(Index n, std::size_t T) {
  return generate({StreamMode::kCholeskyDrain, n, T, 0.05, 1, 0.1, 0});
}

void BM_Matvec(benchmark::State& st) {
  const auto n = static_cast<Index>(st.range(0));
  auto s = drain(n, static_cast<std::size_t>(n));
  DynamicOperator op(s.a0);
  for (const auto& v : s.updates) op.push_update(v);
  Rng rng(1);
  DenseVector x = gaussian_vector(n, rng), y;
  for (auto _ : st) {
    op.apply(x, y, nullptr);
    benchmark::DoNotOptimize(y.data());
  }
  st.counters["nnz"] = static_cast<double>(s.a0.nnz() + op.log_nnz());
}
BENCHMARK(BM_Matvec)->Arg(100)->Arg(400)->Arg(1600);

void BM_QuadFormIncrement(benchmark::State& st) {
  const auto n = static_cast<Index>(st.range(0));
  Rng rng(2);
  DenseVector w = gaussian_vector(n, rng);
  auto s = drain(n, 1);
  const SparseVector& v = s.updates.front();
  double q = 1.0;
  for (auto _ : st) {
    q = quad_form_increment(q, v, w, 1.0);
    benchmark::DoNotOptimize(q);
  }
}
BENCHMARK(BM_QuadFormIncrement)->Arg(100)->Arg(1000);

void BM_PowerMethod(benchmark::State& st) {
  const auto n = static_cast<Index>(st.range(0));
  const auto kernel = static_cast<PowerKernel>(st.range(1));
  auto s = drain(n, 0);
  DynamicOperator op(s.a0, 1.0 / exact_lambda_max(s.a0.to_dense()));
  std::uint64_t seed = 0;
  for (auto _ : st) benchmark::DoNotOptimize(power_method(0.05, op, seed++, kernel));
  st.SetLabel(to_string(kernel));
}
BENCHMARK(BM_PowerMethod)
    ->Args({50, static_cast<int>(PowerKernel::kMatvec)})
    ->Args({50, static_cast<int>(PowerKernel::kSquaring)})
    ->Args({100, static_cast<int>(PowerKernel::kSquaring)})
    ->Unit(benchmark::kMillisecond);

void BM_TrackerRun(benchmark::State& st) {
  const auto n = static_cast<Index>(st.range(0));
  auto s = drain(n, static_cast<std::size_t>(3 * n));
  for (auto _ : st) {
    EigenTracker t(0.1, s.a0, 3, {PowerKernel::kAuto, 1e-12});
    for (const auto& v : s.updates) t.update(v);
    benchmark::DoNotOptimize(t.query().lambda);
  }
  st.counters["updates"] = static_cast<double>(s.updates.size());
}
BENCHMARK(BM_TrackerRun)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Jacobi(benchmark::State& st) {
  const auto n = static_cast<Index>(st.range(0));
  DenseMatrix g = DenseMatrix::Random(n, n);
  const DenseMatrix m = g + g.transpose();
  for (auto _ : st) benchmark::DoNotOptimize(exact_spectrum(m, {512, false, 100}).eigenvalues.data());
}
BENCHMARK(BM_Jacobi)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
