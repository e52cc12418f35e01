#include "dynev/stream_gen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "dynev/error.hpp"
#include "dynev/power_method.hpp"

namespace dynev {

const char* to_string(StreamMode m) {
  switch (m) {
    case StreamMode::kCholeskyDrain: return "cholesky-drain";
    case StreamMode::kScaledDrain: return "scaled-drain";
    case StreamMode::kEigDrain: return "eig-drain";
    case StreamMode::kAdversarialSlow: return "adversarial-slow";
  }
  return "?";
}

StreamMode parse_stream_mode(const std::string& s) {
  if (s == "cholesky-drain") return StreamMode::kCholeskyDrain;
  if (s == "scaled-drain") return StreamMode::kScaledDrain;
  if (s == "eig-drain") return StreamMode::kEigDrain;
  if (s == "adversarial-slow") return StreamMode::kAdversarialSlow;
  throw std::invalid_argument("unknown stream mode '" + s +
                              "' (cholesky-drain|scaled-drain|eig-drain|adversarial-slow)");
}

namespace {

void check_spec(const StreamSpec& s) {
  if (s.n < 1) throw std::invalid_argument("stream spec: n must be positive");
  if (!(s.density > 0.0 && s.density <= 1.0)) throw std::invalid_argument("stream spec: density must lie in (0,1]");
}

std::vector<SparseVector> random_columns(const StreamSpec& s, std::size_t m, Rng& rng) {
  const auto k = static_cast<std::size_t>(
      std::max<double>(1.0, std::round(s.density * static_cast<double>(s.n))));
  std::normal_distribution<double> nd;
  std::vector<Index> pool(static_cast<std::size_t>(s.n));
  std::iota(pool.begin(), pool.end(), Index{0});
  std::vector<SparseVector> cols;
  cols.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    // partial Fisher-Yates for k distinct rows
    for (std::size_t a = 0; a < k; ++a) {
      std::uniform_int_distribution<std::size_t> pick(a, pool.size() - 1);
      std::swap(pool[a], pool[pick(rng)]);
    }
    std::vector<std::pair<Index, double>> e;
    for (std::size_t a = 0; a < k; ++a) {
      double v = nd(rng);
      if (v == 0.0) v = 1.0;
      e.emplace_back(pool[a], v);
    }
    cols.push_back(SparseVector::from_pairs(s.n, std::move(e)));
  }
  return cols;
}

GeneratedStream factor_drain(const StreamSpec& s, bool scaled) {
  check_spec(s);
  const std::size_t m = s.columns ? s.columns : std::max<std::size_t>(s.T, static_cast<std::size_t>(s.n));
  if (s.T > m) throw std::invalid_argument("stream spec: T exceeds the number of factor columns");
  Rng rng(s.seed);
  auto cols = random_columns(s, m, rng);

  GeneratedStream raw = drain_factor(cols, {}, {});
  const double f = raw.a0.frobenius_norm();
  const double c = 1.0 / std::sqrt(f);
  for (auto& x : cols) x = x.scaled(c);

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(s.T);
  std::vector<double> alphas(s.T, 1.0);
  if (scaled) {
    std::uniform_real_distribution<double> u(0.5, 1.0);
    for (double& a : alphas) a = u(rng);
  }
  return drain_factor(cols, order, alphas);
}

GeneratedStream planted_drain(const StreamSpec& s, const std::vector<double>& spectrum,
                              const std::vector<double>& fractions_by_hit, std::size_t max_hits,
                              Rng& rng) {
  const Index n = s.n;
  const DenseMatrix q = random_orthogonal(n, rng);
  GeneratedStream g;
  g.a0 = SparseSymMatrix::from_dense(planted_matrix(spectrum, q));

  std::vector<double> rem = spectrum;
  std::vector<std::size_t> hits(rem.size(), 0);
  for (std::size_t t = 0; t < s.T; ++t) {
    std::size_t top = rem.size();
    for (std::size_t j = 0; j < rem.size(); ++j)
      if (rem[j] > 0.0 && hits[j] < max_hits && (top == rem.size() || rem[j] > rem[top])) top = j;
    if (top == rem.size()) {
      g.updates.emplace_back(n);  // nothing left to remove
      continue;
    }
    const double f = fractions_by_hit.empty() ? 1.0 / static_cast<double>(max_hits - hits[top])
                                              : fractions_by_hit.front();
    const double removed = f >= 1.0 ? rem[top] : f * rem[top];
    rem[top] = f >= 1.0 ? 0.0 : rem[top] - removed;
    ++hits[top];
    g.updates.push_back(SparseVector::from_dense(std::sqrt(removed) * q.col(static_cast<Index>(top))));
  }
  return g;
}

}  // namespace

GeneratedStream drain_factor(const std::vector<SparseVector>& columns,
                             const std::vector<std::size_t>& order, const std::vector<double>& alphas) {
  if (columns.empty()) throw std::invalid_argument("drain_factor: no columns");
  if (order.size() != alphas.size()) throw std::invalid_argument("drain_factor: order/alpha length mismatch");
  const Index n = columns.front().dim();
  std::map<std::pair<Index, Index>, double> acc;
  for (const auto& x : columns) {
    if (x.dim() != n) throw DimensionError("drain_factor: column dimension mismatch");
    auto ix = x.indices();
    auto vx = x.values();
    for (std::size_t a = 0; a < ix.size(); ++a)
      for (std::size_t b = 0; b <= a; ++b) acc[{ix[a], ix[b]}] += vx[a] * vx[b];
  }
  std::vector<SparseSymMatrix::Triplet> lower;
  lower.reserve(acc.size());
  for (const auto& [rc, v] : acc) lower.push_back({rc.first, rc.second, v});
  GeneratedStream g;
  g.a0 = SparseSymMatrix::from_triangle(n, std::move(lower));
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] >= columns.size()) throw std::out_of_range("drain_factor: column index");
    if (!(alphas[i] > 0.0 && alphas[i] <= 1.0)) throw std::invalid_argument("drain_factor: alpha must lie in (0,1]");
    g.updates.push_back(alphas[i] == 1.0 ? columns[order[i]] : columns[order[i]].scaled(alphas[i]));
  }
  return g;
}

GeneratedStream gen_cholesky_drain(const StreamSpec& spec) { return factor_drain(spec, false); }

GeneratedStream gen_scaled_drain(const StreamSpec& spec) { return factor_drain(spec, true); }

GeneratedStream gen_eig_drain(const StreamSpec& spec) {
  check_spec(spec);
  if (spec.n > kSquaringMaxDim) throw std::invalid_argument("eig-drain: n exceeds the oracle cap");
  Rng rng(spec.seed);
  std::vector<double> spectrum(static_cast<std::size_t>(spec.n));
  for (Index i = 0; i < spec.n; ++i)
    spectrum[static_cast<std::size_t>(i)] =
        spec.n == 1 ? 1.0 : 1.0 - 0.9 * static_cast<double>(i) / static_cast<double>(spec.n - 1);
  const std::size_t h =
      std::max<std::size_t>(1, (spec.T + static_cast<std::size_t>(spec.n) - 1) / static_cast<std::size_t>(spec.n));
  return planted_drain(spec, spectrum, {}, h, rng);
}

GeneratedStream gen_adversarial_slow(const StreamSpec& spec) {
  check_spec(spec);
  if (spec.n > kSquaringMaxDim) throw std::invalid_argument("adversarial-slow: n exceeds the oracle cap");
  if (!(spec.eps_target > 0.0 && spec.eps_target < 1.0))
    throw std::invalid_argument("adversarial-slow: eps_target must lie in (0,1)");
  Rng rng(spec.seed);
  std::vector<double> spectrum(static_cast<std::size_t>(spec.n));
  for (Index i = 0; i < spec.n; ++i)
    spectrum[static_cast<std::size_t>(i)] =
        1.0 - spec.eps_target * static_cast<double>(i) / static_cast<double>(spec.n);
  const double f = spec.eps_target / (2.0 * log2n(spec.n));
  return planted_drain(spec, spectrum, {f}, spec.T + 1, rng);
}

GeneratedStream generate(const StreamSpec& spec) {
  switch (spec.mode) {
    case StreamMode::kCholeskyDrain: return gen_cholesky_drain(spec);
    case StreamMode::kScaledDrain: return gen_scaled_drain(spec);
    case StreamMode::kEigDrain: return gen_eig_drain(spec);
    case StreamMode::kAdversarialSlow: return gen_adversarial_slow(spec);
  }
  throw std::invalid_argument("generate: unknown mode");
}

DenseMatrix random_orthogonal(Index n, Rng& rng) {
  DenseMatrix g(n, n);
  std::normal_distribution<double> nd;
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) g(i, j) = nd(rng);
  Eigen::HouseholderQR<DenseMatrix> qr(g);
  DenseMatrix q = qr.householderQ() * DenseMatrix::Identity(n, n);
  const DenseMatrix& r = qr.matrixQR();
  for (Index j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

DenseMatrix planted_matrix(const std::vector<double>& eigenvalues, const DenseMatrix& q) {
  const auto n = static_cast<Index>(eigenvalues.size());
  if (q.rows() != n || q.cols() != n) throw DimensionError("planted_matrix: dimension mismatch");
  DenseVector d = Eigen::Map<const DenseVector>(eigenvalues.data(), n);
  DenseMatrix a = q * d.asDiagonal() * q.transpose();
  return 0.5 * (a + a.transpose());
}

}  // namespace dynev
