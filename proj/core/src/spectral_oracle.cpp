#include "dynev/spectral_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "dynev/error.hpp"

namespace dynev {

namespace {

inline void rotate_pair(double* __restrict x, double* __restrict y, Index n, double c, double s) {
  for (Index k = 0; k < n; ++k) {
    const double a = x[k], b = y[k];
    x[k] = c * a - s * b;
    y[k] = s * a + c * b;
  }
}

double off_norm2(const DenseMatrix& a) {
  double s = 0.0;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (i != j) s += a(i, j) * a(i, j);
  return s;
}

}  // namespace

ExactSpectrum exact_spectrum(const DenseMatrix& input, const OracleOptions& opts) {
  const Index n = input.rows();
  if (n != input.cols()) throw DimensionError("exact_spectrum: matrix must be square");
  if (n > opts.max_dim)
    throw DimensionError("exact_spectrum: n = " + std::to_string(n) + " exceeds oracle cap " +
                         std::to_string(opts.max_dim));
  ExactSpectrum out;
  if (n == 0) return out;

  const double amax = std::max(1.0, input.cwiseAbs().maxCoeff());
  if ((input - input.transpose()).cwiseAbs().maxCoeff() > 1e-12 * amax)
    throw DimensionError("exact_spectrum: matrix is not symmetric");
  if (!input.allFinite()) throw NumericalError("exact_spectrum: non-finite entry");

  DenseMatrix a = 0.5 * (input + input.transpose());
  DenseMatrix v;
  if (opts.vectors) v = DenseMatrix::Identity(n, n);

  const double fro = a.norm();
  const double target = 1e-14 * fro;
  // rotations on entries this small cannot move the stopping quantity
  const double skip = 1e-18 * fro / static_cast<double>(n);

  // Round-robin ordering: each round applies m/2 disjoint rotations at once,
  // so the row half of the update runs column by column inside one column.
  const Index m = n + (n & 1);
  std::vector<Index> players(static_cast<std::size_t>(m));
  std::iota(players.begin(), players.end(), Index{0});
  struct Rot {
    Index p, q;
    double c, s, app, aqq;
  };
  std::vector<Rot> rots;
  rots.reserve(static_cast<std::size_t>(m / 2));
  DenseMatrix at(n, n);

  int sweep = 0;
  while (std::sqrt(off_norm2(a)) > target) {
    if (++sweep > opts.max_sweeps) throw NumericalError("exact_spectrum: Jacobi did not converge");
    for (Index round = 0; round + 1 < m; ++round) {
      rots.clear();
      for (Index i = 0; i < m / 2; ++i) {
        const Index p = players[static_cast<std::size_t>(i)];
        const Index q = players[static_cast<std::size_t>(m - 1 - i)];
        if (p >= n || q >= n) continue;
        const double apq = a(p, q);
        if (std::abs(apq) <= skip) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        rots.push_back({p, q, c, t * c, a(p, p) - t * apq, a(q, q) + t * apq});
      }
      // J^T A J = (A J)^T J: two contiguous column passes around a transpose
      for (int pass = 0; pass < 2; ++pass) {
        for (const Rot& r : rots) rotate_pair(a.col(r.p).data(), a.col(r.q).data(), n, r.c, r.s);
        if (pass == 0) {
          at = a.transpose();
          a.swap(at);
        }
      }
      if (opts.vectors) {
        for (const Rot& r : rots) rotate_pair(v.col(r.p).data(), v.col(r.q).data(), n, r.c, r.s);
      }
      for (const Rot& r : rots) {
        a(r.p, r.p) = r.app;
        a(r.q, r.q) = r.aqq;
        a(r.p, r.q) = a(r.q, r.p) = 0.0;
      }
      std::rotate(players.begin() + 1, players.end() - 1, players.end());
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return a(i, i) > a(j, j); });
  out.eigenvalues.resize(static_cast<std::size_t>(n));
  if (opts.vectors) out.eigenvectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    out.eigenvalues[static_cast<std::size_t>(k)] = a(order[k], order[k]);
    if (opts.vectors) out.eigenvectors.col(k) = v.col(order[k]);
  }
  return out;
}

double exact_lambda_max(const DenseMatrix& a, Index max_dim) {
  return exact_spectrum(a, {max_dim, false, 100}).eigenvalues.front();
}

double exact_lambda_min(const DenseMatrix& a, Index max_dim) {
  return exact_spectrum(a, {max_dim, false, 100}).eigenvalues.back();
}

double exact_spectral_norm(const DenseMatrix& a, Index max_dim) {
  auto ev = exact_spectrum(a, {max_dim, false, 100}).eigenvalues;
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

double level_width(double eps, Index n) {
  return eps / (5.0 * std::log2(static_cast<double>(n) / eps));
}

std::size_t level_count(double eps, Index n) {
  return static_cast<std::size_t>(std::ceil(15.0 * std::log2(static_cast<double>(n) / eps)));
}

long level_of(double lambda, double lambda0, double eps, Index n) {
  constexpr double kSnap = 1e-10;
  const double width = level_width(eps, n);
  const double y = 1.0 - lambda / lambda0;
  if (y > 3.0 * eps + kSnap) return -1;
  if (y <= 0.0) return 0;
  double x = y / width;
  const double r = std::round(x);
  if (std::abs(x - r) * width <= kSnap) x = r;
  const auto nu = static_cast<long>(std::floor(x));
  return std::min(nu, static_cast<long>(level_count(eps, n)) - 1);
}

SpectrumProfile spectrum_profile(const std::vector<double>& eigenvalues, double lambda0, double eps) {
  if (!(lambda0 > 0.0)) throw std::invalid_argument("spectrum_profile: lambda0 must be positive");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("spectrum_profile: eps must lie in (0,1)");
  SpectrumProfile p;
  p.lambda0 = lambda0;
  p.eps = eps;
  p.n = static_cast<Index>(eigenvalues.size());
  if (p.n == 0) throw DimensionError("spectrum_profile: empty spectrum");
  p.level_width = level_width(eps, p.n);
  const std::size_t count = level_count(eps, p.n);
  p.levels.assign(count, 0);
  for (double l : eigenvalues) {
    const long nu = level_of(l, lambda0, eps, p.n);
    if (nu < 0)
      ++p.below;
    else
      ++p.levels[static_cast<std::size_t>(nu)];
  }
  const double lg = std::log2(static_cast<double>(p.n) / eps);
  const double frac = eps / (600.0 * lg * lg * lg);
  std::size_t prefix = 0;
  p.potentials.resize(count);
  for (std::size_t nu = 0; nu < count; ++nu) {
    const std::size_t d = p.levels[nu];
    if (d > 0 && static_cast<double>(d) >= frac * static_cast<double>(prefix)) p.important.push_back(nu);
    prefix += d;
    p.potentials[nu] = prefix;
  }
  p.dim_T = prefix;
  return p;
}

SpectrumProfile spectrum_profile(const DenseMatrix& a_t, double lambda0, double eps) {
  return spectrum_profile(exact_spectrum(a_t, {512, false, 100}).eigenvalues, lambda0, eps);
}

std::vector<SpectrumProfile> potential_trace(const std::vector<DenseMatrix>& snapshots,
                                             double lambda0, double eps) {
  std::vector<SpectrumProfile> out;
  out.reserve(snapshots.size());
  for (const auto& s : snapshots) out.push_back(spectrum_profile(s, lambda0, eps));
  return out;
}

PotentialCheck check_potentials(const std::vector<SpectrumProfile>& trace) {
  PotentialCheck c;
  c.events = trace.size();
  for (std::size_t e = 1; e < trace.size(); ++e) {
    const auto& a = trace[e - 1].potentials;
    const auto& b = trace[e].potentials;
    if (a.size() != b.size()) throw DimensionError("check_potentials: level counts differ");
    bool dropped = false;
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (b[j] > a[j]) {
        ++c.violations;
        if (c.first_violation < 0) c.first_violation = static_cast<long>(e);
      }
      dropped = dropped || b[j] < a[j];
    }
    if (dropped) ++c.decreasing_steps;
    if (trace[e - 1].dim_T > 0) {
      ++c.active_pairs;
      if (dropped) ++c.active_decreasing;
    }
  }
  return c;
}

void write_potential_csv(std::ostream& out, const std::vector<SpectrumProfile>& trace) {
  out << "event,j,Phi_j\n";
  for (std::size_t e = 0; e < trace.size(); ++e)
    for (std::size_t j = 0; j < trace[e].potentials.size(); ++j)
      out << e << ',' << j << ',' << trace[e].potentials[j] << '\n';
}

}  // namespace dynev
