#include "dynev/power_method.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dynev/error.hpp"

namespace dynev {

const char* to_string(PowerKernel k) {
  switch (k) {
    case PowerKernel::kMatvec: return "matvec";
    case PowerKernel::kSquaring: return "squaring";
    case PowerKernel::kAuto: return "auto";
  }
  return "?";
}

PowerKernel parse_power_kernel(const std::string& s) {
  if (s == "matvec") return PowerKernel::kMatvec;
  if (s == "squaring") return PowerKernel::kSquaring;
  if (s == "auto") return PowerKernel::kAuto;
  throw std::invalid_argument("unknown power kernel '" + s + "' (matvec|squaring|auto)");
}

double log2n(Index n) { return std::max(1.0, std::log2(static_cast<double>(n))); }

std::size_t copies_for(Index n) {
  if (n <= 2) return 10;
  return static_cast<std::size_t>(std::ceil(10.0 * std::log2(static_cast<double>(n))));
}

std::size_t iterations_for(double eps, Index n) {
  const double k = std::ceil(4.0 * std::log2(static_cast<double>(n) / eps) / eps);
  return k < 1.0 ? 1 : static_cast<std::size_t>(k);
}

double clamp_power_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::invalid_argument("power method: eps must be positive");
  return std::min(eps, kMaxPowerEps);
}

PowerConfig PowerConfig::make(double eps, Index n, std::uint64_t seed, PowerKernel kernel) {
  if (n < 1) throw DimensionError("PowerConfig: n must be positive");
  PowerConfig c;
  c.eps = clamp_power_eps(eps);
  c.n = n;
  c.copies = copies_for(n);
  c.iterations = iterations_for(c.eps, n);
  c.seed = seed;
  c.kernel = kernel;
  return c;
}

PowerKernel PowerConfig::resolved_kernel() const {
  if (kernel != PowerKernel::kAuto) return kernel;
  return (n <= kSquaringMaxDim && iterations >= 64) ? PowerKernel::kSquaring : PowerKernel::kMatvec;
}

std::size_t CandidateSet::best() const {
  std::size_t b = 0;
  for (std::size_t r = 1; r < quad_forms.size(); ++r)
    if (quad_forms[r] > quad_forms[b]) b = r;
  return b;
}

DenseVector power_start(Index n, std::uint64_t seed, std::size_t r) {
  Rng rng(seed + r);
  return gaussian_vector(n, rng);
}

DenseVector power_iterate(const SymmetricOperator& op, const DenseVector& start,
                          std::size_t iterations, WorkMeter* meter, bool* zero_hit) {
  if (start.size() != op.dim()) throw DimensionError("power_iterate: dimension mismatch");
  if (zero_hit) *zero_hit = false;
  DenseVector x = start / start.norm();
  DenseVector y(x.size());
  for (std::size_t k = 0; k < iterations; ++k) {
    op.apply(x, y, meter);
    const double nrm = y.norm();
    if (!std::isfinite(nrm)) throw NumericalError("power_iterate: non-finite iterate");
    if (nrm == 0.0) {
      if (zero_hit) *zero_hit = true;
      return x;
    }
    x = y / nrm;
  }
  return x;
}

namespace {

CandidateSet copies_matvec(const SymmetricOperator& op, std::size_t copies,
                           std::size_t iterations, std::uint64_t seed, WorkMeter* meter) {
  CandidateSet set;
  set.witnesses.reserve(copies);
  set.quad_forms.reserve(copies);
  for (std::size_t r = 0; r < copies; ++r) {
    bool zero = false;
    DenseVector w = power_iterate(op, power_start(op.dim(), seed, r), iterations, meter, &zero);
    double q = op.quad_form(w, meter);
    if (zero) q = 0.0;
    set.witnesses.push_back(std::move(w));
    set.quad_forms.push_back(q);
  }
  return set;
}

CandidateSet copies_squaring(const SymmetricOperator& op, std::size_t copies,
                             std::size_t iterations, std::uint64_t seed, WorkMeter* meter) {
  const Index n = op.dim();
  const auto nn = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n);
  const auto R = static_cast<Index>(copies);

  DenseMatrix x(n, R);
  for (Index r = 0; r < R; ++r) {
    DenseVector s = power_start(n, seed, static_cast<std::size_t>(r));
    x.col(r) = s / s.norm();
  }
  std::vector<bool> zero(copies, false);

  DenseMatrix p = op.to_dense();
  charge(meter, nn);
  const double pn = p.norm();
  if (!std::isfinite(pn)) throw NumericalError("power method: non-finite operator");
  if (pn == 0.0) {
    zero.assign(copies, true);
  } else {
    p /= pn;
    DenseMatrix tmp(n, n);
    DenseMatrix y(n, R);
    for (std::size_t k = iterations; k > 0;) {
      if (k & 1U) {
        y.noalias() = p * x;
        charge(meter, nn * copies);
        for (Index r = 0; r < R; ++r) {
          if (zero[r]) continue;
          const double c = y.col(r).norm();
          if (!std::isfinite(c)) throw NumericalError("power method: non-finite iterate");
          if (c == 0.0) {
            zero[r] = true;
          } else {
            x.col(r) = y.col(r) / c;
          }
        }
      }
      k >>= 1U;
      if (k > 0) {
        tmp.noalias() = p * p;
        charge(meter, nn * static_cast<std::uint64_t>(n));
        p = 0.5 * (tmp + tmp.transpose());
        const double c = p.norm();
        if (!std::isfinite(c) || c == 0.0) throw NumericalError("power method: squaring underflow");
        p /= c;
      }
    }
  }

  CandidateSet set;
  set.witnesses.reserve(copies);
  set.quad_forms.reserve(copies);
  for (Index r = 0; r < R; ++r) {
    DenseVector w = x.col(r);
    w /= w.norm();
    double q = op.quad_form(w, meter);
    if (zero[r]) q = 0.0;
    set.witnesses.push_back(std::move(w));
    set.quad_forms.push_back(q);
  }
  return set;
}

}  // namespace

CandidateSet power_copies(const SymmetricOperator& op, std::size_t copies, std::size_t iterations,
                          std::uint64_t seed, PowerKernel kernel, WorkMeter* meter) {
  if (copies < 1) throw std::invalid_argument("power method: need at least one copy");
  if (kernel == PowerKernel::kAuto)
    kernel = (op.dim() <= kSquaringMaxDim && iterations >= 64) ? PowerKernel::kSquaring
                                                                : PowerKernel::kMatvec;
  CandidateSet set = kernel == PowerKernel::kSquaring
                         ? copies_squaring(op, copies, iterations, seed, meter)
                         : copies_matvec(op, copies, iterations, seed, meter);
  for (double q : set.quad_forms)
    if (!std::isfinite(q)) throw NumericalError("power method: non-finite quadratic form");
  return set;
}

void select_witness(CandidateSet& set, double eps) {
  set.r0.reset();
  set.band_fallback = false;
  const double strong = 1.0 - 5.0 * eps - kThresholdSlack;
  const double weak = 1.0 - eps - kThresholdSlack;
  for (std::size_t r = 0; r < set.size(); ++r)
    if (set.quad_forms[r] >= weak) {
      for (std::size_t s = 0; s < set.size(); ++s)
        if (set.quad_forms[s] >= strong) {
          set.r0 = s;
          return;
        }
      set.r0 = r;
      set.band_fallback = true;
      return;
    }
}

PowerOutcome power_method(const SymmetricOperator& op, const PowerConfig& cfg, WorkMeter* meter) {
  if (cfg.n != op.dim()) throw DimensionError("power_method: config n does not match operator");
  PowerOutcome out;
  out.candidates = power_copies(op, cfg.copies, cfg.iterations, cfg.seed, cfg.resolved_kernel(), meter);
  select_witness(out.candidates, cfg.eps);
  return out;
}

PowerOutcome power_method(double eps, const SymmetricOperator& op, std::uint64_t seed,
                          PowerKernel kernel, WorkMeter* meter) {
  return power_method(op, PowerConfig::make(eps, op.dim(), seed, kernel), meter);
}

ProjectionDiagnostic projection_diagnostic(const CandidateSet& set,
                                           const std::vector<double>& eigenvalues,
                                           const DenseMatrix& eigenvectors, double eps,
                                           std::size_t iterations) {
  const auto n = static_cast<Index>(eigenvalues.size());
  if (eigenvectors.rows() != n || eigenvectors.cols() != n)
    throw DimensionError("projection_diagnostic: spectrum dimension mismatch");
  for (const auto& w : set.witnesses)
    if (w.size() != n) throw DimensionError("projection_diagnostic: witness dimension mismatch");

  ProjectionDiagnostic d;
  for (const auto& w : set.witnesses) {
    DenseVector c = eigenvectors.transpose() * w;
    d.projections.emplace_back(c.size());
    for (Index i = 0; i < c.size(); ++i) d.projections.back()[i] = c[i] * c[i];
  }
  if (n == 0 || !(eigenvalues[0] > 0.0)) return d;

  const double l1 = eigenvalues[0];
  const double L = log2n(n);
  const double base = 1.0 - 10.0 * eps;
  const double expo = 2.0 * static_cast<double>(iterations) - 1.0;
  for (Index i = 0; i < n; ++i) {
    const double li = eigenvalues[i];
    if (li > l1 / 2.0) continue;
    d.checked.push_back(static_cast<std::size_t>(i));
    const double ratio = li / l1;
    if (!(base > 0.0)) {
      // decay estimate only covers eps < 1/10
      d.bounds.push_back(std::numeric_limits<double>::infinity());
      d.log_bounds.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    d.bounds.push_back(2500.0 * L * L * std::pow(base, expo) * ratio);
    if (ratio > 0.0)
      d.log_bounds.push_back(std::log(2500.0) + 2.0 * std::log(L) + expo * std::log(base) +
                             std::log(ratio));
    else
      d.log_bounds.push_back(-std::numeric_limits<double>::infinity());
  }
  return d;
}

}  // namespace dynev
