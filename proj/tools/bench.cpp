#include "bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace dynev::bench {

std::uint64_t default_seed(std::uint64_t fallback) {
  const char* s = std::getenv("DYNEV_SEED");
  if (!s || !*s) return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s, &end, 10);
  return (end && *end == '\0') ? v : fallback;
}

std::optional<std::string> check_step(double eps, double lambda, double witness_rq, double lambda_max) {
  std::ostringstream os;
  os << std::setprecision(17);
  if (lambda < (1.0 - eps) * lambda_max - 1e-9) {
    os << "lambda_t " << lambda << " < (1-eps) lambda_max, lambda_max = " << lambda_max;
    return os.str();
  }
  if (lambda > lambda_max * (1.0 + 1e-9) && lambda > 1e-300) {
    os << "lambda_t " << lambda << " > lambda_max " << lambda_max;
    return os.str();
  }
  if (witness_rq < (1.0 - eps) * lambda_max - 1e-9) {
    os << "w^T A w " << witness_rq << " < (1-eps) lambda_max, lambda_max = " << lambda_max;
    return os.str();
  }
  return std::nullopt;
}

RunReport run_tracker(const GeneratedStream& stream, const RunOptions& opts) {
  const Index n = stream.a0.n();
  if ((opts.verify || opts.profile) && n > 512)
    throw std::invalid_argument("--verify/--profile need the dense oracle, which is capped at n = 512");

  RunReport rep;
  const auto t0 = std::chrono::steady_clock::now();
  EigenTracker tr(opts.eps, stream.a0, opts.seed, {opts.kernel});
  double lambda0 = 0.0;

  std::size_t prev_rc = 0;
  std::uint64_t prev_touched = 0;
  auto record = [&](std::size_t t, const EigenEstimate& e) {
    const EigenTrackerStats st = tr.stats();
    RunRow row;
    row.t = t;
    row.lambda = e.lambda;
    row.recomputes = st.recompute_count - prev_rc;
    row.epoch = e.epoch;
    row.touched = st.touched_nnz_total - prev_touched;
    prev_rc = st.recompute_count;
    prev_touched = st.touched_nnz_total;
    row.oracle_lambda_max = std::numeric_limits<double>::quiet_NaN();
    row.witness_quality = std::numeric_limits<double>::quiet_NaN();
    if (opts.verify || (opts.profile && (t == 0 || row.recomputes > 0))) {
      const DenseMatrix a = tr.dense_current();
      const ExactSpectrum sp = exact_spectrum(a, {512, false, 100});
      const double lmax = sp.eigenvalues.front();
      if (t == 0) lambda0 = lmax;
      if (opts.verify) {
        row.oracle_lambda_max = lmax;
        row.witness_quality = e.w->dot(a * *e.w);
        if (auto bad = check_step(opts.eps, e.lambda, row.witness_quality, lmax)) {
          ++rep.violations;
          if (!rep.first_violation) rep.first_violation = Violation{t, *bad};
        }
      }
      if (opts.profile && (t == 0 || row.recomputes > 0) && lambda0 > 0.0) {
        rep.profiles.push_back(spectrum_profile(sp.eigenvalues, lambda0, opts.eps));
        rep.profile_steps.push_back(t);
      }
    }
    rep.rows.push_back(row);
  };

  record(0, tr.query());
  for (std::size_t t = 0; t < stream.updates.size(); ++t) record(t + 1, tr.update(stream.updates[t]));

  const EigenTrackerStats st = tr.stats();
  rep.summary.T = stream.updates.size();
  rep.summary.recompute_count = st.recompute_count;
  rep.summary.epochs = st.epoch;
  rep.summary.restarts = st.restarts;
  rep.summary.total_touched_nnz = st.touched_nnz_total;
  rep.summary.zero_mode = st.zero_mode;
  rep.summary.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

namespace {

void put(std::ostream& out, double x) {
  if (std::isnan(x))
    out << "nan";
  else
    out << x;
}

}  // namespace

void write_run_csv(std::ostream& out, const RunReport& r) {
  out << "t,lambda_t,oracle_lambda_max,witness_quality,recompute_flag,epoch,touched_nnz\n";
  out << std::setprecision(17);
  for (const RunRow& row : r.rows) {
    out << row.t << ',';
    put(out, row.lambda);
    out << ',';
    put(out, row.oracle_lambda_max);
    out << ',';
    put(out, row.witness_quality);
    out << ',' << row.recomputes << ',' << row.epoch << ',' << row.touched << '\n';
  }
}

void write_run_json(std::ostream& out, const RunReport& r) {
  nlohmann::json j;
  j["T"] = r.summary.T;
  j["recompute_count"] = r.summary.recompute_count;
  j["epochs"] = r.summary.epochs;
  j["restarts"] = r.summary.restarts;
  j["total_touched_nnz"] = r.summary.total_touched_nnz;
  j["wall_time"] = r.summary.wall_time;
  j["zero_mode"] = r.summary.zero_mode;
  j["violations"] = r.violations;
  if (r.first_violation) {
    j["first_violation"] = {{"t", r.first_violation->t}, {"what", r.first_violation->what}};
  } else {
    j["first_violation"] = nullptr;
  }
  out << j.dump(2) << '\n';
}

double recompute_bound(Index n, double eps) {
  const double l = std::log2(static_cast<double>(n) / eps);
  return log2n(n) * std::pow(l, 5) / (eps * eps);
}

StreamSpec sweep_stream_spec(const SweepOptions& o, Index n, double eps, std::size_t trial) {
  StreamSpec s;
  s.mode = o.mode;
  s.n = n;
  s.T = o.fixed_T ? *o.fixed_T
                  : static_cast<std::size_t>(std::llround(o.t_factor * static_cast<double>(n)));
  s.density = o.density;
  s.eps_target = eps;
  s.seed = derive_seed(o.seed, 1000003ULL * static_cast<std::uint64_t>(n) + trial);
  return s;
}

std::uint64_t sweep_tracker_seed(const SweepOptions& o, std::size_t trial) {
  return derive_seed(o.seed ^ 0x5bd1e995ULL, trial);
}

std::vector<SweepRow> run_sweep(const SweepOptions& opts) {
  std::vector<SweepRow> rows;
  for (Index n : opts.ns) {
    for (double eps : opts.epss) {
      SweepRow row;
      row.n = n;
      row.eps = eps;
      row.trials = opts.trials;
      double sum_rc = 0.0, sum_ep = 0.0;
      for (std::size_t k = 0; k < opts.trials; ++k) {
        const StreamSpec spec = sweep_stream_spec(opts, n, eps, k);
        row.T = spec.T;
        const GeneratedStream g = generate(spec);
        EigenTracker tr(eps, g.a0, sweep_tracker_seed(opts, k), {opts.kernel});
        for (const auto& v : g.updates) tr.update(v);
        const EigenTrackerStats st = tr.stats();
        sum_rc += static_cast<double>(st.recompute_count);
        sum_ep += static_cast<double>(st.epoch);
        row.max_recompute = std::max(row.max_recompute, st.recompute_count);
      }
      const double tr_n = static_cast<double>(std::max<std::size_t>(opts.trials, 1));
      row.mean_recompute = sum_rc / tr_n;
      row.mean_epochs = sum_ep / tr_n;
      row.bound = recompute_bound(n, eps);
      row.ratio = row.mean_recompute / row.bound;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "n,eps,T,trials,mean_recompute,max_recompute,mean_epochs,bound,ratio\n";
  out << std::setprecision(10);
  for (const auto& r : rows)
    out << r.n << ',' << r.eps << ',' << r.T << ',' << r.trials << ',' << r.mean_recompute << ','
        << r.max_recompute << ',' << r.mean_epochs << ',' << r.bound << ',' << r.ratio << '\n';
}

}  // namespace dynev::bench
