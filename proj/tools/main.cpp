// dynev: generate decremental streams, run the eigenvalue tracker, sweep
// recompute counts, check PSD-ness and profile spectra.
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bench.hpp"
#include "dynev/checkpsd.hpp"
#include "dynev/io.hpp"

using namespace dynev;

namespace {

struct StreamArgs {
  std::string matrix;
  std::string stream;
  std::string gen;
  Index n = 50;
  std::size_t T = 100;
  double density = 0.1;
  double eps_target = 0.1;
  std::size_t columns = 0;
};

void add_gen_flags(CLI::App* c, StreamArgs& a) {
  c->add_option("--n", a.n, "dimension")->check(CLI::PositiveNumber);
  c->add_option("--T", a.T, "number of updates");
  c->add_option("--density", a.density, "nonzero fraction of factor columns");
  c->add_option("--eps-target", a.eps_target, "eps the stream is tuned for (adversarial-slow)");
  c->add_option("--columns", a.columns, "factor columns for the drains (default max(T, n))");
}

StreamSpec spec_from(const StreamArgs& a, const std::string& mode, std::uint64_t seed) {
  StreamSpec s;
  s.mode = parse_stream_mode(mode);
  s.n = a.n;
  s.T = a.T;
  s.density = a.density;
  s.eps_target = a.eps_target;
  s.columns = a.columns;
  s.seed = seed;
  return s;
}

GeneratedStream load_stream(const StreamArgs& a, std::uint64_t seed) {
  if (!a.gen.empty()) {
    if (!a.matrix.empty() || !a.stream.empty())
      throw std::invalid_argument("use either --gen or --matrix/--stream, not both");
    return generate(spec_from(a, a.gen, seed));
  }
  if (a.matrix.empty()) throw std::invalid_argument("need --matrix (and optionally --stream) or --gen");
  GeneratedStream g;
  g.a0 = read_matrix_market(a.matrix);
  if (!a.stream.empty()) g.updates = read_update_stream(a.stream, g.a0.n());
  return g;
}

// stdout for "" or "-", else the opened file
std::ostream& sink(const std::string& path, std::ofstream& f) {
  if (path.empty() || path == "-") return std::cout;
  f.open(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

template <class T>
std::vector<T> parse_list(const std::string& s) {
  std::vector<T> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::istringstream is(item);
    T v;
    if (!(is >> v) || !is.eof()) throw std::invalid_argument("bad list element '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty list '" + s + "'");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dynev: decremental maximum-eigenvalue tracking"};
  app.require_subcommand(1);
  std::uint64_t seed = bench::default_seed();
  std::string kernel = "auto";
  app.add_option("--seed", seed, "random seed (default: $DYNEV_SEED or 0)");

  // gen
  StreamArgs ga;
  std::string gen_mode = "cholesky-drain", matrix_out, stream_out;
  auto* gen = app.add_subcommand("gen", "write a generated A_0 (Matrix Market) and stream (JSONL)");
  gen->add_option("--mode", gen_mode, "cholesky-drain|scaled-drain|eig-drain|adversarial-slow");
  add_gen_flags(gen, ga);
  gen->add_option("--matrix-out", matrix_out, "A_0 output path")->required();
  gen->add_option("--stream-out", stream_out, "update stream output path")->required();
  gen->add_option("--seed", seed, "random seed");

  // run
  StreamArgs ra;
  double eps = 0.1;
  bool verify = false;
  std::string csv_out, json_out, profile_out;
  auto* run = app.add_subcommand("run", "run the tracker over a stream");
  run->add_option("--matrix", ra.matrix, "A_0 in Matrix Market format");
  run->add_option("--stream", ra.stream, "JSONL update stream");
  run->add_option("--gen", ra.gen, "generate the stream instead (mode name)");
  add_gen_flags(run, ra);
  run->add_option("--eps", eps, "approximation parameter in (0,1)");
  run->add_option("--seed", seed, "random seed");
  run->add_option("--kernel", kernel, "matvec|squaring|auto");
  run->add_flag("--verify", verify, "check every step against the dense oracle (n <= 512)");
  run->add_option("--csv", csv_out, "per-step CSV (default stdout)");
  run->add_option("--json", json_out, "summary JSON (default stderr)");
  run->add_option("--profile-out", profile_out, "potential table CSV at recompute events");

  // sweep
  std::string sweep_ns = "32,64,128", sweep_eps = "0.2", sweep_mode = "eig-drain", sweep_csv;
  bench::SweepOptions so;
  std::size_t sweep_T = 0;
  bool sweep_fixed_T = false;
  auto* sweep = app.add_subcommand("sweep", "mean recompute counts over n and eps");
  sweep->add_option("--n", sweep_ns, "comma-separated dimensions");
  sweep->add_option("--eps", sweep_eps, "comma-separated eps values");
  sweep->add_option("--trials", so.trials, "seeds per (n, eps)");
  sweep->add_option("--mode", sweep_mode, "stream mode");
  sweep->add_option("--t-factor", so.t_factor, "T = t-factor * n");
  auto* tflag = sweep->add_option("--T", sweep_T, "fixed T for every n");
  sweep->add_option("--density", so.density, "factor density for the drains");
  sweep->add_option("--seed", seed, "random seed");
  sweep->add_option("--kernel", kernel, "matvec|squaring|auto");
  sweep->add_option("--csv", sweep_csv, "output CSV (default stdout)");

  // checkpsd
  std::string psd_matrix, psd_out;
  double delta = 0.1, kappa = 10.0;
  auto* psd = app.add_subcommand("checkpsd", "certify A psd (exit 0) or not (exit 1)");
  psd->add_option("--matrix", psd_matrix, "symmetric matrix, Matrix Market")->required();
  psd->add_option("--delta", delta, "accuracy in (0,1)");
  psd->add_option("--kappa", kappa, "condition number bound >= 1");
  psd->add_option("--seed", seed, "random seed");
  psd->add_option("--kernel", kernel, "matvec|squaring|auto");
  psd->add_option("--out", psd_out, "write X (dense Matrix Market) on certificate");

  // profile
  StreamArgs pa;
  std::string prof_csv;
  auto* prof = app.add_subcommand("profile", "potentials Phi_j at every recompute event");
  prof->add_option("--matrix", pa.matrix, "A_0 in Matrix Market format");
  prof->add_option("--stream", pa.stream, "JSONL update stream");
  prof->add_option("--gen", pa.gen, "generate the stream instead (mode name)");
  add_gen_flags(prof, pa);
  prof->add_option("--eps", eps, "approximation parameter in (0,1)");
  prof->add_option("--seed", seed, "random seed");
  prof->add_option("--kernel", kernel, "matvec|squaring|auto");
  prof->add_option("--csv", prof_csv, "event,j,Phi_j table (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const PowerKernel pk = parse_power_kernel(kernel);

    if (*gen) {
      const GeneratedStream g = generate(spec_from(ga, gen_mode, seed));
      write_matrix_market(matrix_out, g.a0);
      write_update_stream(stream_out, g.updates);
      return 0;
    }

    if (*run) {
      const GeneratedStream g = load_stream(ra, seed);
      bench::RunOptions o;
      o.eps = eps;
      o.seed = seed;
      o.kernel = pk;
      o.verify = verify;
      o.profile = !profile_out.empty();
      const bench::RunReport rep = bench::run_tracker(g, o);
      std::ofstream fc, fj, fp;
      bench::write_run_csv(sink(csv_out, fc), rep);
      if (json_out.empty()) {
        bench::write_run_json(std::cerr, rep);
      } else {
        bench::write_run_json(sink(json_out, fj), rep);
      }
      if (o.profile) write_potential_csv(sink(profile_out, fp), rep.profiles);
      if (rep.first_violation) {
        std::cerr << "verification failed at t = " << rep.first_violation->t << ": "
                  << rep.first_violation->what << " (" << rep.violations << " violating steps)\n";
        return 1;
      }
      return 0;
    }

    if (*sweep) {
      so.ns = parse_list<Index>(sweep_ns);
      so.epss = parse_list<double>(sweep_eps);
      so.mode = parse_stream_mode(sweep_mode);
      so.seed = seed;
      so.kernel = pk;
      sweep_fixed_T = tflag->count() > 0;
      if (sweep_fixed_T) so.fixed_T = sweep_T;
      std::ofstream f;
      bench::write_sweep_csv(sink(sweep_csv, f), bench::run_sweep(so));
      return 0;
    }

    if (*psd) {
      const SparseSymMatrix a = read_matrix_market(psd_matrix);
      CheckConfig cfg = CheckConfig::make(delta, kappa, a.n());
      cfg.kernel = pk;
      const PsdVerdict v = check_psd(a, seed, cfg);
      nlohmann::json j;
      j["verdict"] = v.certified() ? "certificate" : "not_psd";
      j["steps"] = v.steps;
      j["T"] = cfg.steps;
      j["mu1"] = v.mu1;
      j["sigma"] = v.sigma;
      j["threshold"] = v.threshold;
      j["failed_step"] = v.failed_step ? nlohmann::json(*v.failed_step) : nlohmann::json(nullptr);
      j["final_check_failed"] = v.final_check_failed;
      std::cout << j.dump() << '\n';
      if (v.certified() && !psd_out.empty()) write_matrix_market_dense(psd_out, v.X);
      return v.certified() ? 0 : 1;
    }

    if (*prof) {
      const GeneratedStream g = load_stream(pa, seed);
      if (g.a0.n() > 512) throw std::invalid_argument("profile needs the dense oracle, capped at n = 512");
      bench::RunOptions o;
      o.eps = eps;
      o.seed = seed;
      o.kernel = pk;
      o.profile = true;
      const bench::RunReport rep = bench::run_tracker(g, o);
      std::ofstream f;
      write_potential_csv(sink(prof_csv, f), rep.profiles);
      const PotentialCheck c = check_potentials(rep.profiles);
      std::cerr << "events " << c.events << ", monotonicity violations " << c.violations
                << ", steps with a strict decrease " << c.decreasing_steps << " (" << c.active_decreasing
                << " of " << c.active_pairs << " while the top band is non-empty)\n";
      return c.violations == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
