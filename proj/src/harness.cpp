#include "dln/harness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dln/errors.hpp"
#include "dln/json_io.hpp"
#include "dln/rng.hpp"

namespace dln {

DataMatrices sample_data(const NetworkSpec& spec, std::uint64_t sample_seed) {
  spec.validate();
  CounterRng rng(derive_seed(sample_seed, 1));
  DataMatrices data;
  data.X.resize(static_cast<std::size_t>(spec.dx) * spec.m);
  data.Y.resize(static_cast<std::size_t>(spec.dy) * spec.m);
  for (auto& v : data.X) v = rng.next_gauss();
  for (auto& v : data.Y) v = rng.next_gauss();
  return data;
}

RegMatrices sample_lambda(const NetworkSpec& spec, std::uint64_t sample_seed,
                          double delta) {
  spec.validate();
  if (delta < 0.0) throw ConfigError("sample_lambda: delta must be >= 0");
  CounterRng rng(derive_seed(sample_seed, 2));
  RegMatrices reg;
  for (int i = 1; i <= spec.H + 1; ++i) {
    std::vector<double> layer(spec.layer_size(i));
    for (auto& v : layer) v = rng.next_uniform(0.0, delta);
    reg.lambdas.push_back(std::move(layer));
  }
  return reg;
}

ComplexFamilyMember generic_member(const NetworkSpec& spec, std::uint64_t seed) {
  spec.validate();
  CounterRng rng(derive_seed(seed, 4));
  ComplexFamilyMember fam;
  fam.X.resize(static_cast<std::size_t>(spec.dx) * spec.m);
  fam.Y.resize(static_cast<std::size_t>(spec.dy) * spec.m);
  for (auto& v : fam.X) v = rng.next_gauss_complex();
  for (auto& v : fam.Y) v = rng.next_gauss_complex();
  for (int i = 1; i <= spec.H + 1; ++i) {
    std::vector<Complex> layer(spec.layer_size(i));
    for (auto& v : layer) v = rng.next_gauss_complex();
    fam.lambdas.push_back(std::move(layer));
  }
  return fam;
}

SolutionSet presolve_generic(const NetworkSpec& spec, std::uint64_t seed,
                             const TrackOptions& opts) {
  const PolySystem f = build_gradient_complex(spec, generic_member(spec, seed));
  return solve_total_degree(f, opts, seed);
}

namespace {

SolutionSet solve_sample(const PolySystem& f_to, const PolySystem* f_from,
                         const ExperimentConfig& cfg, std::uint64_t solver_seed,
                         bool* flagged) {
  auto attempt = [&](std::uint64_t seed) {
    if (f_from) return parameter_track(*f_from, f_to, *cfg.cache, cfg.solver, seed);
    return solve_total_degree(f_to, cfg.solver, seed);
  };
  SolutionSet sols = attempt(solver_seed);
  if (!sols.clean()) {
    SolutionSet retry = attempt(derive_seed(solver_seed, 1001));
    if (retry.clean() || retry.n_failed < sols.n_failed) sols = std::move(retry);
  }
  *flagged = !sols.clean();
  return sols;
}

void aggregate(ExperimentReport& rep) {
  const int nvars = rep.cfg.spec.nvars();
  double sum_nr = 0.0, sum_nz = 0.0, sum_gmin = 0.0;
  int n_gmin = 0;
  std::vector<ClassifiedSet> stats;
  for (const auto& row : rep.rows) {
    sum_nr += row.stats.n_real;
    sum_nz += row.n_real_nonzero;
    rep.max_nr = std::max(rep.max_nr, row.stats.n_real);
    rep.max_index = std::max(rep.max_index, row.stats.max_index);
    if (row.stats.global_min_loss) {
      const double g = *row.stats.global_min_loss;
      rep.min_gmin = rep.min_gmin ? std::min(*rep.min_gmin, g) : g;
      rep.max_gmin = rep.max_gmin ? std::max(*rep.max_gmin, g) : g;
      sum_gmin += g;
      ++n_gmin;
    }
    if (row.stats.has_nonglobal_minima) ++rep.n_nonglobal;
    if (row.flagged) ++rep.n_flagged;
    stats.push_back(row.stats);
  }
  const double n = static_cast<double>(rep.rows.size());
  rep.mean_nr = sum_nr / n;
  rep.mean_nr_nonzero = sum_nz / n;
  if (n_gmin > 0) rep.mean_gmin = sum_gmin / n_gmin;
  rep.mean_index_ratio = index_distribution(stats, nvars);
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.spec.validate();
  if (cfg.samples < 1) throw ConfigError("run_experiment: samples must be >= 1");
  if (cfg.delta < 0.0) throw ConfigError("run_experiment: delta must be >= 0");

  PolySystem f_from;
  const bool param = cfg.mode == SolveMode::ParameterHomotopy;
  if (param) {
    if (!cfg.cache)
      throw ConfigError("parameter mode requires a generic pre-solve cache");
    if (cfg.cache->nvars != cfg.spec.nvars())
      throw ConfigError("cache nvars " + std::to_string(cfg.cache->nvars) +
                        " does not match spec nvars " +
                        std::to_string(cfg.spec.nvars()));
    f_from = build_gradient_complex(cfg.spec, generic_member(cfg.spec, cfg.cache->seed));
  }

  ExperimentReport rep;
  rep.cfg = cfg;
  for (int s = 0; s < cfg.samples; ++s) {
    SampleRow row;
    row.sample_id = s;
    row.sample_seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(s));
    const DataMatrices data = sample_data(cfg.spec, row.sample_seed);
    const RegMatrices reg = sample_lambda(cfg.spec, row.sample_seed, cfg.delta);
    const PolySystem f_to = build_gradient(cfg.spec, data, reg);
    const std::uint64_t solver_seed = derive_seed(row.sample_seed, 3);
    const SolutionSet sols =
        solve_sample(f_to, param ? &f_from : nullptr, cfg, solver_seed, &row.flagged);
    row.stats = classify(cfg.spec, data, reg, sols);
    for (const auto& pt : row.stats.points) {
      double nrm = 0.0;
      for (const double w : pt.weights) nrm = std::max(nrm, std::abs(w));
      if (nrm > 1e-6) ++row.n_real_nonzero;
    }
    rep.rows.push_back(std::move(row));
  }
  aggregate(rep);
  return rep;
}

std::string experiment_csv(const ExperimentReport& rep) {
  const int K = rep.cfg.spec.nvars();
  std::ostringstream out;
  out << "sample_id,seed,n_complex,n_real";
  for (int i = 0; i <= K; ++i) out << ",idx" << i;
  out << ",global_min_loss,nonglobal_minima\n";
  for (const auto& row : rep.rows) {
    out << row.sample_id << ',' << row.sample_seed << ',' << row.stats.n_complex
        << ',' << row.stats.n_real;
    for (int i = 0; i <= K; ++i) {
      const auto it = row.stats.index_histogram.find(i);
      out << ',' << (it == row.stats.index_histogram.end() ? 0 : it->second);
    }
    out << ',';
    if (row.stats.global_min_loss) out << format_double(*row.stats.global_min_loss);
    out << ',' << (row.stats.has_nonglobal_minima ? 1 : 0) << '\n';
  }
  return out.str();
}

SweepReport run_sweep(const NetworkSpec& spec, const std::vector<double>& deltas,
                      int samples, std::uint64_t master_seed,
                      const TrackOptions& solver, SolveMode mode,
                      std::shared_ptr<const SolutionSet> cache) {
  if (deltas.empty()) throw ConfigError("run_sweep: empty delta list");
  if (!std::is_sorted(deltas.begin(), deltas.end()))
    throw ConfigError("run_sweep: deltas must be sorted ascending");
  SweepReport sweep;
  for (const double delta : deltas) {
    ExperimentConfig cfg;
    cfg.spec = spec;
    cfg.samples = samples;
    cfg.master_seed = master_seed;
    cfg.delta = delta;
    cfg.solver = solver;
    cfg.mode = delta == 0.0 ? SolveMode::AbInitio : mode;
    cfg.cache = cache;
    sweep.deltas.push_back(delta);
    sweep.reports.push_back(run_experiment(cfg));
  }
  return sweep;
}

std::string trivialization_csv(const SweepReport& sweep) {
  std::ostringstream out;
  out << "delta,mean_nr,min_nr,max_nr\n";
  for (std::size_t i = 0; i < sweep.deltas.size(); ++i) {
    const auto& rep = sweep.reports[i];
    int min_nr = rep.rows.empty() ? 0 : rep.rows.front().stats.n_real;
    for (const auto& row : rep.rows) min_nr = std::min(min_nr, row.stats.n_real);
    out << format_double(sweep.deltas[i]) << ',' << format_double(rep.mean_nr) << ','
        << min_nr << ',' << rep.max_nr << '\n';
  }
  return out.str();
}

std::string global_min_csv(const SweepReport& sweep) {
  std::ostringstream out;
  out << "delta,min_gmin,mean_gmin,max_gmin\n";
  for (std::size_t i = 0; i < sweep.deltas.size(); ++i) {
    const auto& rep = sweep.reports[i];
    out << format_double(sweep.deltas[i]) << ',';
    if (rep.min_gmin) out << format_double(*rep.min_gmin);
    out << ',';
    if (rep.mean_gmin) out << format_double(*rep.mean_gmin);
    out << ',';
    if (rep.max_gmin) out << format_double(*rep.max_gmin);
    out << '\n';
  }
  return out.str();
}

}  // namespace dln
