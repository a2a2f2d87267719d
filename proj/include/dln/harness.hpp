#pragma once

// Monte Carlo experiment driver: sampling, solve orchestration (ab-initio or
// parameter homotopy from one generic pre-solve), classification, CSV
// aggregation, and canned reproduction recipes.
//
// Seed discipline (frozen; see rng.hpp for the generator itself):
//   sample_seed(s)   = derive_seed(master_seed, s)      s = 0-based index
//   data stream      = derive_seed(sample_seed, 1)
//   lambda stream    = derive_seed(sample_seed, 2)
//   solver seed      = derive_seed(sample_seed, 3)
//   retry attempt k  = derive_seed(solver_seed, 1000 + k)
//   generic member   = derive_seed(presolve_seed, 4)

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dln/classify.hpp"
#include "dln/net.hpp"
#include "dln/tracker.hpp"

namespace dln {

// Standard-normal X then Y, each row-major, from the sample's data stream.
DataMatrices sample_data(const NetworkSpec& spec, std::uint64_t sample_seed);

// Uniform[0, delta] entries, layer-major/row-major.  delta = 0 gives exact
// zeros; for fixed seeds Lambda(delta) = delta * Lambda(1) entrywise, which
// is what makes paired sweeps work.
RegMatrices sample_lambda(const NetworkSpec& spec, std::uint64_t sample_seed,
                          double delta);

// Complex-Gaussian family member (X, Y, Lambda all complex) for generic
// pre-solves and genericity tests.
ComplexFamilyMember generic_member(const NetworkSpec& spec, std::uint64_t seed);

// Ab-initio solve of the generic member's gradient system.  The returned
// set's seed field is `seed`, so the member is reconstructible; the set
// doubles as the parameter-mode cache file.
SolutionSet presolve_generic(const NetworkSpec& spec, std::uint64_t seed,
                             const TrackOptions& opts);

enum class SolveMode { AbInitio, ParameterHomotopy };

struct ExperimentConfig {
  NetworkSpec spec;
  int samples = 100;
  std::uint64_t master_seed = 1;
  double delta = 1.0;  // Lambda entries ~ Uniform[0, delta]
  TrackOptions solver;
  SolveMode mode = SolveMode::AbInitio;
  std::shared_ptr<const SolutionSet> cache;  // required in parameter mode
};

struct SampleRow {
  int sample_id = 0;
  std::uint64_t sample_seed = 0;
  ClassifiedSet stats;
  bool flagged = false;    // still unclean after the one retry
  int n_real_nonzero = 0;  // real points with ||w||_inf > 1e-6 (origin excluded)
};

struct ExperimentReport {
  ExperimentConfig cfg;
  std::vector<SampleRow> rows;
  double mean_nr = 0.0;
  double mean_nr_nonzero = 0.0;
  int max_nr = 0;
  int max_index = -1;
  std::vector<double> mean_index_ratio;  // indices 0..nvars
  std::optional<double> min_gmin, mean_gmin, max_gmin;
  int n_nonglobal = 0;
  int n_flagged = 0;
};

// Per sample: draw data and Lambda, solve (retrying unclean solves once
// with a fresh gamma), classify, aggregate.  Throws ConfigError on a bad
// config or a missing/mismatched cache in parameter mode.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

// Header sample_id,seed,n_complex,n_real,idx0..idxK,global_min_loss,
// nonglobal_minima with K = nvars; one row per sample; byte-identical for
// identical configs.  global_min_loss is empty when no index-0 point exists.
std::string experiment_csv(const ExperimentReport& report);

struct SweepReport {
  std::vector<double> deltas;
  std::vector<ExperimentReport> reports;  // aligned with deltas
};

// Paired sweep: one run_experiment per delta, all sharing master_seed, so a
// sample keeps its X, Y across deltas and Lambda scales linearly.  delta = 0
// entries are forced to ab-initio mode (the unregularized target is outside
// the generic family).  Serves both the trivialization and the global-
// minimum tables; the two CSV emitters below are its views.
SweepReport run_sweep(const NetworkSpec& spec, const std::vector<double>& deltas,
                      int samples, std::uint64_t master_seed,
                      const TrackOptions& solver, SolveMode mode,
                      std::shared_ptr<const SolutionSet> cache);

std::string trivialization_csv(const SweepReport& sweep);  // delta,mean_nr,min_nr,max_nr
std::string global_min_csv(const SweepReport& sweep);  // delta,min_gmin,mean_gmin,max_gmin

struct ReproduceResult {
  std::string case_id;
  bool pass = false;
  std::string report;  // one line per check
};

// Canned recipes over the registered case ids (reproduce_cases lists them);
// throws ConfigError for an unknown id.
ReproduceResult reproduce(const std::string& case_id);
std::vector<std::string> reproduce_cases();

}  // namespace dln
