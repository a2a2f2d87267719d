// dlnsolve: build, solve, and classify the stationary-point systems of
// regularized deep linear networks, plus the Monte Carlo experiment driver.
//
// Exit codes: 0 success/pass, 1 assertion or numeric failure, 2 bad
// configuration or input.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dln/bounds.hpp"
#include "dln/classify.hpp"
#include "dln/errors.hpp"
#include "dln/harness.hpp"
#include "dln/json_io.hpp"
#include "dln/net.hpp"
#include "dln/tracker.hpp"

namespace {

using namespace dln;
using nlohmann::json;

NetworkSpec load_spec(const std::string& path) {
  return spec_from_json(load_json_file(path));
}

struct SolveInputs {
  NetworkSpec spec;
  DataMatrices data;
  RegMatrices reg;
};

SolveInputs load_inputs(const std::string& spec_path, const std::string& data_path,
                        const std::string& reg_path) {
  SolveInputs in;
  in.spec = load_spec(spec_path);
  in.data = data_from_json(load_json_file(data_path), in.spec);
  in.reg = reg_from_json(load_json_file(reg_path), in.spec);
  return in;
}

std::vector<double> parse_deltas(const std::string& text) {
  std::vector<double> out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    if (token.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      out.push_back(std::stod(token));
    } catch (const std::exception&) {
      throw ConfigError("cannot parse delta '" + token + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty delta list");
  return out;
}

json solve_summary(const SolutionSet& sols) {
  return {{"n_paths", sols.n_paths()},
          {"success", sols.n_success},
          {"diverged", sols.n_diverged},
          {"failed", sols.n_failed},
          {"distinct_solutions", sols.points.size()},
          {"clean", sols.clean()}};
}

int run(int argc, char** argv) {
  CLI::App app{"stationary-point toolkit for regularized deep linear networks"};
  app.require_subcommand(1);

  // bounds
  auto* cmd_bounds = app.add_subcommand("bounds", "root-count bounds for a network spec");
  std::string bounds_spec;
  std::uint64_t bounds_bkk = 0;
  cmd_bounds->add_option("--spec", bounds_spec, "network spec JSON")->required();
  cmd_bounds->add_option("--bkk", bounds_bkk, "published BKK reference value");

  // build
  auto* cmd_build = app.add_subcommand("build", "emit the gradient system as JSON");
  std::string build_spec, build_data, build_reg, build_out;
  cmd_build->add_option("--spec", build_spec)->required();
  cmd_build->add_option("--data", build_data)->required();
  cmd_build->add_option("--reg", build_reg)->required();
  cmd_build->add_option("--out", build_out, "output system JSON")->required();

  // solve
  auto* cmd_solve = app.add_subcommand("solve", "find all isolated complex roots");
  std::string solve_spec, solve_data, solve_reg, solve_out, solve_cache;
  std::string solve_mode = "ab_initio";
  std::uint64_t solve_seed = 1;
  std::uint64_t solve_budget = 1000000;
  int solve_threads = 0;
  cmd_solve->add_option("--spec", solve_spec)->required();
  cmd_solve->add_option("--data", solve_data)->required();
  cmd_solve->add_option("--reg", solve_reg)->required();
  cmd_solve->add_option("--mode", solve_mode, "ab_initio or param")
      ->check(CLI::IsMember({"ab_initio", "param"}));
  cmd_solve->add_option("--cache", solve_cache, "generic pre-solve JSON (param mode)");
  cmd_solve->add_option("--seed", solve_seed, "solver seed");
  cmd_solve->add_option("--out", solve_out, "output solution-set JSON")->required();
  cmd_solve->add_option("--budget", solve_budget, "path budget");
  cmd_solve->add_option("--threads", solve_threads, "worker threads (0 = auto)");

  // presolve
  auto* cmd_presolve = app.add_subcommand(
      "presolve", "solve one generic complex family member as a parameter-mode cache");
  std::string pre_spec, pre_out;
  std::uint64_t pre_seed = 1;
  std::uint64_t pre_budget = 1000000;
  int pre_threads = 0;
  cmd_presolve->add_option("--spec", pre_spec)->required();
  cmd_presolve->add_option("--seed", pre_seed, "presolve seed");
  cmd_presolve->add_option("--out", pre_out, "output cache JSON")->required();
  cmd_presolve->add_option("--budget", pre_budget, "path budget");
  cmd_presolve->add_option("--threads", pre_threads, "worker threads (0 = auto)");

  // classify
  auto* cmd_classify = app.add_subcommand("classify", "label real roots by Hessian index");
  std::string cls_spec, cls_data, cls_reg, cls_sols, cls_out;
  cmd_classify->add_option("--spec", cls_spec)->required();
  cmd_classify->add_option("--data", cls_data)->required();
  cmd_classify->add_option("--reg", cls_reg)->required();
  cmd_classify->add_option("--solutions", cls_sols)->required();
  cmd_classify->add_option("--out", cls_out, "output report JSON")->required();

  // montecarlo
  auto* cmd_mc = app.add_subcommand("montecarlo", "sampled landscape statistics");
  std::string mc_spec, mc_csv, mc_cache;
  std::string mc_mode = "ab_initio";
  int mc_samples = 100;
  std::uint64_t mc_seed = 1;
  double mc_delta = 1.0;
  std::uint64_t mc_budget = 1000000;
  int mc_threads = 0;
  cmd_mc->add_option("--spec", mc_spec)->required();
  cmd_mc->add_option("--samples", mc_samples);
  cmd_mc->add_option("--seed", mc_seed, "master seed");
  cmd_mc->add_option("--delta", mc_delta, "Lambda upper bound");
  cmd_mc->add_option("--mode", mc_mode)->check(CLI::IsMember({"ab_initio", "param"}));
  cmd_mc->add_option("--cache", mc_cache, "generic pre-solve JSON (param mode)");
  cmd_mc->add_option("--out-csv", mc_csv, "per-sample CSV output")->required();
  cmd_mc->add_option("--budget", mc_budget, "path budget");
  cmd_mc->add_option("--threads", mc_threads, "worker threads (0 = auto)");

  // sweep
  auto* cmd_sweep = app.add_subcommand("sweep", "paired delta sweep");
  std::string sw_spec, sw_deltas, sw_csv, sw_cache;
  std::string sw_mode = "ab_initio";
  std::string sw_stat = "nr";
  int sw_samples = 100;
  std::uint64_t sw_seed = 1;
  std::uint64_t sw_budget = 1000000;
  int sw_threads = 0;
  cmd_sweep->add_option("--spec", sw_spec)->required();
  cmd_sweep->add_option("--deltas", sw_deltas, "comma-separated ascending list")->required();
  cmd_sweep->add_option("--samples", sw_samples);
  cmd_sweep->add_option("--seed", sw_seed, "master seed");
  cmd_sweep->add_option("--mode", sw_mode)->check(CLI::IsMember({"ab_initio", "param"}));
  cmd_sweep->add_option("--cache", sw_cache, "generic pre-solve JSON (param mode)");
  cmd_sweep->add_option("--stat", sw_stat, "table to emit: nr or gmin")
      ->check(CLI::IsMember({"nr", "gmin"}));
  cmd_sweep->add_option("--out-csv", sw_csv)->required();
  cmd_sweep->add_option("--budget", sw_budget, "path budget");
  cmd_sweep->add_option("--threads", sw_threads, "worker threads (0 = auto)");

  // reproduce
  auto* cmd_repro = app.add_subcommand("reproduce", "run a registered recipe");
  std::string repro_case;
  bool repro_list = false;
  cmd_repro->add_option("--case", repro_case, "registered case id");
  cmd_repro->add_flag("--list", repro_list, "list registered case ids");

  CLI11_PARSE(app, argc, argv);

  if (cmd_bounds->parsed()) {
    const NetworkSpec spec = load_spec(bounds_spec);
    const BoundReport report =
        bound_report(spec.H, spec.nvars(),
                     bounds_bkk ? std::optional<std::uint64_t>(bounds_bkk) : std::nullopt);
    json j = {{"H", report.H},
              {"n", report.n},
              {"cbb", report.cbb.to_string()},
              {"ndm_raw", report.ndm_raw},
              {"ndm_rounded", report.ndm_rounded}};
    if (report.published_bkk) j["published_bkk"] = *report.published_bkk;
    std::cout << j.dump(2) << '\n' << bounds_table({report});
    return 0;
  }

  if (cmd_build->parsed()) {
    const SolveInputs in = load_inputs(build_spec, build_data, build_reg);
    const PolySystem f = build_gradient(in.spec, in.data, in.reg);
    save_json_file(build_out, system_to_json(f));
    std::cout << "wrote " << build_out << " (" << f.nvars << " vars, degree "
              << 2 * in.spec.H + 1 << ")\n";
    return 0;
  }

  if (cmd_solve->parsed()) {
    const SolveInputs in = load_inputs(solve_spec, solve_data, solve_reg);
    const PolySystem f = build_gradient(in.spec, in.data, in.reg);
    TrackOptions opts;
    opts.path_budget = solve_budget;
    opts.threads = solve_threads;
    SolutionSet sols;
    if (solve_mode == "param") {
      if (solve_cache.empty()) throw ConfigError("param mode requires --cache");
      const SolutionSet cache = solutions_from_json(load_json_file(solve_cache));
      if (cache.nvars != in.spec.nvars())
        throw ConfigError("cache nvars does not match spec");
      const PolySystem f_from =
          build_gradient_complex(in.spec, generic_member(in.spec, cache.seed));
      sols = parameter_track(f_from, f, cache, opts, solve_seed);
    } else {
      sols = solve_total_degree(f, opts, solve_seed);
    }
    save_json_file(solve_out, solutions_to_json(sols));
    std::cout << solve_summary(sols).dump(2) << '\n';
    return sols.clean() ? 0 : 1;
  }

  if (cmd_presolve->parsed()) {
    const NetworkSpec spec = load_spec(pre_spec);
    TrackOptions opts;
    opts.path_budget = pre_budget;
    opts.threads = pre_threads;
    const SolutionSet sols = presolve_generic(spec, pre_seed, opts);
    save_json_file(pre_out, solutions_to_json(sols));
    std::cout << solve_summary(sols).dump(2) << '\n';
    return sols.clean() ? 0 : 1;
  }

  if (cmd_classify->parsed()) {
    const SolveInputs in = load_inputs(cls_spec, cls_data, cls_reg);
    const SolutionSet sols = solutions_from_json(load_json_file(cls_sols));
    const ClassifiedSet set = classify(in.spec, in.data, in.reg, sols);
    save_json_file(cls_out, classified_to_json(set));
    std::cout << "n_complex=" << set.n_complex << " n_real=" << set.n_real
              << " max_index=" << set.max_index << '\n';
    return 0;
  }

  if (cmd_mc->parsed()) {
    ExperimentConfig cfg;
    cfg.spec = load_spec(mc_spec);
    cfg.samples = mc_samples;
    cfg.master_seed = mc_seed;
    cfg.delta = mc_delta;
    cfg.solver.path_budget = mc_budget;
    cfg.solver.threads = mc_threads;
    if (mc_mode == "param") {
      cfg.mode = SolveMode::ParameterHomotopy;
      if (mc_cache.empty()) throw ConfigError("param mode requires --cache");
      cfg.cache = std::make_shared<SolutionSet>(
          solutions_from_json(load_json_file(mc_cache)));
    }
    const ExperimentReport rep = run_experiment(cfg);
    std::ofstream csv(mc_csv);
    if (!csv) throw ConfigError("cannot write " + mc_csv);
    csv << experiment_csv(rep);
    json j = {{"samples", cfg.samples},
              {"mean_nr", rep.mean_nr},
              {"mean_nr_nonzero", rep.mean_nr_nonzero},
              {"max_nr", rep.max_nr},
              {"max_index", rep.max_index},
              {"mean_index_ratio", rep.mean_index_ratio},
              {"n_nonglobal", rep.n_nonglobal},
              {"n_flagged", rep.n_flagged}};
    if (rep.mean_gmin) {
      j["min_gmin"] = *rep.min_gmin;
      j["mean_gmin"] = *rep.mean_gmin;
      j["max_gmin"] = *rep.max_gmin;
    }
    std::cout << j.dump(2) << '\n';
    return 0;
  }

  if (cmd_sweep->parsed()) {
    const NetworkSpec spec = load_spec(sw_spec);
    const std::vector<double> deltas = parse_deltas(sw_deltas);
    TrackOptions opts;
    opts.path_budget = sw_budget;
    opts.threads = sw_threads;
    SolveMode mode = SolveMode::AbInitio;
    std::shared_ptr<const SolutionSet> cache;
    if (sw_mode == "param") {
      mode = SolveMode::ParameterHomotopy;
      if (sw_cache.empty()) throw ConfigError("param mode requires --cache");
      cache = std::make_shared<SolutionSet>(
          solutions_from_json(load_json_file(sw_cache)));
    }
    const SweepReport sweep =
        run_sweep(spec, deltas, sw_samples, sw_seed, opts, mode, cache);
    std::ofstream csv(sw_csv);
    if (!csv) throw ConfigError("cannot write " + sw_csv);
    csv << (sw_stat == "gmin" ? global_min_csv(sweep) : trivialization_csv(sweep));
    int flagged = 0;
    for (const auto& rep : sweep.reports) flagged += rep.n_flagged;
    std::cout << "wrote " << sw_csv << " (" << deltas.size() << " deltas, "
              << sw_samples << " samples each, " << flagged << " flagged solves)\n";
    return 0;
  }

  if (cmd_repro->parsed()) {
    if (repro_list) {
      for (const auto& id : reproduce_cases()) std::cout << id << '\n';
      return 0;
    }
    if (repro_case.empty()) throw ConfigError("reproduce requires --case or --list");
    const ReproduceResult res = reproduce(repro_case);
    std::cout << res.report << (res.pass ? "PASS " : "FAIL ") << res.case_id << '\n';
    return res.pass ? 0 : 1;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const dln::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
