// pybind11 surface over the solver core.  Thin by design: plain lists in,
// plain dicts out, SolutionSet kept opaque so presolve caches round-trip
// through JSON without reassembling points in python.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "dln/bounds.hpp"
#include "dln/classify.hpp"
#include "dln/harness.hpp"
#include "dln/json_io.hpp"
#include "dln/net.hpp"
#include "dln/tracker.hpp"

namespace py = pybind11;
using namespace dln;

namespace {

NetworkSpec make_spec(int H, int dx, int dy, std::vector<int> hidden, int m) {
  NetworkSpec spec{H, dx, dy, std::move(hidden), m};
  spec.validate();
  return spec;
}

DataMatrices make_data(const NetworkSpec& spec, std::vector<double> X,
                       std::vector<double> Y) {
  if (static_cast<int>(X.size()) != spec.dx * spec.m)
    throw std::invalid_argument("X must have dx*m entries (row-major)");
  if (static_cast<int>(Y.size()) != spec.dy * spec.m)
    throw std::invalid_argument("Y must have dy*m entries (row-major)");
  return DataMatrices{std::move(X), std::move(Y)};
}

RegMatrices make_reg(const NetworkSpec& spec,
                     std::vector<std::vector<double>> lambdas) {
  RegMatrices reg{std::move(lambdas)};
  reg.validate(spec);
  return reg;
}

TrackOptions make_opts(std::uint64_t budget, int threads) {
  TrackOptions opts;
  opts.path_budget = budget;
  opts.threads = threads;
  return opts;
}

py::dict classified_dict(const ClassifiedSet& set) {
  py::dict d;
  d["n_complex"] = set.n_complex;
  d["n_real"] = set.n_real;
  d["n_degenerate"] = set.n_degenerate;
  py::dict hist;
  for (const auto& [idx, count] : set.index_histogram)
    hist[py::int_(idx)] = count;
  d["histogram"] = hist;
  d["max_index"] = set.max_index;
  d["global_min_loss"] = set.global_min_loss
                             ? py::object(py::float_(*set.global_min_loss))
                             : py::object(py::none());
  d["has_nonglobal_minima"] = set.has_nonglobal_minima;
  py::list pts;
  for (const auto& p : set.points) {
    py::dict e;
    e["weights"] = p.weights;
    e["loss"] = p.loss;
    e["index"] = p.index;
    e["degenerate"] = p.degenerate;
    e["orbit_id"] = p.orbit_id;
    e["min_abs_eigenvalue"] = p.min_abs_eigenvalue;
    pts.append(e);
  }
  d["points"] = pts;
  return d;
}

}  // namespace

PYBIND11_MODULE(_dlnsolve, mod) {
  mod.doc() = "Stationary points of regularized deep linear networks";

  py::class_<NetworkSpec>(mod, "NetworkSpec")
      .def(py::init(&make_spec), py::arg("H"), py::arg("dx"), py::arg("dy"),
           py::arg("hidden"), py::arg("m"))
      .def_readonly("H", &NetworkSpec::H)
      .def_readonly("dx", &NetworkSpec::dx)
      .def_readonly("dy", &NetworkSpec::dy)
      .def_readonly("hidden", &NetworkSpec::hidden)
      .def_readonly("m", &NetworkSpec::m)
      .def("nvars", &NetworkSpec::nvars)
      .def("__repr__", [](const NetworkSpec& s) {
        std::string r = "NetworkSpec(H=" + std::to_string(s.H) +
                        ", dx=" + std::to_string(s.dx) +
                        ", dy=" + std::to_string(s.dy) + ", hidden=[";
        for (std::size_t i = 0; i < s.hidden.size(); ++i)
          r += (i ? "," : "") + std::to_string(s.hidden[i]);
        return r + "], m=" + std::to_string(s.m) + ")";
      });

  py::class_<SolutionSet>(mod, "SolutionSet")
      .def_readonly("nvars", &SolutionSet::nvars)
      .def_readonly("seed", &SolutionSet::seed)
      .def_readonly("n_success", &SolutionSet::n_success)
      .def_readonly("n_diverged", &SolutionSet::n_diverged)
      .def_readonly("n_failed", &SolutionSet::n_failed)
      .def("clean", &SolutionSet::clean)
      .def("n_paths", &SolutionSet::n_paths)
      .def("__len__", [](const SolutionSet& s) { return s.points.size(); })
      .def("points",
           [](const SolutionSet& s) {
             std::vector<std::vector<Complex>> out;
             out.reserve(s.points.size());
             for (const auto& p : s.points) out.push_back(p.coords);
             return out;
           })
      .def("to_json", [](const SolutionSet& s) {
        return solutions_to_json(s).dump();
      })
      .def_static("from_json", [](const std::string& text) {
        return solutions_from_json(nlohmann::json::parse(text));
      });

  mod.def("cbb", [](int H, int n) { return cbb(H, n).to_string(); },
          py::arg("H"), py::arg("n"),
          "Classical Bezout bound 2^n (H+1)^n as a decimal string");
  mod.def("ndm", &dedieu_malajovich, py::arg("H"), py::arg("n"));
  mod.def("ndm_rounded", &dedieu_malajovich_rounded, py::arg("H"),
          py::arg("n"));

  mod.def(
      "sample_data",
      [](const NetworkSpec& spec, std::uint64_t seed) {
        DataMatrices d = sample_data(spec, seed);
        return py::make_tuple(d.X, d.Y);
      },
      py::arg("spec"), py::arg("seed"));
  mod.def(
      "sample_lambda",
      [](const NetworkSpec& spec, std::uint64_t seed, double delta) {
        return sample_lambda(spec, seed, delta).lambdas;
      },
      py::arg("spec"), py::arg("seed"), py::arg("delta"));

  mod.def(
      "gradient_strings",
      [](const NetworkSpec& spec, std::vector<double> X, std::vector<double> Y,
         std::vector<std::vector<double>> lambdas) {
        DataMatrices data = make_data(spec, std::move(X), std::move(Y));
        RegMatrices reg = make_reg(spec, std::move(lambdas));
        PolySystem f = build_gradient(spec, data, reg);
        std::vector<std::string> out;
        out.reserve(f.polys.size());
        for (const auto& p : f.polys) out.push_back(p.to_string());
        return out;
      },
      py::arg("spec"), py::arg("X"), py::arg("Y"), py::arg("lambdas"));

  mod.def(
      "solve",
      [](const NetworkSpec& spec, std::vector<double> X, std::vector<double> Y,
         std::vector<std::vector<double>> lambdas, std::uint64_t seed,
         std::uint64_t budget, int threads) {
        DataMatrices data = make_data(spec, std::move(X), std::move(Y));
        RegMatrices reg = make_reg(spec, std::move(lambdas));
        PolySystem f = build_gradient(spec, data, reg);
        py::gil_scoped_release release;
        return solve_total_degree(f, make_opts(budget, threads), seed);
      },
      py::arg("spec"), py::arg("X"), py::arg("Y"), py::arg("lambdas"),
      py::arg("seed") = 1, py::arg("budget") = std::uint64_t{1000000},
      py::arg("threads") = 0);

  mod.def(
      "presolve",
      [](const NetworkSpec& spec, std::uint64_t seed, std::uint64_t budget,
         int threads) {
        py::gil_scoped_release release;
        return presolve_generic(spec, seed, make_opts(budget, threads));
      },
      py::arg("spec"), py::arg("seed") = 1,
      py::arg("budget") = std::uint64_t{1000000}, py::arg("threads") = 0,
      "Ab-initio solve of a generic complex family member; the result is "
      "the cache for solve_parameter");

  mod.def(
      "solve_parameter",
      [](const NetworkSpec& spec, std::vector<double> X, std::vector<double> Y,
         std::vector<std::vector<double>> lambdas, const SolutionSet& cache,
         std::uint64_t seed, int threads) {
        DataMatrices data = make_data(spec, std::move(X), std::move(Y));
        RegMatrices reg = make_reg(spec, std::move(lambdas));
        PolySystem f_to = build_gradient(spec, data, reg);
        ComplexFamilyMember fam = generic_member(spec, cache.seed);
        PolySystem f_from = build_gradient_complex(spec, fam);
        TrackOptions opts = make_opts(std::uint64_t{1} << 62, threads);
        py::gil_scoped_release release;
        return parameter_track(f_from, f_to, cache, opts, seed);
      },
      py::arg("spec"), py::arg("X"), py::arg("Y"), py::arg("lambdas"),
      py::arg("cache"), py::arg("seed") = 1, py::arg("threads") = 0);

  mod.def(
      "classify",
      [](const NetworkSpec& spec, std::vector<double> X, std::vector<double> Y,
         std::vector<std::vector<double>> lambdas, const SolutionSet& sols) {
        DataMatrices data = make_data(spec, std::move(X), std::move(Y));
        RegMatrices reg = make_reg(spec, std::move(lambdas));
        return classified_dict(classify(spec, data, reg, sols));
      },
      py::arg("spec"), py::arg("X"), py::arg("Y"), py::arg("lambdas"),
      py::arg("solutions"));

  mod.def("reproduce_cases", &reproduce_cases);
  mod.def(
      "reproduce",
      [](const std::string& case_id) {
        ReproduceResult r = reproduce(case_id);
        return py::make_tuple(r.pass, r.report);
      },
      py::arg("case_id"));
}
