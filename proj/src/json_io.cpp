#include "dln/json_io.hpp"

#include <cstdio>
#include <fstream>

#include "dln/errors.hpp"
#include "dln/harness.hpp"

namespace dln {

using nlohmann::json;

namespace {

// Flat row-major array, also accepting a nested array-of-rows.
std::vector<double> read_matrix(const json& j, const char* name, int rows, int cols) {
  if (!j.is_array()) throw ConfigError(std::string(name) + " must be an array");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(rows) * cols);
  if (!j.empty() && j.front().is_array()) {
    for (const auto& row : j)
      for (const auto& v : row) out.push_back(v.get<double>());
  } else {
    for (const auto& v : j) out.push_back(v.get<double>());
  }
  if (out.size() != static_cast<std::size_t>(rows) * cols)
    throw ConfigError(std::string(name) + " has " + std::to_string(out.size()) +
                      " entries, expected " + std::to_string(rows) + "x" +
                      std::to_string(cols));
  return out;
}

}  // namespace

json system_to_json(const PolySystem& f) {
  json polys = json::array();
  for (const auto& p : f.polys) {
    json terms = json::array();
    for (const auto& t : p.terms()) {
      json exps = json::array();
      for (const auto& [v, e] : t.mono.exps) exps.push_back({v, e});
      terms.push_back({{"re", t.coeff.real()}, {"im", t.coeff.imag()}, {"exps", exps}});
    }
    polys.push_back(terms);
  }
  return {{"nvars", f.nvars}, {"polys", polys}};
}

PolySystem system_from_json(const json& j) {
  try {
    PolySystem f;
    f.nvars = j.at("nvars").get<int>();
    for (const auto& jt : j.at("polys")) {
      std::vector<Term> terms;
      for (const auto& t : jt) {
        Term term;
        term.coeff = Complex(t.at("re").get<double>(), t.at("im").get<double>());
        for (const auto& pair : t.at("exps"))
          term.mono.exps.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
        terms.push_back(std::move(term));
      }
      f.polys.push_back(Polynomial::from_terms(f.nvars, std::move(terms)));
    }
    return f;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad system JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bad system JSON: ") + e.what());
  }
}

json spec_to_json(const NetworkSpec& spec) {
  return {{"H", spec.H}, {"dx", spec.dx}, {"dy", spec.dy},
          {"hidden", spec.hidden}, {"m", spec.m}};
}

NetworkSpec spec_from_json(const json& j) {
  try {
    NetworkSpec spec;
    spec.H = j.at("H").get<int>();
    spec.dx = j.at("dx").get<int>();
    spec.dy = j.at("dy").get<int>();
    spec.hidden = j.at("hidden").get<std::vector<int>>();
    spec.m = j.at("m").get<int>();
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad spec JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bad spec JSON: ") + e.what());
  }
}

json data_to_json(const DataMatrices& data) {
  return {{"X", data.X}, {"Y", data.Y}};
}

DataMatrices data_from_json(const json& j, const NetworkSpec& spec) {
  if (!j.contains("X") || !j.contains("Y"))
    throw ConfigError("data JSON requires keys X and Y");
  DataMatrices data;
  data.X = read_matrix(j.at("X"), "X", spec.dx, spec.m);
  data.Y = read_matrix(j.at("Y"), "Y", spec.dy, spec.m);
  return data;
}

json reg_to_json(const RegMatrices& reg) {
  return {{"lambdas", reg.lambdas}};
}

RegMatrices reg_from_json(const json& j, const NetworkSpec& spec) {
  try {
    if (j.contains("lambdas")) {
      const auto& layers = j.at("lambdas");
      if (!layers.is_array() || static_cast<int>(layers.size()) != spec.H + 1)
        throw ConfigError("reg JSON: lambdas must list one array per layer (" +
                          std::to_string(spec.H + 1) + " layers)");
      RegMatrices reg;
      for (int i = 1; i <= spec.H + 1; ++i)
        reg.lambdas.push_back(read_matrix(layers.at(i - 1), "lambdas", spec.layer_rows(i),
                                          spec.layer_cols(i)));
      reg.validate(spec);
      return reg;
    }
    if (j.contains("uniform"))
      return RegMatrices::uniform(spec, j.at("uniform").get<double>());
    if (j.contains("range")) {
      const double delta = j.at("range").get<double>();
      if (delta < 0.0) throw ConfigError("reg JSON: range must be >= 0");
      return sample_lambda(spec, j.at("seed").get<std::uint64_t>(), delta);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad reg JSON: ") + e.what());
  }
  throw ConfigError("reg JSON requires one of: lambdas, uniform, range+seed");
}

json solutions_to_json(const SolutionSet& sols) {
  json points = json::array();
  for (const auto& p : sols.points) {
    json coords = json::array();
    for (const auto& c : p.coords) coords.push_back({{"re", c.real()}, {"im", c.imag()}});
    points.push_back({{"coords", coords},
                      {"residual", p.residual},
                      {"min_pivot", p.min_pivot}});
  }
  return {{"nvars", sols.nvars},
          {"gamma", {{"re", sols.gamma.real()}, {"im", sols.gamma.imag()}}},
          {"seed", sols.seed},
          {"counts",
           {{"success", sols.n_success},
            {"diverged", sols.n_diverged},
            {"failed", sols.n_failed}}},
          {"points", points}};
}

SolutionSet solutions_from_json(const json& j) {
  try {
    SolutionSet sols;
    sols.nvars = j.at("nvars").get<int>();
    sols.gamma = Complex(j.at("gamma").at("re").get<double>(),
                         j.at("gamma").at("im").get<double>());
    sols.seed = j.at("seed").get<std::uint64_t>();
    sols.n_success = j.at("counts").at("success").get<std::uint64_t>();
    sols.n_diverged = j.at("counts").at("diverged").get<std::uint64_t>();
    sols.n_failed = j.at("counts").at("failed").get<std::uint64_t>();
    for (const auto& jp : j.at("points")) {
      SolutionPoint p;
      for (const auto& c : jp.at("coords"))
        p.coords.emplace_back(c.at("re").get<double>(), c.at("im").get<double>());
      if (static_cast<int>(p.coords.size()) != sols.nvars)
        throw ConfigError("solution point dimension mismatch");
      p.residual = jp.at("residual").get<double>();
      p.min_pivot = jp.at("min_pivot").get<double>();
      sols.points.push_back(std::move(p));
    }
    return sols;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad solution-set JSON: ") + e.what());
  }
}

json classified_to_json(const ClassifiedSet& set) {
  json histogram = json::object();
  for (const auto& [idx, count] : set.index_histogram)
    histogram[std::to_string(idx)] = count;
  json points = json::array();
  for (const auto& pt : set.points) {
    points.push_back({{"weights", pt.weights},
                      {"loss", pt.loss},
                      {"grad_residual", pt.grad_residual},
                      {"index", pt.index},
                      {"min_abs_eigenvalue", pt.min_abs_eigenvalue},
                      {"degenerate", pt.degenerate},
                      {"orbit_id", pt.orbit_id},
                      {"eigenvalues", pt.eigenvalues}});
  }
  json out = {{"n_complex", set.n_complex},
              {"n_real", set.n_real},
              {"n_degenerate", set.n_degenerate},
              {"histogram", histogram},
              {"max_index", set.max_index},
              {"has_nonglobal_minima", set.has_nonglobal_minima},
              {"points", points}};
  if (set.global_min_loss)
    out["global_min_loss"] = *set.global_min_loss;
  else
    out["global_min_loss"] = nullptr;
  return out;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse " + path + ": " + e.what());
  }
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw ConfigError("write failed: " + path);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace dln
