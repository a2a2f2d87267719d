#pragma once

// Frozen on-disk formats.  Every schema here is an interchange contract for
// the CLI; loaders validate and throw ConfigError with a usable message.
//
//   system:    {"nvars": n, "polys": [[{"re","im","exps":[[var,exp],..]},..],..]}
//   spec:      {"H","dx","dy","hidden","m"}
//   data:      {"X": row-major array, "Y": row-major array}
//   reg:       {"lambdas": [row-major per layer]} | {"uniform": v}
//              | {"range": delta, "seed": s}   (seed feeds sample_lambda)
//   solutions: {"nvars","gamma":{"re","im"},"seed",
//               "counts":{"success","diverged","failed"},
//               "points":[{"coords":[{"re","im"},..],"residual","min_pivot"},..]}
//   classify report: {"n_complex","n_real","histogram","global_min_loss",
//                     "has_nonglobal_minima","points", ...}

#include <string>

#include "json.hpp"

#include "dln/classify.hpp"
#include "dln/net.hpp"
#include "dln/poly.hpp"
#include "dln/tracker.hpp"

namespace dln {

nlohmann::json system_to_json(const PolySystem& f);
PolySystem system_from_json(const nlohmann::json& j);

nlohmann::json spec_to_json(const NetworkSpec& spec);
NetworkSpec spec_from_json(const nlohmann::json& j);

nlohmann::json data_to_json(const DataMatrices& data);
DataMatrices data_from_json(const nlohmann::json& j, const NetworkSpec& spec);

nlohmann::json reg_to_json(const RegMatrices& reg);
RegMatrices reg_from_json(const nlohmann::json& j, const NetworkSpec& spec);

nlohmann::json solutions_to_json(const SolutionSet& sols);
SolutionSet solutions_from_json(const nlohmann::json& j);

nlohmann::json classified_to_json(const ClassifiedSet& set);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

// Shortest-round-trip double formatting shared by the CSV emitters.
std::string format_double(double v);

}  // namespace dln
