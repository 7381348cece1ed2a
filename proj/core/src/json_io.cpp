#include "mvci/json_io.hpp"

#include <cmath>
#include <fstream>

#include "mvci/errors.hpp"
#include "mvci/version.hpp"

namespace mvci {
namespace {

const nlohmann::json& require(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    throw InvalidInputError(std::string("json: missing key '") + key + "'");
  return *it;
}

std::vector<double> number_array(const nlohmann::json& j, const char* key) {
  const auto& arr = require(j, key);
  if (!arr.is_array() || arr.empty())
    throw InvalidInputError(std::string("json: '") + key +
                            "' must be a non-empty array");
  std::vector<double> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_number())
      throw InvalidInputError(std::string("json: '") + key +
                              "' must contain numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

nlohmann::json area_to_json(const ConfidenceArea& area, int k, int l,
                            Algorithm algorithm) {
  nlohmann::json j;
  j["lower"] = area.lower_bounds();
  j["upper"] = area.upper_bounds();
  j["k"] = k;
  j["l"] = l;
  j["algorithm"] = to_string(algorithm);
  j["size"] = area.size();
  return j;
}

AreaRecord area_from_json(const nlohmann::json& j) {
  auto lower = number_array(j, "lower");
  auto upper = number_array(j, "upper");
  if (lower.size() != upper.size())
    throw InvalidInputError("json: lower/upper lengths differ");

  const auto& jk = require(j, "k");
  const auto& jl = require(j, "l");
  if (!jk.is_number_integer() || !jl.is_number_integer())
    throw InvalidInputError("json: k and l must be integers");
  int k = jk.get<int>();
  int l = jl.get<int>();
  if (k < 0 || l < 0) throw InvalidInputError("json: k and l must be >= 0");

  const auto& alg = require(j, "algorithm");
  if (!alg.is_string()) throw InvalidInputError("json: algorithm must be a string");
  algorithm_from_string(alg.get<std::string>());  // known name required

  const auto& size = require(j, "size");
  if (!size.is_number()) throw InvalidInputError("json: size must be a number");

  AreaRecord rec{ConfidenceArea(std::move(lower), std::move(upper)), k, l,
                 alg.get<std::string>()};
  const double actual = rec.area.size();
  if (std::abs(size.get<double>() - actual) >
      1e-9 * std::max(1.0, std::abs(actual)))
    throw InvalidInputError("json: stored size does not match the bounds");
  return rec;
}

nlohmann::json calibration_to_json(const calibrate::Result& r) {
  nlohmann::json j;
  j["solver"] = to_string(r.solver);
  j["l"] = r.l;
  j["target_alpha"] = r.target_alpha;
  j["chosen_k"] = r.chosen_k;
  j["chosen_k_over_n"] = r.chosen_k_over_n;
  j["observed_alpha"] = r.observed_alpha;
  j["attainable"] = r.attainable;
  j["n_train"] = r.n_train;
  j["n_test"] = r.n_test;
  j["trace"]["k"] = r.trace_k;
  j["trace"]["alpha_observed"] = r.trace_alpha;
  return j;
}

nlohmann::json manifest_json(const std::string& command,
                             nlohmann::json parameters, std::uint64_t seed,
                             std::vector<std::string> inputs,
                             std::vector<std::string> outputs,
                             double wall_clock_ms) {
  nlohmann::json j;
  j["command"] = command;
  j["parameters"] = std::move(parameters);
  j["seed"] = seed;
  j["inputs"] = std::move(inputs);
  j["outputs"] = std::move(outputs);
  j["tool_version"] = kVersion;
  j["wall_clock_ms"] = wall_clock_ms;
  return j;
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot open file for writing: " + path.string());
  out << j.dump(2) << '\n';
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open file: " + path.string());
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded())
    throw InvalidInputError("invalid json in file: " + path.string());
  return j;
}

}  // namespace mvci
