#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mvci/algorithms.hpp"
#include "mvci/calibrate.hpp"
#include "mvci/confidence_area.hpp"

namespace mvci {

// {"lower": [...], "upper": [...], "k", "l", "algorithm", "size"}
nlohmann::json area_to_json(const ConfidenceArea& area, int k, int l,
                            Algorithm algorithm);

struct AreaRecord {
  ConfidenceArea area;
  int k = 0;
  int l = 0;
  std::string algorithm;
};

// Validates shape, bound ordering, and the stored size (1e-9 relative).
AreaRecord area_from_json(const nlohmann::json& j);

nlohmann::json calibration_to_json(const calibrate::Result& r);

// {"command", "parameters", "seed", "inputs", "outputs", "tool_version",
//  "wall_clock_ms"}
nlohmann::json manifest_json(const std::string& command,
                             nlohmann::json parameters, std::uint64_t seed,
                             std::vector<std::string> inputs,
                             std::vector<std::string> outputs,
                             double wall_clock_ms);

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace mvci
