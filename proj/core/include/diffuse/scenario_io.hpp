#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "diffuse/simulator.hpp"
#include "diffuse/uncertain_agents.hpp"

namespace diffuse {

// Both throw ConfigError with the offending field for malformed input.
ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

// Input of `construct-pti`: {"vertices": [[p, q], ...]} plus optional
// "offsets" (per edge), "offset" (uniform) and "g" (vertex list).
struct PolygonRequest {
  ConvexPolygon polygon = ConvexPolygon::point({});
  ConstructionChoice choice;
};
PolygonRequest parse_polygon_request(const std::string& json_text);
PolygonRequest load_polygon_request(const std::filesystem::path& path);

std::string construction_to_json(const ConvexPolygon& input, const PtiConstruction& c);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace diffuse
