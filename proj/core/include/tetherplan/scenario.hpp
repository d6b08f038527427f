#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tetherplan/executor.hpp"
#include "tetherplan/geometry.hpp"
#include "tetherplan/prm.hpp"
#include "tetherplan/voxel_map.hpp"

namespace tetherplan {

// One reproducible experiment: a map, a reel, endpoints with optional
// mid-points, the planner to use and its parameters, plus execution noise.
struct ScenarioSpec {
    std::filesystem::path map_path;         // resolved against the scenario file
    std::string map_ref;                    // as written in the scenario file
    std::string planner;                    // "raycast" or "contact"
    Point3 reel;
    Point3 start;
    std::vector<Point3> mid_points;
    Point3 goal;
    double inflate = 0.3;                   // robot radius in meters
    std::optional<double> resolution_override;
    PrmParams prm;
    NoiseConfig noise;
    double r_acc = 0.4;
    double speed = 0.5;  // m/s
    double rate = 120.0; // Hz
};

ScenarioSpec load_scenario(const std::filesystem::path& path);
ScenarioSpec parse_scenario(const std::string& text, const std::string& name,
                            const std::filesystem::path& base_dir);

// Loads the scenario's map (applying any resolution override) and checks the
// scenario's point fields against its bounds.
VoxelMap load_scenario_map(const ScenarioSpec& scenario);

void validate_scenario(const ScenarioSpec& scenario, const VoxelMap& map);

} // namespace tetherplan
