#pragma once

#include <filesystem>
#include <string>

#include "tetherplan/contact.hpp"
#include "tetherplan/executor.hpp"

namespace tetherplan {

// Shortest decimal representation that round-trips the exact double value;
// the canonical number format of every text artifact we write.
std::string format_double(double value);

// 6-D plan file: '#'-prefixed header lines (format tag, map reference,
// planner id, tether origin), then one "wx wy wz cx cy cz" record per
// waypoint. write(read(file)) reproduces the file byte for byte.
std::string plan_to_string(const AnnotatedPath& plan);
AnnotatedPath parse_plan(const std::string& text, const std::string& name);

void save_plan(const AnnotatedPath& plan, const std::filesystem::path& path);
AnnotatedPath load_plan(const std::filesystem::path& path);

// Trajectory file: "t x y z active_contacts" per line plus outcome and map
// headers. The map reference lets render reject trajectories produced
// against a different map than the plan.
std::string trajectory_to_string(const Trajectory& traj, const std::string& map_ref = "");
Trajectory parse_trajectory(const std::string& text, const std::string& name,
                            std::string* map_ref = nullptr);

void save_trajectory(const Trajectory& traj, const std::filesystem::path& path,
                     const std::string& map_ref = "");
Trajectory load_trajectory(const std::filesystem::path& path, std::string* map_ref = nullptr);

} // namespace tetherplan
