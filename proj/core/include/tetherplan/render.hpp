#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tetherplan/contact.hpp"
#include "tetherplan/executor.hpp"
#include "tetherplan/raycast.hpp"
#include "tetherplan/voxel_map.hpp"

namespace tetherplan {

// Three orthographic projections (xy, yz, xz) of the scene as one SVG
// document: original obstacles, inflated cells, tether-blocked cells when a
// reduction is given, the planned path with its contact points, and any
// executed trajectories.
std::string render_svg(const VoxelMap& original, const VoxelMap& inflated,
                       const ReducedMap* reduced, const AnnotatedPath& plan,
                       const std::vector<Trajectory>& trajectories);

} // namespace tetherplan
