#pragma once

#include <vector>

#include "tetherplan/contact.hpp"
#include "tetherplan/geometry.hpp"
#include "tetherplan/prm.hpp"
#include "tetherplan/voxel_map.hpp"

namespace tetherplan {

// Straight-tether reachable space: the inflated map plus the set of free
// cells whose centers have no line of sight to the reel through the
// original obstacles.
struct ReducedMap {
    VoxelMap base; // inflated occupancy the robot plans in
    Point3 reel;
    std::vector<uint8_t> blocked; // parallel to base cells; 1 = tether-blocked

    bool is_blocked(const CellIndex& c) const { return blocked[base.flat(c)] != 0; }

    std::size_t blocked_count() const;
    std::vector<CellIndex> blocked_cells() const; // lexicographic order

    // Base map with tether-blocked cells marked occupied; the space the PRM
    // plans in when the tether must stay straight.
    VoxelMap planning_map() const;
};

// Marks every free cell of `inflated` whose center lacks straight-line
// visibility from the reel through `original`'s obstacles. Tether visibility
// is tested against the original map; the robot itself lives in the inflated
// one.
ReducedMap reduce_reachable_space(const VoxelMap& inflated, const VoxelMap& original,
                                  const Point3& reel);

// Fraction of the base map's free cells that remain tether-reachable.
double reachability_fraction(const ReducedMap& reduced);

// Plans in the reduced space and annotates every waypoint with the reel as
// its contact point (the tether stays straight for the whole flight).
AnnotatedPath plan_raycast(const VoxelMap& inflated, const VoxelMap& original, const Point3& reel,
                           const Point3& start, const Point3& goal, const PrmParams& params);

} // namespace tetherplan
