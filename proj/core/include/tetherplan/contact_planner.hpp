#pragma once

#include <vector>

#include "tetherplan/contact.hpp"
#include "tetherplan/geometry.hpp"
#include "tetherplan/prm.hpp"
#include "tetherplan/voxel_map.hpp"

namespace tetherplan {

struct ContactEvent {
    enum class Kind { push, pop };
    int wp_index;
    Kind kind;
    Point3 contact; // the pushed or popped contact point
};

struct ContactPlan {
    AnnotatedPath path;
    std::vector<ContactEvent> events;
    std::size_t max_stack_depth = 1; // includes the tether origin
};

// True iff some occupied cell center of the original map lies strictly
// inside the triangle (a, b, c) in all three axis-plane projections
// (xy, yz, xz). A projection with zero area confines nothing.
bool obstacle_confined(const Point3& a, const Point3& b, const Point3& c,
                       const VoxelMap& original);

// Places a new contact point when the tether segment from the current stack
// top to wp_blocked collides. Candidates are the corner vertices of occupied
// cells swept by the triangle (stack_top, wp_visible, wp_blocked), each
// nudged outward along the corner's diagonal by resolution/100 so the tether
// grazes instead of penetrating. Returns the candidate minimizing
// |stack_top - cp| + |cp - wp_blocked| among those restoring visibility in
// both directions.
Point3 find_contact_point(const Point3& stack_top, const Point3& wp_visible,
                          const Point3& wp_blocked, const VoxelMap& original);

// Contact point(s) planning and relaxation over a smoothed, densified path:
// walks the waypoints once, pushing a contact when line of sight from the
// current contact breaks, and popping when sight to the previous contact is
// regained and no obstacle is confined in the wrap triangle. Tether-vs-map
// collision tests run against the original map; the path itself must be
// valid in the inflated map.
ContactPlan plan_contacts(const VoxelMap& original, const VoxelMap& inflated, const Path& path,
                          const Point3& tether_origin);

} // namespace tetherplan
