#pragma once

#include <string>
#include <vector>

#include "tetherplan/errors.hpp"
#include "tetherplan/geometry.hpp"

namespace tetherplan {

// LIFO of tether contact points. The bottom element is the tether origin
// (reel) and can never be popped; pushes and pops act on the top only.
class ContactStack {
public:
    explicit ContactStack(const Point3& tether_origin) : points_{tether_origin} {}

    const Point3& origin() const { return points_.front(); }
    const Point3& top() const { return points_.back(); }

    // Second element from the top; the contact the tether would fall back to.
    const Point3& below_top() const {
        if (points_.size() < 2)
            throw ValidationError("ContactStack: below_top needs depth >= 2");
        return points_[points_.size() - 2];
    }

    std::size_t depth() const { return points_.size(); }

    void push(const Point3& cp) { points_.push_back(cp); }

    Point3 pop() {
        if (points_.size() < 2)
            throw ValidationError("ContactStack: the tether origin cannot be popped");
        Point3 top = points_.back();
        points_.pop_back();
        return top;
    }

    // Bottom-to-top view of the stacked contact points.
    const std::vector<Point3>& points() const { return points_; }

private:
    std::vector<Point3> points_;
};

struct AnnotatedWaypoint {
    Point3 waypoint;
    Point3 contact;
};

// The 6-D motion plan: every waypoint paired with the contact point the
// tether hangs from while the robot holds that waypoint. A straight tether
// is expressed as contact == tether_origin. The executor accepts plans from
// either planner without any mode switch.
struct AnnotatedPath {
    Point3 tether_origin;
    std::string planner; // "raycast" or "contact"
    std::string map_ref; // map file reference carried in the plan header
    std::vector<AnnotatedWaypoint> points;
};

} // namespace tetherplan
