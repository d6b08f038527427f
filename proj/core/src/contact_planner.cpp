#include "tetherplan/contact_planner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>

#include "tetherplan/errors.hpp"

namespace tetherplan {

namespace {

double cross2(double ux, double uy, double vx, double vy) {
    return ux * vy - uy * vx;
}

// Strictly inside the 2-D triangle; boundary points and degenerate triangles
// do not count.
bool strictly_inside_2d(double px, double py, double ax, double ay, double bx, double by,
                        double cx, double cy) {
    const double d1 = cross2(bx - ax, by - ay, px - ax, py - ay);
    const double d2 = cross2(cx - bx, cy - by, px - bx, py - by);
    const double d3 = cross2(ax - cx, ay - cy, px - cx, py - cy);
    return (d1 > 0 && d2 > 0 && d3 > 0) || (d1 < 0 && d2 < 0 && d3 < 0);
}

// Triangle vs closed axis-aligned box, separating-axis test. Touching
// counts as overlap; degenerate triangles reduce to segment/point tests.
bool triangle_box_overlap(const Point3& boxmin, const Point3& boxmax, const Point3& t0,
                          const Point3& t1, const Point3& t2) {
    const Point3 c = (boxmin + boxmax) * 0.5;
    const Point3 h = (boxmax - boxmin) * 0.5;
    const Point3 v0 = t0 - c;
    const Point3 v1 = t1 - c;
    const Point3 v2 = t2 - c;

    auto separated = [&](const Point3& axis) {
        const double r =
            h.x * std::abs(axis.x) + h.y * std::abs(axis.y) + h.z * std::abs(axis.z);
        const double p0 = dot(v0, axis);
        const double p1 = dot(v1, axis);
        const double p2 = dot(v2, axis);
        return std::min({p0, p1, p2}) > r || std::max({p0, p1, p2}) < -r;
    };

    if (separated({1, 0, 0}) || separated({0, 1, 0}) || separated({0, 0, 1})) return false;

    const std::array<Point3, 3> edges = {v1 - v0, v2 - v1, v0 - v2};
    const std::array<Point3, 3> box_axes = {Point3{1, 0, 0}, Point3{0, 1, 0}, Point3{0, 0, 1}};
    for (const Point3& e : edges) {
        for (const Point3& a : box_axes) {
            const Point3 axis = cross(e, a);
            if (axis.norm() < 1e-12 * e.norm()) continue;
            if (separated(axis)) return false;
        }
    }
    const Point3 normal = cross(edges[0], edges[1]);
    if (normal.norm() >= 1e-12 && separated(normal)) return false;
    return true;
}

struct Candidate {
    double total;
    Point3 position;
};

void collect_cell_candidates(const VoxelMap& map, const CellIndex& cell, const Point3& from,
                             const Point3& to, std::vector<Candidate>& out) {
    const double eps = map.resolution() / 100.0;
    const Point3 lo = map.cell_min_corner(cell);
    const Point3 center = map.center(cell);
    for (int ci = 0; ci <= 1; ++ci)
        for (int cj = 0; cj <= 1; ++cj)
            for (int ck = 0; ck <= 1; ++ck) {
                const Point3 corner{lo.x + ci * map.resolution(), lo.y + cj * map.resolution(),
                                    lo.z + ck * map.resolution()};
                const Point3 d = corner - center;
                const Point3 cp = corner + d * (eps / d.norm());
                out.push_back({distance(from, cp) + distance(cp, to), cp});
            }
}

} // namespace

bool obstacle_confined(const Point3& a, const Point3& b, const Point3& c,
                       const VoxelMap& original) {
    if (original.occupied_count() == 0) return false;
    const auto& d = original.dims();
    for (int k = 0; k < d.nz; ++k)
        for (int j = 0; j < d.ny; ++j)
            for (int i = 0; i < d.nx; ++i) {
                const CellIndex cell{i, j, k};
                if (!original.occupied(cell)) continue;
                const Point3 m = original.center(cell);
                if (!strictly_inside_2d(m.x, m.y, a.x, a.y, b.x, b.y, c.x, c.y)) continue;
                if (!strictly_inside_2d(m.y, m.z, a.y, a.z, b.y, b.z, c.y, c.z)) continue;
                if (!strictly_inside_2d(m.x, m.z, a.x, a.z, b.x, b.z, c.x, c.z)) continue;
                return true;
            }
    return false;
}

Point3 find_contact_point(const Point3& stack_top, const Point3& wp_visible,
                          const Point3& wp_blocked, const VoxelMap& original) {
    if (original.segment_collides(stack_top, wp_visible))
        throw ValidationError("find_contact_point: wp_visible is not visible from the stack top");
    if (!original.segment_collides(stack_top, wp_blocked))
        throw ValidationError("find_contact_point: wp_blocked is already visible from the stack "
                              "top");

    auto try_pool = [&](const std::vector<CellIndex>& cells) -> std::optional<Point3> {
        std::vector<Candidate> candidates;
        candidates.reserve(cells.size() * 8);
        for (const CellIndex& cell : cells)
            collect_cell_candidates(original, cell, stack_top, wp_blocked, candidates);
        std::sort(candidates.begin(), candidates.end(), [](const Candidate& l, const Candidate& r) {
            if (l.total != r.total) return l.total < r.total;
            if (l.position.x != r.position.x) return l.position.x < r.position.x;
            if (l.position.y != r.position.y) return l.position.y < r.position.y;
            return l.position.z < r.position.z;
        });
        for (const Candidate& cand : candidates) {
            if (original.segment_collides(stack_top, cand.position)) continue;
            if (original.segment_collides(cand.position, wp_blocked)) continue;
            return cand.position;
        }
        return std::nullopt;
    };

    // Occupied cells swept by the triangle between the last visible and the
    // first blocked tether segment.
    std::vector<CellIndex> swept;
    const auto& dims = original.dims();
    for (int k = 0; k < dims.nz; ++k)
        for (int j = 0; j < dims.ny; ++j)
            for (int i = 0; i < dims.nx; ++i) {
                const CellIndex cell{i, j, k};
                if (!original.occupied(cell)) continue;
                const Point3 lo = original.cell_min_corner(cell);
                const Point3 hi{lo.x + original.resolution(), lo.y + original.resolution(),
                                lo.z + original.resolution()};
                if (triangle_box_overlap(lo, hi, stack_top, wp_visible, wp_blocked))
                    swept.push_back(cell);
            }
    if (auto cp = try_pool(swept)) return *cp;

    // Widen to every occupied cell before giving up; the swept set can miss
    // the wrap corner when the path skims an obstacle at an angle.
    if (auto cp = try_pool(original.occupied_cells())) return *cp;

    throw ContactUnresolvableError(
        "find_contact_point: no obstacle corner restores visibility; densify the path and retry");
}

ContactPlan plan_contacts(const VoxelMap& original, const VoxelMap& inflated, const Path& path,
                          const Point3& tether_origin) {
    if (!original.same_frame(inflated))
        throw ValidationError("plan_contacts: maps describe different grids");
    if (path.waypoints.empty()) throw ValidationError("plan_contacts: path is empty");
    if (!path_valid(path, inflated))
        throw ValidationError("plan_contacts: path is not collision-free in the inflated map");
    if (!original.is_free(tether_origin))
        throw ValidationError("plan_contacts: tether origin is occupied or out of bounds");

    const int n = static_cast<int>(path.waypoints.size());
    std::vector<Point3> annotation(n, tether_origin);
    ContactStack stack(tether_origin);
    ContactPlan plan;

    for (int t = 0; t < n; ++t) {
        const Point3& wp = path.waypoints[t];

        bool relax = false;
        if (stack.depth() > 1) {
            const Point3& last_contact = stack.below_top();
            if (!original.segment_collides(last_contact, wp)) {
                relax = !obstacle_confined(stack.top(), last_contact, wp, original);
            }
        }

        if (relax) {
            const Point3 popped = stack.pop();
            plan.events.push_back({t, ContactEvent::Kind::pop, popped});
            for (int u = t; u < n; ++u) annotation[u] = stack.top();
        } else if (original.segment_collides(stack.top(), wp)) {
            const Point3& wp_visible = t > 0 ? path.waypoints[t - 1] : stack.top();
            const Point3 cp = find_contact_point(stack.top(), wp_visible, wp, original);
            stack.push(cp);
            plan.events.push_back({t, ContactEvent::Kind::push, cp});
            for (int u = t; u < n; ++u) annotation[u] = cp;
            plan.max_stack_depth = std::max(plan.max_stack_depth, stack.depth());
            if (original.segment_collides(cp, wp))
                throw Error("plan_contacts: pushed contact does not restore line of sight");
        }
    }

    plan.max_stack_depth = std::max(plan.max_stack_depth, stack.depth());
    plan.path.tether_origin = tether_origin;
    plan.path.planner = "contact";
    plan.path.points.reserve(n);
    for (int t = 0; t < n; ++t) plan.path.points.push_back({path.waypoints[t], annotation[t]});
    return plan;
}

} // namespace tetherplan
