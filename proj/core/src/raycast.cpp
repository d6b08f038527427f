#include "tetherplan/raycast.hpp"

#include <algorithm>
#include <string>

#include "tetherplan/errors.hpp"

namespace tetherplan {

std::size_t ReducedMap::blocked_count() const {
    std::size_t n = 0;
    for (uint8_t b : blocked) n += b;
    return n;
}

std::vector<CellIndex> ReducedMap::blocked_cells() const {
    std::vector<CellIndex> out;
    out.reserve(blocked_count());
    const auto& d = base.dims();
    for (int k = 0; k < d.nz; ++k)
        for (int j = 0; j < d.ny; ++j)
            for (int i = 0; i < d.nx; ++i)
                if (is_blocked({i, j, k})) out.push_back({i, j, k});
    std::sort(out.begin(), out.end());
    return out;
}

VoxelMap ReducedMap::planning_map() const {
    VoxelMap out = base;
    const auto& d = base.dims();
    for (int k = 0; k < d.nz; ++k)
        for (int j = 0; j < d.ny; ++j)
            for (int i = 0; i < d.nx; ++i)
                if (is_blocked({i, j, k})) out.set_occupied({i, j, k});
    return out;
}

ReducedMap reduce_reachable_space(const VoxelMap& inflated, const VoxelMap& original,
                                  const Point3& reel) {
    if (!inflated.same_frame(original))
        throw ValidationError("reduce_reachable_space: maps describe different grids");
    if (!inflated.is_free(reel))
        throw InvalidReelError("reduce_reachable_space: reel is occupied or out of bounds");

    // TODO: for much larger grids, casting rays outward from each obstacle
    // cell would replace this per-cell visibility scan with work proportional
    // to the obstacle count.
    ReducedMap out{inflated, reel, std::vector<uint8_t>(inflated.cell_count(), 0)};
    const auto& d = inflated.dims();
    for (int k = 0; k < d.nz; ++k)
        for (int j = 0; j < d.ny; ++j)
            for (int i = 0; i < d.nx; ++i) {
                const CellIndex c{i, j, k};
                if (inflated.occupied(c)) continue;
                if (original.segment_collides(reel, inflated.center(c)))
                    out.blocked[inflated.flat(c)] = 1;
            }
    return out;
}

double reachability_fraction(const ReducedMap& reduced) {
    const std::size_t free_cells = reduced.base.free_count();
    if (free_cells == 0)
        throw UndefinedFractionError("reachability_fraction: map has no free cells");
    return static_cast<double>(free_cells - reduced.blocked_count()) /
           static_cast<double>(free_cells);
}

AnnotatedPath plan_raycast(const VoxelMap& inflated, const VoxelMap& original, const Point3& reel,
                           const Point3& start, const Point3& goal, const PrmParams& params) {
    const ReducedMap reduced = reduce_reachable_space(inflated, original, reel);

    auto check_endpoint = [&](const Point3& p, const char* what) {
        if (!inflated.is_free(p))
            throw InvalidEndpointError(std::string("plan_raycast: ") + what +
                                       " is occupied or out of bounds");
        if (reduced.is_blocked(*inflated.cell_at(p)))
            throw TetherBlockedEndpointError(std::string("plan_raycast: ") + what +
                                             " lies in tether-blocked space");
    };
    check_endpoint(start, "start");
    check_endpoint(goal, "goal");

    const VoxelMap planning = reduced.planning_map();
    const Roadmap rm = build_prm(planning, params);
    const Path raw = query_path(rm, planning, start, goal);
    const Path smoothed = smooth_path(raw, planning, params.seed);

    AnnotatedPath plan;
    plan.tether_origin = reel;
    plan.planner = "raycast";
    plan.points.reserve(smoothed.waypoints.size());
    for (const Point3& wp : smoothed.waypoints) plan.points.push_back({wp, reel});
    return plan;
}

} // namespace tetherplan
