#include "tetherplan/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "tetherplan/errors.hpp"

namespace tetherplan {

namespace {

Path plan_legs(const Roadmap& rm, const VoxelMap& planning_map,
               const std::vector<Point3>& stops, uint64_t seed) {
    Path full;
    for (std::size_t leg = 1; leg < stops.size(); ++leg) {
        const Path raw = query_path(rm, planning_map, stops[leg - 1], stops[leg]);
        const Path smoothed = smooth_path(raw, planning_map, seed + leg - 1);
        const std::size_t skip = full.waypoints.empty() ? 0 : 1; // shared junction
        full.waypoints.insert(full.waypoints.end(), smoothed.waypoints.begin() + skip,
                              smoothed.waypoints.end());
    }
    if (full.waypoints.empty()) full.waypoints.push_back(stops.front());
    return full;
}

} // namespace

PlanOutcome plan_scenario(const ScenarioSpec& scenario, const VoxelMap& original) {
    const VoxelMap inflated = original.inflate(scenario.inflate);

    std::vector<Point3> stops;
    stops.push_back(scenario.start);
    stops.insert(stops.end(), scenario.mid_points.begin(), scenario.mid_points.end());
    stops.push_back(scenario.goal);

    PlanOutcome out;
    if (scenario.planner == "raycast") {
        const ReducedMap reduced = reduce_reachable_space(inflated, original, scenario.reel);
        for (std::size_t s = 0; s < stops.size(); ++s) {
            const std::string what = s == 0 ? "start"
                                   : s + 1 == stops.size()
                                       ? "goal"
                                       : "mid[" + std::to_string(s - 1) + "]";
            if (!inflated.is_free(stops[s]))
                throw InvalidEndpointError("plan: " + what + " is occupied or out of bounds");
            if (reduced.is_blocked(*inflated.cell_at(stops[s])))
                throw TetherBlockedEndpointError("plan: " + what +
                                                 " lies in tether-blocked space");
        }
        const VoxelMap planning = reduced.planning_map();
        const Roadmap rm = build_prm(planning, scenario.prm);
        const Path path = plan_legs(rm, planning, stops, scenario.prm.seed);
        out.plan.tether_origin = scenario.reel;
        out.plan.planner = "raycast";
        out.plan.map_ref = scenario.map_ref;
        out.plan.points.reserve(path.waypoints.size());
        for (const Point3& wp : path.waypoints) out.plan.points.push_back({wp, scenario.reel});
        return out;
    }

    if (scenario.planner != "contact")
        throw ValidationError("plan: unknown planner '" + scenario.planner + "'");

    for (std::size_t s = 0; s < stops.size(); ++s) {
        if (!inflated.is_free(stops[s]))
            throw InvalidEndpointError("plan: stop " + std::to_string(s) +
                                       " is occupied or out of bounds");
    }
    const Roadmap rm = build_prm(inflated, scenario.prm);
    Path path = plan_legs(rm, inflated, stops, scenario.prm.seed);

    ContactPlan cp;
    try {
        cp = plan_contacts(original, inflated, path, scenario.reel);
    } catch (const ContactUnresolvableError&) {
        // A finer waypoint spacing gives the contact search a cleaner swept
        // region; one retry before giving up.
        path = densify_path(path, 0.1);
        cp = plan_contacts(original, inflated, path, scenario.reel);
    }
    out.plan = std::move(cp.path);
    out.plan.map_ref = scenario.map_ref;
    out.events = std::move(cp.events);
    out.max_stack_depth = cp.max_stack_depth;
    return out;
}

double contact_coverage(const VoxelMap& original, const VoxelMap& inflated, const Point3& start,
                        const PrmParams& params, std::vector<CellIndex>* cell_failures) {
    if (!inflated.is_free(start))
        throw InvalidEndpointError("contact_coverage: start is occupied or out of bounds");
    if (inflated.free_count() == 0)
        throw UndefinedFractionError("contact_coverage: map has no free cells");

    const Roadmap rm = build_prm(inflated, params);
    const int n = static_cast<int>(rm.vertices.size());

    // Single-source shortest paths from the start over the roadmap; the
    // per-cell queries below reuse them instead of re-running Dijkstra.
    constexpr int kMaxLinks = 10;
    std::vector<std::pair<double, int>> start_sorted(n);
    for (int u = 0; u < n; ++u) start_sorted[u] = {distance(start, rm.vertices[u]), u};
    std::sort(start_sorted.begin(), start_sorted.end());
    std::vector<std::pair<int, double>> start_links;
    for (const auto& [d, u] : start_sorted) {
        if (static_cast<int>(start_links.size()) >= kMaxLinks) break;
        if (!inflated.segment_collides(start, rm.vertices[u])) start_links.emplace_back(u, d);
    }

    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<int> prev(n, -1);
    using QItem = std::pair<double, int>;
    std::priority_queue<QItem, std::vector<QItem>, std::greater<>> queue;
    for (const auto& [u, d] : start_links) {
        dist[u] = d;
        queue.emplace(d, u);
    }
    while (!queue.empty()) {
        const auto [d, v] = queue.top();
        queue.pop();
        if (d > dist[v]) continue;
        for (const auto& [u, w] : rm.adjacency[v])
            if (dist[v] + w < dist[u]) {
                dist[u] = dist[v] + w;
                prev[u] = v;
                queue.emplace(dist[u], u);
            }
    }

    std::vector<std::pair<double, int>> by_dist(n);
    const auto& d = inflated.dims();
    std::size_t covered = 0;
    std::size_t total = 0;
    for (int k = 0; k < d.nz; ++k)
        for (int j = 0; j < d.ny; ++j)
            for (int i = 0; i < d.nx; ++i) {
                const CellIndex cell{i, j, k};
                if (inflated.occupied(cell)) continue;
                ++total;
                const Point3 target = inflated.center(cell);

                bool ok = false;
                try {
                    Path path;
                    if (target == start) {
                        path.waypoints = {start};
                    } else {
                        for (int u = 0; u < n; ++u)
                            by_dist[u] = {distance(target, rm.vertices[u]), u};
                        std::sort(by_dist.begin(), by_dist.end());
                        int attach = -1;
                        int tried = 0;
                        for (const auto& [dd, u] : by_dist) {
                            if (!std::isfinite(dist[u])) continue;
                            if (!inflated.segment_collides(target, rm.vertices[u])) {
                                attach = u;
                                break;
                            }
                            if (++tried >= 50) break; // nothing visible nearby
                        }
                        if (attach < 0) throw NoPathError("coverage: unreachable cell");
                        std::vector<Point3> chain{target};
                        for (int v = attach; v != -1; v = prev[v])
                            chain.push_back(rm.vertices[v]);
                        chain.push_back(start);
                        std::reverse(chain.begin(), chain.end());
                        path.waypoints = std::move(chain);
                        path = smooth_path(path, inflated, params.seed, 40);
                    }
                    try {
                        plan_contacts(original, inflated, path, start);
                    } catch (const ContactUnresolvableError&) {
                        plan_contacts(original, inflated, densify_path(path, 0.1), start);
                    }
                    ok = true;
                } catch (const Error&) {
                    ok = false;
                }
                if (ok)
                    ++covered;
                else if (cell_failures)
                    cell_failures->push_back(cell);
            }
    return static_cast<double>(covered) / static_cast<double>(total);
}

ReachabilityReport reachability_stats(const ScenarioSpec& scenario, const VoxelMap& original,
                                      bool with_coverage) {
    const VoxelMap inflated = original.inflate(scenario.inflate);
    const ReducedMap reduced = reduce_reachable_space(inflated, original, scenario.reel);

    ReachabilityReport report;
    report.free_cells = inflated.free_count();
    report.blocked_cells = reduced.blocked_count();
    report.raycast_fraction = reachability_fraction(reduced);
    if (with_coverage) {
        std::vector<CellIndex> failures;
        report.contact_fraction =
            contact_coverage(original, inflated, scenario.reel, scenario.prm, &failures);
        report.coverage_failures = failures.size();
        report.coverage_computed = true;
    }
    return report;
}

} // namespace tetherplan
