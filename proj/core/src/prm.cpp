#include "tetherplan/prm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "tetherplan/errors.hpp"
#include "tetherplan/rng.hpp"

namespace tetherplan {

Roadmap build_prm(const VoxelMap& map, int n_samples, int k_neighbors, uint64_t seed) {
    if (n_samples < 2) throw ValidationError("build_prm: n_samples must be at least 2");
    if (k_neighbors < 1) throw ValidationError("build_prm: k_neighbors must be at least 1");
    if (map.free_count() == 0) throw NoFreeSpaceError("build_prm: map has no free cells");

    Roadmap rm;
    rm.params = {n_samples, k_neighbors, seed};
    rm.vertices.reserve(n_samples);

    Rng rng(seed);
    const Point3 lo = map.origin();
    const Point3 hi = map.max_corner();
    const long attempt_cap = 1000L * n_samples;
    long attempts = 0;
    while (static_cast<int>(rm.vertices.size()) < n_samples) {
        if (attempts++ >= attempt_cap)
            throw SamplingExhaustedError("build_prm: rejection sampling exceeded " +
                                         std::to_string(attempt_cap) + " attempts");
        const Point3 p{rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y), rng.uniform(lo.z, hi.z)};
        if (map.is_free(p)) rm.vertices.push_back(p);
    }

    rm.adjacency.assign(rm.vertices.size(), {});
    const int n = static_cast<int>(rm.vertices.size());

    std::vector<std::pair<double, int>> order(n);
    for (int v = 0; v < n; ++v) {
        for (int u = 0; u < n; ++u) order[u] = {distance(rm.vertices[v], rm.vertices[u]), u};
        order[v].first = std::numeric_limits<double>::infinity(); // skip self
        const int want = std::min(k_neighbors, n - 1);
        std::partial_sort(order.begin(), order.begin() + want, order.end());
        for (int s = 0; s < want; ++s) {
            const auto [d, u] = order[s];
            if (std::any_of(rm.adjacency[v].begin(), rm.adjacency[v].end(),
                            [&](const auto& e) { return e.first == u; }))
                continue; // undirected edge already added from the other side
            if (map.segment_collides(rm.vertices[v], rm.vertices[u])) continue;
            rm.adjacency[v].emplace_back(u, d);
            rm.adjacency[u].emplace_back(v, d);
        }
    }
    return rm;
}

namespace {

// Nearest visible roadmap vertices, closest first, capped at max_links.
std::vector<std::pair<int, double>> visible_links(const Roadmap& rm, const VoxelMap& map,
                                                  const Point3& p, int max_links) {
    std::vector<std::pair<double, int>> by_dist(rm.vertices.size());
    for (std::size_t u = 0; u < rm.vertices.size(); ++u)
        by_dist[u] = {distance(p, rm.vertices[u]), static_cast<int>(u)};
    std::sort(by_dist.begin(), by_dist.end());
    std::vector<std::pair<int, double>> links;
    for (const auto& [d, u] : by_dist) {
        if (static_cast<int>(links.size()) >= max_links) break;
        if (!map.segment_collides(p, rm.vertices[u])) links.emplace_back(u, d);
    }
    return links;
}

} // namespace

Path query_path(const Roadmap& rm, const VoxelMap& map, const Point3& start, const Point3& goal) {
    if (!map.is_free(start)) throw InvalidEndpointError("query_path: start is not in free space");
    if (!map.is_free(goal)) throw InvalidEndpointError("query_path: goal is not in free space");
    if (start == goal) return Path{{start}};

    constexpr int kMaxLinks = 10;
    const auto start_links = visible_links(rm, map, start, kMaxLinks);
    const auto goal_links = visible_links(rm, map, goal, kMaxLinks);
    if (start_links.empty() || goal_links.empty())
        throw NoPathError("query_path: no visible roadmap vertex near an endpoint");

    // Uniform-cost search over the roadmap plus two virtual nodes.
    const int n = static_cast<int>(rm.vertices.size());
    const int start_id = n;
    const int goal_id = n + 1;
    std::vector<double> dist(n + 2, std::numeric_limits<double>::infinity());
    std::vector<int> prev(n + 2, -1);
    using QItem = std::pair<double, int>;
    std::priority_queue<QItem, std::vector<QItem>, std::greater<>> queue;
    dist[start_id] = 0.0;
    queue.emplace(0.0, start_id);

    auto relax = [&](int from, int to, double w) {
        if (dist[from] + w < dist[to]) {
            dist[to] = dist[from] + w;
            prev[to] = from;
            queue.emplace(dist[to], to);
        }
    };

    std::vector<std::pair<int, double>> goal_entry(n, {-1, 0.0});
    for (const auto& [u, d] : goal_links) goal_entry[u] = {goal_id, d};

    while (!queue.empty()) {
        const auto [d, v] = queue.top();
        queue.pop();
        if (d > dist[v]) continue;
        if (v == goal_id) break;
        if (v == start_id) {
            for (const auto& [u, w] : start_links) relax(start_id, u, w);
            continue;
        }
        for (const auto& [u, w] : rm.adjacency[v]) relax(v, u, w);
        if (goal_entry[v].first == goal_id) relax(v, goal_id, goal_entry[v].second);
    }
    if (!std::isfinite(dist[goal_id]))
        throw NoPathError("query_path: start and goal are not connected in the roadmap");

    std::vector<int> chain;
    for (int v = goal_id; v != -1; v = prev[v]) chain.push_back(v);
    std::reverse(chain.begin(), chain.end());

    Path path;
    path.waypoints.reserve(chain.size());
    for (int v : chain) {
        if (v == start_id)
            path.waypoints.push_back(start);
        else if (v == goal_id)
            path.waypoints.push_back(goal);
        else
            path.waypoints.push_back(rm.vertices[v]);
    }
    return path;
}

Path shortcut_path(const Path& path, const VoxelMap& map, uint64_t seed, int iterations) {
    Path out = path;
    if (out.waypoints.size() < 3) return out;
    Rng rng(seed);
    for (int it = 0; it < iterations; ++it) {
        const int n = static_cast<int>(out.waypoints.size());
        if (n < 3) break;
        const int i = rng.uniform_int(0, n - 3);
        const int j = rng.uniform_int(i + 2, n - 1);
        if (map.segment_collides(out.waypoints[i], out.waypoints[j])) continue;
        out.waypoints.erase(out.waypoints.begin() + i + 1, out.waypoints.begin() + j);
    }
    return out;
}

Path densify_path(const Path& path, double step_max) {
    if (!(step_max > 0.0)) throw ValidationError("densify_path: step_max must be positive");
    if (path.waypoints.size() < 2) return path;
    Path out;
    out.waypoints.push_back(path.waypoints.front());
    for (std::size_t s = 1; s < path.waypoints.size(); ++s) {
        const Point3& a = path.waypoints[s - 1];
        const Point3& b = path.waypoints[s];
        const int pieces = std::max(1, static_cast<int>(std::ceil(distance(a, b) / step_max)));
        for (int q = 1; q <= pieces; ++q)
            out.waypoints.push_back(q == pieces ? b : lerp(a, b, double(q) / pieces));
    }
    return out;
}

Path smooth_path(const Path& path, const VoxelMap& map, uint64_t seed, int iterations,
                 double step_max) {
    return densify_path(shortcut_path(path, map, seed, iterations), step_max);
}

bool path_valid(const Path& path, const VoxelMap& map) {
    if (path.waypoints.empty()) return false;
    if (path.waypoints.size() == 1) return map.is_free(path.waypoints[0]);
    for (std::size_t i = 1; i < path.waypoints.size(); ++i)
        if (map.segment_collides(path.waypoints[i - 1], path.waypoints[i])) return false;
    return true;
}

} // namespace tetherplan
