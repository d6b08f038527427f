#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tetherplan/geometry.hpp"
#include "tetherplan/voxel_map.hpp"

namespace tetherplan {

struct Path {
    std::vector<Point3> waypoints;

    double length() const {
        double total = 0.0;
        for (std::size_t i = 1; i < waypoints.size(); ++i)
            total += distance(waypoints[i - 1], waypoints[i]);
        return total;
    }
};

struct PrmParams {
    int n_samples = 2000;
    int k_neighbors = 10;
    uint64_t seed = 1;
};

// Undirected roadmap over free-space samples; immutable once built and safe
// to query concurrently.
struct Roadmap {
    std::vector<Point3> vertices;
    std::vector<std::vector<std::pair<int, double>>> adjacency; // (vertex, edge length)
    PrmParams params;

    std::size_t edge_count() const {
        std::size_t twice = 0;
        for (const auto& a : adjacency) twice += a.size();
        return twice / 2;
    }
};

// Samples n vertices uniformly in free space (rejection sampling, capped at
// 1000*n attempts) and connects each to its k nearest neighbors through
// collision-free segments. Deterministic for a given seed.
Roadmap build_prm(const VoxelMap& map, int n_samples, int k_neighbors, uint64_t seed);

inline Roadmap build_prm(const VoxelMap& map, const PrmParams& params) {
    return build_prm(map, params.n_samples, params.k_neighbors, params.seed);
}

// Connects start and goal to their nearest visible roadmap vertices and
// returns the shortest path by edge length (uniform-cost search).
Path query_path(const Roadmap& roadmap, const VoxelMap& map, const Point3& start,
                const Point3& goal);

// Random shortcutting only: repeatedly tries to bypass intermediate waypoints
// with a collision-free straight segment. Endpoints are preserved and the
// total length never increases.
Path shortcut_path(const Path& path, const VoxelMap& map, uint64_t seed, int iterations = 200);

// Subdivides segments so consecutive waypoints are at most step_max apart.
Path densify_path(const Path& path, double step_max = 0.2);

// Shortcutting followed by densification; the planners' post-processing step.
Path smooth_path(const Path& path, const VoxelMap& map, uint64_t seed, int iterations = 200,
                 double step_max = 0.2);

// True iff every consecutive segment of the path is collision-free in map.
bool path_valid(const Path& path, const VoxelMap& map);

} // namespace tetherplan
