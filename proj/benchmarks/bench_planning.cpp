// Scaling harness for the planners: reduction cost against obstacle count,
// roadmap construction against sample count, and contact planning against
// waypoint count. Qualitative trends only.

#include "benchmark/benchmark.h"

#include "tetherplan/contact_planner.hpp"
#include "tetherplan/prm.hpp"
#include "tetherplan/raycast.hpp"
#include "tetherplan/rng.hpp"
#include "tetherplan/voxel_map.hpp"

using namespace tetherplan;

namespace {

VoxelMap scattered_map(int obstacles, uint64_t seed) {
    VoxelMap map(0.1, {30, 30, 30}, {0, 0, 0});
    Rng rng(seed);
    int placed = 0;
    while (placed < obstacles) {
        const CellIndex c{rng.uniform_int(2, 27), rng.uniform_int(2, 27), rng.uniform_int(2, 27)};
        if (!map.occupied(c)) {
            map.set_occupied(c);
            ++placed;
        }
    }
    return map;
}

} // namespace

static void BM_ReduceReachableSpace(benchmark::State& state) {
    const VoxelMap map = scattered_map(static_cast<int>(state.range(0)), 7);
    const Point3 reel{0.05, 0.05, 0.05};
    for (auto _ : state) {
        auto reduced = reduce_reachable_space(map, map, reel);
        benchmark::DoNotOptimize(reduced.blocked);
    }
    state.SetLabel("obstacles=" + std::to_string(state.range(0)));
}
BENCHMARK(BM_ReduceReachableSpace)->Arg(8)->Arg(32)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_BuildPrm(benchmark::State& state) {
    const VoxelMap map = scattered_map(64, 7);
    for (auto _ : state) {
        auto rm = build_prm(map, static_cast<int>(state.range(0)), 10, 1);
        benchmark::DoNotOptimize(rm.vertices);
    }
    state.SetLabel("n=" + std::to_string(state.range(0)));
}
BENCHMARK(BM_BuildPrm)->Arg(250)->Arg(500)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_PlanContacts(benchmark::State& state) {
    VoxelMap map(0.1, {40, 20, 40}, {0, 0, 0});
    for (int j = 0; j < 16; ++j)
        for (int k = 16; k < 20; ++k)
            for (int i = 16; i < 20; ++i) map.set_occupied({i, j, k});

    // A loop around the column, resampled to the requested waypoint count.
    const Point3 anchor{0.5, 0.5, 0.5};
    std::vector<Point3> loop = {{3.0, 0.8, 0.8}, {3.4, 0.8, 2.0}, {3.0, 0.8, 3.2},
                                {1.8, 0.8, 3.4}, {0.8, 0.8, 2.6}, {0.8, 0.8, 1.2}};
    Path base;
    base.waypoints.assign(loop.begin(), loop.end());
    const int p = static_cast<int>(state.range(0));
    const double step = base.length() / p;
    const Path path = densify_path(base, step);

    for (auto _ : state) {
        auto plan = plan_contacts(map, map, path, anchor);
        benchmark::DoNotOptimize(plan.path.points);
    }
    state.SetLabel("p=" + std::to_string(path.waypoints.size()));
}
BENCHMARK(BM_PlanContacts)->Arg(16)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
