#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "tetherplan/errors.hpp"
#include "tetherplan/rng.hpp"
#include "tetherplan/voxel_map.hpp"

#include "support/builders.hpp"
#include "support/oracles.hpp"

using namespace tetherplan;
using builders::cell_set;
using builders::empty_map;
using builders::fill_box;

TEST_CASE("construction validates inputs") {
    CHECK_THROWS_AS(VoxelMap(0.0, {3, 3, 3}, {0, 0, 0}), ValidationError);
    CHECK_THROWS_AS(VoxelMap(-0.1, {3, 3, 3}, {0, 0, 0}), ValidationError);
    CHECK_THROWS_AS(VoxelMap(1.0, {0, 3, 3}, {0, 0, 0}), ValidationError);
    CHECK_THROWS_AS(VoxelMap(1.0, {3, 3, 3}, {0, 0, 0}).set_occupied({3, 0, 0}),
                    ValidationError);
}

TEST_CASE("cell/world round-trip holds for every cell") {
    VoxelMap map(0.1, {7, 5, 9}, {-0.3, 0.2, -1.1});
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 5; ++j)
            for (int k = 0; k < 9; ++k) {
                const auto back = map.cell_at(map.center({i, j, k}));
                REQUIRE(back.has_value());
                CHECK(*back == CellIndex{i, j, k});
            }
}

TEST_CASE("is_free: bounds and occupancy") {
    VoxelMap map = empty_map(1.0, 3, 3, 3);
    CHECK(map.is_free({1.5, 1.5, 1.5}));

    map.set_occupied({1, 1, 1});
    CHECK_FALSE(map.is_free({1.5, 1.5, 1.5}));
    CHECK(map.is_free({0.5, 0.5, 0.5}));

    // 1 mm outside the map is not free.
    CHECK_FALSE(map.is_free({-0.001, 1.5, 1.5}));
    CHECK_FALSE(map.is_free({1.5, 3.001, 1.5}));
}

TEST_CASE("inflate: radius zero is the identity") {
    VoxelMap map = empty_map(0.5, 4, 4, 4);
    map.set_occupied({2, 1, 3});
    map.set_occupied({0, 0, 0});
    const VoxelMap inflated = map.inflate(0.0);
    CHECK(cell_set(inflated.occupied_cells()) == cell_set(map.occupied_cells()));
    CHECK(inflated.inflated_by() == 0.0);
}

TEST_CASE("inflate: unit radius adds exactly the 6 face neighbors") {
    VoxelMap map = empty_map(1.0, 5, 5, 5);
    map.set_occupied({2, 2, 2});
    const VoxelMap inflated = map.inflate(1.0);

    const std::set<std::array<int, 3>> expected = {{2, 2, 2}, {1, 2, 2}, {3, 2, 2}, {2, 1, 2},
                                                   {2, 3, 2}, {2, 2, 1}, {2, 2, 3}};
    CHECK(cell_set(inflated.occupied_cells()) == expected);
    CHECK(cell_set(inflated.occupied_cells()) ==
          cell_set(oracles::brute_inflate(map, 1.0).occupied_cells()));
}

TEST_CASE("inflate: fully occupied map saturates") {
    VoxelMap map = empty_map(1.0, 3, 3, 3);
    fill_box(map, {0, 0, 0}, {2, 2, 2});
    const VoxelMap inflated = map.inflate(2.5);
    CHECK(inflated.occupied_count() == map.cell_count());
}

TEST_CASE("inflate: negative radius rejected") {
    VoxelMap map = empty_map(1.0, 3, 3, 3);
    CHECK_THROWS_AS(map.inflate(-0.5), ValidationError);
}

TEST_CASE("inflate matches the brute-force oracle on random maps") {
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        VoxelMap map = builders::random_map(rng, 8, 12, 0.5);
        const double radius = rng.uniform(0.0, 1.2);
        CHECK(cell_set(map.inflate(radius).occupied_cells()) ==
              cell_set(oracles::brute_inflate(map, radius).occupied_cells()));
    }
}

TEST_CASE("inflation is monotone in the radius") {
    Rng rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        VoxelMap map = builders::random_map(rng, 8, 10, 0.5);
        const double r1 = rng.uniform(0.0, 0.8);
        const double r2 = r1 + rng.uniform(0.0, 0.8);
        const auto small = cell_set(map.inflate(r1).occupied_cells());
        const auto large = cell_set(map.inflate(r2).occupied_cells());
        CHECK(std::includes(large.begin(), large.end(), small.begin(), small.end()));
    }
}

TEST_CASE("segment_collides: documented cases") {
    VoxelMap map = empty_map(1.0, 4, 4, 4);

    SUBCASE("empty map never collides") {
        CHECK_FALSE(map.segment_collides({0.2, 0.2, 0.2}, {3.8, 3.7, 3.6}));
    }

    SUBCASE("degenerate segment in a free cell") {
        map.set_occupied({1, 1, 1});
        CHECK_FALSE(map.segment_collides({0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}));
        CHECK(map.segment_collides({1.5, 1.5, 1.5}, {1.5, 1.5, 1.5}));
    }

    SUBCASE("axis-aligned hit and miss") {
        map.set_occupied({1, 1, 1});
        CHECK(map.segment_collides({0.5, 1.5, 1.5}, {2.5, 1.5, 1.5}));
        CHECK_FALSE(map.segment_collides({0.5, 0.5, 0.5}, {2.5, 0.5, 0.5}));
    }

    SUBCASE("face graze counts as collision") {
        map.set_occupied({1, 1, 1});
        // Runs exactly along the x-face plane y = 1 of the occupied cube.
        CHECK(map.segment_collides({0.5, 1.0, 1.5}, {2.5, 1.0, 1.5}));
    }
}

TEST_CASE("segment_collides is symmetric") {
    Rng rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        VoxelMap map = builders::random_map(rng, 6, 10);
        const Point3 a{rng.uniform(-1, 7), rng.uniform(-1, 7), rng.uniform(-1, 7)};
        const Point3 b{rng.uniform(-1, 7), rng.uniform(-1, 7), rng.uniform(-1, 7)};
        CHECK(map.segment_collides(a, b) == map.segment_collides(b, a));
    }
}

TEST_CASE("segment_collides agrees with the exhaustive box oracle") {
    Rng rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        VoxelMap map = builders::random_map(rng, 10, 20);
        for (int s = 0; s < 25; ++s) {
            const Point3 a{rng.uniform(0, 10), rng.uniform(0, 10), rng.uniform(0, 10)};
            const Point3 b{rng.uniform(0, 10), rng.uniform(0, 10), rng.uniform(0, 10)};
            CHECK(map.segment_collides(a, b) == oracles::brute_segment_collides(map, a, b));
        }
    }
}

TEST_CASE("segment_collides agrees with the dense point-sampling oracle") {
    // Sampling proves presence, not absence: a positive sample forces a
    // collision verdict, and a collision verdict without a sampled hit must
    // be an exact graze the sampler stepped over.
    Rng rng(41);
    int checked = 0;
    const int maps = 5;
    const int per_map = 1000;
    for (int trial = 0; trial < maps; ++trial) {
        VoxelMap map = builders::random_map(rng, 10, 20);
        for (int s = 0; s < per_map; ++s) {
            const Point3 a{rng.uniform(0, 10), rng.uniform(0, 10), rng.uniform(0, 10)};
            const Point3 b{rng.uniform(0, 10), rng.uniform(0, 10), rng.uniform(0, 10)};
            const bool sampled =
                oracles::sampled_segment_collides(map, a, b, map.resolution() / 100.0);
            const bool reported = map.segment_collides(a, b);
            if (sampled) CHECK(reported);
            if (!sampled && reported) CHECK(oracles::brute_segment_collides(map, a, b));
            if (sampled == reported) ++checked;
        }
    }
    // The two answers should agree almost always on random segments.
    CHECK(checked >= maps * per_map - 5);
}

TEST_CASE("cells_on_segment: degenerate and axis-aligned cases") {
    VoxelMap map = empty_map(1.0, 5, 5, 5);

    SUBCASE("point segment yields its containing cell") {
        const auto cells = map.cells_on_segment({2.5, 2.5, 2.5}, {2.5, 2.5, 2.5});
        REQUIRE(cells.size() == 1);
        CHECK(cells[0] == CellIndex{2, 2, 2});
    }

    SUBCASE("axis-aligned segment spanning 3 cells, in order") {
        const auto cells = map.cells_on_segment({0.5, 1.5, 1.5}, {2.5, 1.5, 1.5});
        REQUIRE(cells.size() == 3);
        CHECK(cells[0] == CellIndex{0, 1, 1});
        CHECK(cells[1] == CellIndex{1, 1, 1});
        CHECK(cells[2] == CellIndex{2, 1, 1});
    }

    SUBCASE("reversed direction reverses the order") {
        const auto cells = map.cells_on_segment({2.5, 1.5, 1.5}, {0.5, 1.5, 1.5});
        REQUIRE(cells.size() == 3);
        CHECK(cells[0] == CellIndex{2, 1, 1});
        CHECK(cells[2] == CellIndex{0, 1, 1});
    }
}

TEST_CASE("cells_on_segment equals the exhaustive supercover set") {
    Rng rng(51);
    for (int trial = 0; trial < 30; ++trial) {
        VoxelMap map = builders::random_map(rng, 10, 20);
        for (int s = 0; s < 10; ++s) {
            const Point3 a{rng.uniform(0, 10), rng.uniform(0, 10), rng.uniform(0, 10)};
            const Point3 b{rng.uniform(0, 10), rng.uniform(0, 10), rng.uniform(0, 10)};
            CHECK(cell_set(map.cells_on_segment(a, b)) == oracles::brute_cells_on_segment(map, a, b));
        }
    }
}

TEST_CASE("cells_on_segment has no duplicates and contains both endpoints") {
    Rng rng(61);
    VoxelMap map = empty_map(0.25, 12, 12, 12);
    for (int s = 0; s < 200; ++s) {
        const Point3 a{rng.uniform(0, 3), rng.uniform(0, 3), rng.uniform(0, 3)};
        const Point3 b{rng.uniform(0, 3), rng.uniform(0, 3), rng.uniform(0, 3)};
        const auto cells = map.cells_on_segment(a, b);
        CHECK(cell_set(cells).size() == cells.size());
        const auto ca = map.cell_at(a);
        const auto cb = map.cell_at(b);
        REQUIRE(ca.has_value());
        REQUIRE(cb.has_value());
        CHECK(cell_set(cells).count({ca->i, ca->j, ca->k}) == 1);
        CHECK(cell_set(cells).count({cb->i, cb->j, cb->k}) == 1);
    }
}
