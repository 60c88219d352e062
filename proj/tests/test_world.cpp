#include <catch2/catch.hpp>

#include <algorithm>
#include <set>

#include "stigmem/world.hpp"

using namespace stigmem;

namespace {

WorldConfig square(int side) {
    WorldConfig cfg;
    cfg.width = cfg.height = side;
    return cfg;
}

std::set<Pos> as_set(const std::vector<Pos>& v) { return {v.begin(), v.end()}; }

} // namespace

TEST_CASE("site counts follow round(fraction * cells)") {
    // Oracle: direct multiplication. 0.125 * 400 = 50 exactly.
    WorldConfig cfg = square(20);
    cfg.food_fraction = 0.125;
    const World w = World::generate(cfg, 7);
    REQUIRE(w.food_sites().size() == 50);
}

TEST_CASE("zero fractions produce empty site sets") {
    WorldConfig cfg = square(10);
    cfg.food_fraction = cfg.obstacle_fraction = cfg.danger_fraction = 0.0;
    const World w = World::generate(cfg, 99);
    REQUIRE(w.food_sites().empty());
    REQUIRE(w.obstacle_sites().empty());
    REQUIRE(w.danger_sites().empty());
    REQUIRE(w.free_cell_count() == 100);
}

TEST_CASE("default 15x15 preset keeps food inside the surveyed band") {
    const World w = World::generate(square(15), 11);
    REQUIRE(w.food_sites().size() >= 22);
    REQUIRE(w.food_sites().size() <= 34);
}

TEST_CASE("generation is a pure function of config and seed") {
    const WorldConfig cfg = square(15);
    REQUIRE(World::generate(cfg, 5) == World::generate(cfg, 5));
    REQUIRE_FALSE(World::generate(cfg, 5) == World::generate(cfg, 6));
}

TEST_CASE("site sets are pairwise disjoint for many seeds") {
    const WorldConfig cfg = square(12);
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const World w = World::generate(cfg, seed);
        const auto food = as_set(w.food_sites());
        const auto obstacles = as_set(w.obstacle_sites());
        const auto danger = as_set(w.danger_sites());
        for (Pos p : food) {
            REQUIRE(obstacles.count(p) == 0);
            REQUIRE(danger.count(p) == 0);
        }
        for (Pos p : obstacles) REQUIRE(danger.count(p) == 0);
        for (Pos p : w.danger_sites()) {
            REQUIRE(w.danger_damage(p) >= 5);
            REQUIRE(w.danger_damage(p) <= 15);
        }
    }
}

TEST_CASE("moore neighborhoods") {
    const World w = World::generate(square(15), 1);
    REQUIRE(w.neighbors({7, 7}, 1).size() == 8);
    REQUIRE(w.neighbors({0, 0}, 1).size() == 3);
    REQUIRE(w.neighbors({7, 7}, 2).size() == 24);
    for (Pos p : w.neighbors({0, 1}, 2)) {
        REQUIRE(w.in_bounds(p));
        REQUIRE(p != Pos{0, 1});
    }
}

TEST_CASE("torus neighborhoods always have full size") {
    WorldConfig cfg = square(9);
    cfg.topology = Topology::torus;
    const World w = World::generate(cfg, 2);
    REQUIRE(w.neighbors({0, 0}, 1).size() == 8);
    REQUIRE(w.neighbors({0, 0}, 2).size() == 24);
    REQUIRE(w.neighbors({8, 8}, 2).size() == 24);
    // Wrap-aware distance: opposite corners are close on a torus.
    REQUIRE(w.distance({0, 0}, {8, 8}) == 1);
}

TEST_CASE("invalid configurations and arguments are rejected") {
    WorldConfig cfg = square(10);
    cfg.food_fraction = 0.5;
    cfg.obstacle_fraction = 0.4;
    cfg.danger_fraction = 0.2;
    REQUIRE_THROWS_AS(World::generate(cfg, 1), config_error);

    WorldConfig tiny = square(4);
    REQUIRE_THROWS_AS(World::generate(tiny, 1), config_error);

    const World w = World::generate(square(10), 1);
    REQUIRE_THROWS_AS(w.neighbors({-1, 0}, 1), argument_error);
    REQUIRE_THROWS_AS(w.neighbors({10, 0}, 1), argument_error);
    REQUIRE_THROWS_AS(w.neighbors({5, 5}, 0), argument_error);
}

TEST_CASE("food cells form the expected number of contiguous sources") {
    // 28 food cells at a mean patch size of 2.5 make 11 sources on 15x15.
    const World w = World::generate(square(15), 21);
    REQUIRE(w.food_sites().size() == 28);

    // Count connected components (Moore adjacency) of the food mask.
    std::vector<Pos> cells = w.food_sites();
    std::set<Pos> open(cells.begin(), cells.end());
    int components = 0;
    while (!open.empty()) {
        ++components;
        std::vector<Pos> stack{*open.begin()};
        open.erase(open.begin());
        while (!stack.empty()) {
            const Pos a = stack.back();
            stack.pop_back();
            for (auto it = open.begin(); it != open.end();) {
                if (chebyshev(a, *it) == 1) {
                    stack.push_back(*it);
                    it = open.erase(it);
                } else {
                    ++it;
                }
            }
        }
    }
    // Patch growth can merge adjacent patches, so allow a little slack below.
    REQUIRE(components >= 7);
    REQUIRE(components <= 11);

    SECTION("patch size 1 scatters individual cells") {
        WorldConfig cfg = square(15);
        cfg.food_patch_size = 1.0;
        const World scattered = World::generate(cfg, 21);
        REQUIRE(scattered.food_sites().size() == 28);
    }
}

TEST_CASE("food relocation validates disjointness") {
    World w = World::generate(square(10), 3);
    if (!w.obstacle_sites().empty()) {
        auto bad = w.food_sites();
        bad.push_back(w.obstacle_sites().front());
        REQUIRE_THROWS_AS(w.replace_food_sites(bad), argument_error);
    }
    std::vector<Pos> fresh;
    for (Pos p : w.featureless_cells()) {
        fresh.push_back(p);
        if (fresh.size() == w.food_sites().size()) break;
    }
    w.replace_food_sites(fresh);
    REQUIRE(w.food_sites().size() == fresh.size());
    for (Pos p : w.food_sites()) REQUIRE(w.is_food(p));
}
