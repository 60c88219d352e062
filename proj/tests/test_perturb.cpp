#include <catch2/catch.hpp>

#include <cmath>
#include <set>

#include "stigmem/engine.hpp"
#include "stigmem/perturb.hpp"

using namespace stigmem;

namespace {

Model make_model(int agents, std::uint64_t seed, const std::string& preset = "full_memory") {
    ModelConfig cfg = build_configuration(preset);
    cfg.world.width = cfg.world.height = 15;
    cfg.n_agents = agents;
    cfg.steps = 100;
    cfg.seed = seed;
    return Model(cfg);
}

} // namespace

TEST_CASE("agent removal sizes") {
    SECTION("a sixth of twelve agents means two removals") {
        Model m = make_model(12, 1);
        Rng rng(3);
        remove_agents(m, 1.0 / 6.0, rng);
        REQUIRE(m.agents.size() == 10);
    }

    SECTION("ceil applies: 0.33 of seven agents removes three") {
        Model m = make_model(7, 2);
        Rng rng(4);
        remove_agents(m, 0.33, rng);
        REQUIRE(m.agents.size() == 4);
    }

    SECTION("fraction zero is an identity that consumes no randomness") {
        Model m = make_model(9, 3);
        Rng rng(5), witness(5);
        remove_agents(m, 0.0, rng);
        REQUIRE(m.agents.size() == 9);
        REQUIRE(rng.next_u64() == witness.next_u64());
    }

    SECTION("at least one agent always survives") {
        Model m = make_model(2, 4);
        Rng rng(6);
        remove_agents(m, 0.99, rng);
        REQUIRE(m.agents.size() == 1);
    }

    SECTION("a full wipe is rejected") {
        Model m = make_model(5, 5);
        Rng rng(7);
        REQUIRE_THROWS_AS(remove_agents(m, 1.0, rng), argument_error);
    }
}

TEST_CASE("trace corruption weakens deposits multiplicatively") {
    Model m = make_model(6, 8);
    for (int id = 0; id < 6; ++id) m.traces.deposit({id, id}, Category::food, 0.8, id, 0);

    SECTION("fraction zero changes nothing and consumes no randomness") {
        const double before = m.traces.total_mass();
        Rng rng(9), witness(9);
        corrupt_traces(m, 0.0, rng);
        REQUIRE(m.traces.total_mass() == before);
        REQUIRE(rng.next_u64() == witness.next_u64());
    }

    SECTION("fraction one with a pinned factor halves every strength") {
        Rng rng(10);
        corrupt_traces(m, 1.0, rng, 0.5, 0.5);
        m.traces.for_each_deposit([&](Pos, Category, TraceDeposit& d) {
            REQUIRE(d.strength == Approx(0.4).epsilon(1e-12));
        });
    }

    SECTION("corrupted deposits never go negative and weak ones vanish at decay") {
        Rng rng(11);
        corrupt_traces(m, 1.0, rng);  // factors in [0.1, 0.5] -> strengths <= 0.4
        m.traces.for_each_deposit(
            [&](Pos, Category, TraceDeposit& d) { REQUIRE(d.strength >= 0.0); });
        m.traces.decay_step(m.trace_params, 0);
        m.traces.for_each_deposit(
            [&](Pos, Category, TraceDeposit& d) { REQUIRE(d.strength > m.trace_params.min_strength); });
    }

    SECTION("out-of-range fractions are rejected") {
        Rng rng(12);
        REQUIRE_THROWS_AS(corrupt_traces(m, -0.1, rng), argument_error);
        REQUIRE_THROWS_AS(corrupt_traces(m, 1.1, rng), argument_error);
    }
}

TEST_CASE("food relocation preserves counts and disjointness") {
    Model m = make_model(5, 13);
    const auto before = m.world.food_sites();
    Rng rng(14);
    relocate_food(m, rng);
    const auto& after = m.world.food_sites();
    REQUIRE(after.size() == before.size());
    REQUIRE_FALSE(after == before);  // overwhelmingly probable
    for (Pos p : after) {
        REQUIRE_FALSE(m.world.is_obstacle(p));
        REQUIRE(m.world.danger_damage(p) == 0);
    }

    SECTION("no food sites means a no-op") {
        ModelConfig cfg = build_configuration("full_memory");
        cfg.world.width = cfg.world.height = 10;
        cfg.world.food_fraction = 0.0;
        cfg.n_agents = 3;
        cfg.seed = 15;
        Model empty(cfg);
        Rng r(16), witness(16);
        relocate_food(empty, r);
        REQUIRE(empty.world.food_sites().empty());
        REQUIRE(r.next_u64() == witness.next_u64());
    }
}

TEST_CASE("resilience score") {
    REQUIRE(resilience_score(10.0, 10.0) == Approx(1.0));
    REQUIRE(resilience_score(10.0, 7.86) == Approx(0.786));
    REQUIRE(std::isnan(resilience_score(0.0, 5.0)));
}

TEST_CASE("scenario runs preserve model invariants") {
    for (PerturbKind kind :
         {PerturbKind::agent_failure, PerturbKind::trace_corruption, PerturbKind::dynamic_food}) {
        ModelConfig cfg = build_configuration("full_memory");
        cfg.world.width = cfg.world.height = 15;
        cfg.n_agents = 12;
        cfg.steps = 100;
        cfg.seed = 17;
        cfg.perturb.kind = kind;
        cfg.perturb.fraction = kind == PerturbKind::agent_failure ? 1.0 / 6.0 : 0.5;
        const auto rec = run_model(cfg);
        REQUIRE(rec.series.size() == 100);
        int previous = cfg.n_agents;
        for (const auto& s : rec.series) {
            REQUIRE(s.alive <= previous);
            previous = s.alive;
            REQUIRE(s.trace_mass >= 0.0);
        }
        if (kind == PerturbKind::agent_failure) {
            // Two of twelve agents disappear at the trigger step.
            REQUIRE(rec.series[49].alive - rec.series[50].alive >= 2);
        }
    }
}
