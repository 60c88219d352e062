#pragma once
// Deterministic simulation engine: named configuration presets, the per-step
// phase order, and per-run data collection.
//
// Randomness is split into labeled substreams of the run seed so that the
// world layout, spawn sites, and trait draws stay identical across presets
// with the same seed, and runs diverge only where mechanics differ:
//   "world"   - site placement and danger damage
//   "spawn"   - agent start positions
//   "traits"  - trait profiles
//   "run"     - everything inside the step loop
//   "perturb" - perturbation draws
//
// Normative phase order within one step:
//   1. perturbations fire when their trigger step is reached
//   2. agent order is shuffled with the run stream
//   3. per agent: select state -> move (scored, or uniform-random in the
//      random-movement preset) -> danger damage -> food pickup / delivery ->
//      perception writes to memory -> trace deposition -> trace reads into
//      memory -> energy ledger -> memory decay + prune
//   4. trace field decays
//   5. dead agents leave the active set
//   6. a metrics row is recorded

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "stigmem/agent.hpp"
#include "stigmem/errors.hpp"
#include "stigmem/geom.hpp"
#include "stigmem/memory.hpp"
#include "stigmem/metrics.hpp"
#include "stigmem/perturb.hpp"
#include "stigmem/rng.hpp"
#include "stigmem/traces.hpp"
#include "stigmem/world.hpp"

namespace stigmem {

// Consensus level above which a movement counts as consensus-guided.
inline constexpr double kCoordinationThreshold = 1.2;

// Sensing radius for perception, trace reading, and neighbor counting.
inline constexpr int kSenseRadius = 2;

// Strengths of memories written from direct experience. Danger entries come
// from damage actually taken, not from sightings: the on-site penalty already
// steers agents off hazard cells, and a sight-built repulsive field would
// fence off whole grid regions for no survival gain.
inline constexpr double kFoodPickupMemory = 1.0;
inline constexpr double kFoodSightMemory = 1.0;
inline constexpr double kDangerHitMemory = 1.0;

struct ModelConfig {
    std::string preset_name = "full_memory";
    WorldConfig world{};
    int n_agents = 7;
    int steps = 100;
    bool memory_enabled = true;
    bool traces_enabled = true;
    std::size_t memory_capacity = 50;
    double w_mem = 15.0;
    double delta_food = 0.985;
    bool random_movement = false;
    std::uint64_t seed = 1;
    PerturbConfig perturb{};

    double density() const {
        return double(n_agents) / double(world.width * world.height);
    }
};

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{
        "full_memory",   "enhanced_memory", "memory_no_traces", "limited_memory",
        "no_memory",     "traces_only",     "random_movement"};
    return names;
}

inline ModelConfig build_configuration(const std::string& name) {
    ModelConfig cfg;
    cfg.preset_name = name;
    if (name == "full_memory") {
        // defaults
    } else if (name == "enhanced_memory") {
        cfg.w_mem = 20.0;
        cfg.delta_food = 0.99;
    } else if (name == "memory_no_traces") {
        cfg.traces_enabled = false;
    } else if (name == "limited_memory") {
        cfg.memory_capacity = 10;
    } else if (name == "no_memory") {
        cfg.memory_enabled = false;
        cfg.traces_enabled = false;
    } else if (name == "traces_only") {
        cfg.memory_enabled = false;
    } else if (name == "random_movement") {
        cfg.random_movement = true;
        cfg.memory_enabled = false;
        cfg.traces_enabled = false;
    } else {
        throw config_error("engine: unknown preset '" + name + "'");
    }
    return cfg;
}

struct StepStats {
    long long food_collected = 0;  // cumulative deliveries
    double coverage = 0.0;         // visited / non-obstacle cells
    int coordination_events = 0;   // consensus-guided movements this step
    double trace_mass = 0.0;
    double mean_energy = 0.0;
    int alive = 0;
    double entropy = 0.0;
    int max_memory = 0;            // largest store across alive agents

    friend bool operator==(const StepStats&, const StepStats&) = default;
};

struct RunRecord {
    std::string config_name;
    std::uint64_t seed = 0;
    int width = 0;
    int height = 0;
    int n_agents = 0;
    int steps = 0;
    double density = 0.0;

    std::vector<StepStats> series;

    long long total_food = 0;
    long long total_movements = 0;
    long long total_coordination = 0;

    double performance = 0.0;
    double food_efficiency = 0.0;
    double coverage = 0.0;
    double coordination_per_agent = 0.0;
    double order_parameter = 0.0;
    double memory_fresh_fraction = 0.0;
    double memory_efficiency = 0.0;
    double entropy_final = 0.0;
    double mean_energy_final = 0.0;
    int alive_final = 0;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct Model {
    ModelConfig config;
    World world;
    TraceField traces;
    CategoryParams memory_params;
    TraceParams trace_params;
    ScoreWeights weights;
    EnergyParams energy;
    StateThresholds thresholds;
    std::vector<AgentState> agents;
    OccupancyGrid occupancy;
    VisitMask global_visited;
    // Step at which each harvested food cell becomes available again.
    std::vector<long> food_ready;
    Rng run_rng;
    Rng perturb_rng;
    long now = 0;

    long long total_food = 0;
    long long total_movements = 0;
    long long total_coordination = 0;
    std::vector<StepStats> series;

    explicit Model(const ModelConfig& cfg)
        : config(cfg),
          world(World::generate(cfg.world, Rng::derive(cfg.seed, "world"))),
          traces(cfg.world.width, cfg.world.height),
          occupancy(cfg.world.width, cfg.world.height),
          global_visited(cfg.world.width, cfg.world.height),
          food_ready(std::size_t(cfg.world.width) * std::size_t(cfg.world.height), 0),
          run_rng(Rng::substream(cfg.seed, "run")),
          perturb_rng(Rng::substream(cfg.seed, "perturb")) {
        if (cfg.n_agents < 0) throw config_error("engine: agent count must be >= 0");
        if (cfg.steps < 0) throw config_error("engine: step count must be >= 0");
        memory_params.decay[std::size_t(Category::food)] = cfg.delta_food;
        weights.memory = cfg.w_mem;

        auto pool = world.featureless_cells();
        if (std::size_t(cfg.n_agents) > pool.size())
            throw config_error("engine: more agents than featureless cells");
        Rng spawn_rng = Rng::substream(cfg.seed, "spawn");
        spawn_rng.partial_shuffle(pool, std::size_t(cfg.n_agents));

        Rng trait_rng = Rng::substream(cfg.seed, "traits");
        agents.reserve(std::size_t(cfg.n_agents));
        for (int i = 0; i < cfg.n_agents; ++i) {
            AgentState a;
            a.id = i;
            a.position = pool[std::size_t(i)];
            a.spawn = a.position;
            a.energy = energy.initial;
            a.memory = MemoryStore(cfg.memory_capacity);
            a.traits = TraitProfile::sample(trait_rng);
            a.visited = VisitMask(world.width(), world.height());
            a.visited.set(a.position);
            global_visited.set(a.position);
            occupancy.add(a.position);
            agents.push_back(std::move(a));
        }
    }

    // Bookkeeping when an agent leaves the active set (death or removal).
    void retire_agent(AgentState& a) { occupancy.remove(a.position); }

    std::size_t cell_index(Pos p) const {
        return std::size_t(p.y) * std::size_t(world.width()) + std::size_t(p.x);
    }

    // Relocated food arrives ready to harvest.
    void reset_food_readiness() { std::fill(food_ready.begin(), food_ready.end(), 0L); }

    void step() {
        apply_perturbations();

        std::vector<std::size_t> order(agents.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        run_rng.shuffle(order);

        int coordination_this_step = 0;
        const MoveContext ctx{world,   traces,    trace_params,          weights,
                              occupancy, config.memory_enabled, &food_ready, now};

        for (std::size_t idx : order) {
            AgentState& a = agents[idx];
            a.state = select_state(a, thresholds, run_rng);

            // Movement.
            const Pos from = a.position;
            const Pos to = config.random_movement ? choose_random_move(a, world, run_rng)
                                                  : choose_move(a, ctx, run_rng);
            const bool moved = to != from;
            if (moved) {
                occupancy.remove(from);
                occupancy.add(to);
                a.position = to;
                a.visited.set(to);
                global_visited.set(to);
                if (config.memory_enabled) a.memory.mark_revisited(to, now);
                total_movements += 1;
                if (config.traces_enabled) {
                    double best = 0.0;
                    for (Category c : all_categories)
                        best = std::max(best, traces.consensus(to, c, trace_params));
                    if (best > kCoordinationThreshold) {
                        total_coordination += 1;
                        coordination_this_step += 1;
                    }
                }
            }

            // Danger damage (applied to the ledger below).
            const double damage = world.danger_damage(a.position);
            if (damage > 0 && config.memory_enabled)
                a.memory.add_or_reinforce({a.position, Category::danger, now, kDangerHitMemory, 0, false},
                                          memory_params, now);

            // Perception: food visible right now becomes (or refreshes) a
            // bookmark, and sight retracts bookmarks it contradicts -- a bare
            // cell is bare whether it is empty ground or a harvested source
            // still regrowing. Runs before pickup so the forager reinforces
            // the cell it is about to harvest. Social entries arrive only
            // through trace integration; writing them on every crowded step
            // would glue clusters together.
            if (config.memory_enabled) {
                world.for_each_in_range(a.position, kSenseRadius, [&](Pos p) {
                    if (ctx.food_available(p))
                        a.memory.add_or_reinforce({p, Category::food, now, kFoodSightMemory, 0, false},
                                                  memory_params, now);
                    else
                        a.memory.erase_at(p, Category::food);
                });
            }

            // Food pickup and delivery. A harvested cell needs time to regrow.
            bool ate = false;
            if (a.state == BehaviorState::foraging && !a.carrying_food &&
                ctx.food_available(a.position)) {
                a.carrying_food = true;
                ate = true;
                food_ready[cell_index(a.position)] = now + world.config().food_regen_steps;
                if (config.memory_enabled)
                    a.memory.add_or_reinforce({a.position, Category::food, now, kFoodPickupMemory, 0, false},
                                              memory_params, now);
            } else if (a.carrying_food && a.position == a.spawn) {
                a.carrying_food = false;
                a.foods_delivered += 1;
                total_food += 1;
            }

            // Shared by deposition and trace reading below.
            const int nearby = occupancy.count_in_range(world, a.position, kSenseRadius) - 1;

            // Trace deposition.
            bool deposited = false;
            if (config.traces_enabled) {
                const auto cats = deposition_decision(a, nearby, run_rng);
                const double sigma = deposit_strength(a.energy, energy.max);
                for (Category c : all_categories) {
                    if (!cats[std::size_t(c)]) continue;
                    traces.deposit(a.position, c, sigma, a.id, now);
                    deposited = true;
                }
            }

            // Trace reading: at most one integration per category per step,
            // from the strongest-consensus cell in sensing range.
            if (config.traces_enabled && config.memory_enabled) {
                for (Category c : all_categories) {
                    double best = 0.0;
                    Pos best_pos{};
                    world.for_each_in_range(a.position, kSenseRadius, [&](Pos p) {
                        const double cs = traces.consensus(p, c, trace_params);
                        if (cs > best) {
                            best = cs;
                            best_pos = p;
                        }
                    });
                    if (best > 0.0)
                        integrate_trace_into_memory(a.memory, memory_params, best_pos, c, best,
                                                    a.traits.social_learning[std::size_t(c)], now);
                }
            }

            // Energy ledger.
            apply_energy(a, energy, moved, deposited, ate, a.state == BehaviorState::resting,
                         world.config().food_energy_value, damage);

            // Memory decay and pruning.
            if (config.memory_enabled) {
                a.memory.decay(memory_params, 1);
                a.memory.prune(memory_params, now);
            }

            if (a.energy <= 0.0) a.dead = true;
        }

        traces.decay_step(trace_params, now);

        // Dead agents leave the active set.
        std::size_t w = 0;
        for (std::size_t i = 0; i < agents.size(); ++i) {
            if (agents[i].dead) {
                retire_agent(agents[i]);
            } else {
                if (w != i) agents[w] = std::move(agents[i]);
                ++w;
            }
        }
        agents.resize(w);

        series.push_back(collect_row(coordination_this_step));
        now += 1;
    }

    RunRecord finish() const {
        RunRecord r;
        r.config_name = config.preset_name;
        r.seed = config.seed;
        r.width = world.width();
        r.height = world.height();
        r.n_agents = config.n_agents;
        r.steps = config.steps;
        r.density = config.density();
        r.series = series;
        r.total_food = total_food;
        r.total_movements = total_movements;
        r.total_coordination = total_coordination;

        r.coverage = series.empty() ? 0.0 : series.back().coverage;
        if (config.n_agents > 0) {
            r.food_efficiency = double(total_food) / config.n_agents;
            r.coordination_per_agent = double(total_coordination) / config.n_agents;
        }
        r.order_parameter =
            total_movements > 0 ? double(total_coordination) / double(total_movements) : 0.0;
        r.performance = performance_score(r.coverage, r.food_efficiency, r.coordination_per_agent);

        if (config.memory_enabled) {
            std::vector<MemoryUsage> usage;
            for (const auto& a : agents)
                for (const auto& e : a.memory.entries())
                    usage.push_back({e.strength, now - e.created_at, e.revisited});
            const auto q = memory_quality(usage);
            r.memory_fresh_fraction = q.fresh_strong_fraction;
            r.memory_efficiency = q.efficiency;
        }
        r.entropy_final = series.empty() ? 0.0 : series.back().entropy;
        r.mean_energy_final = series.empty() ? 0.0 : series.back().mean_energy;
        r.alive_final = int(agents.size());
        return r;
    }

private:
    void apply_perturbations() {
        switch (config.perturb.kind) {
            case PerturbKind::none:
                return;
            case PerturbKind::agent_failure:
                if (now == config.perturb.trigger_step)
                    remove_agents(*this, config.perturb.fraction, perturb_rng);
                return;
            case PerturbKind::trace_corruption:
                if (now == config.perturb.trigger_step)
                    corrupt_traces(*this, config.perturb.fraction, perturb_rng);
                return;
            case PerturbKind::dynamic_food:
                if (now > 0 && now % 25 == 0) relocate_food(*this, perturb_rng);
                return;
        }
    }

    StepStats collect_row(int coordination_this_step) const {
        StepStats row;
        row.food_collected = total_food;
        row.coverage = double(global_visited.count()) / double(world.free_cell_count());
        row.coordination_events = coordination_this_step;
        row.trace_mass = traces.total_mass();
        row.alive = int(agents.size());
        if (!agents.empty()) {
            double sum = 0.0;
            int max_mem = 0;
            for (const auto& a : agents) {
                sum += a.energy;
                max_mem = std::max(max_mem, int(a.memory.size()));
            }
            row.mean_energy = sum / double(agents.size());
            row.max_memory = max_mem;
        }
        if (config.memory_enabled && !agents.empty()) row.entropy = memory_entropy();
        return row;
    }

    // Entropy of per-agent unique memory positions (positions held by exactly
    // one alive agent), with +1 smoothing inside information_entropy.
    double memory_entropy() const {
        struct OwnerInfo {
            int owner = -1;
            bool shared = false;
        };
        std::unordered_map<Pos, OwnerInfo, PosHash> owners;
        owners.reserve(agents.size() * 8);
        for (std::size_t i = 0; i < agents.size(); ++i) {
            // Entries for one agent may repeat a position across categories;
            // dedupe before ownership counting.
            std::vector<Pos> positions;
            positions.reserve(agents[i].memory.size());
            for (const auto& e : agents[i].memory.entries()) positions.push_back(e.position);
            std::sort(positions.begin(), positions.end());
            positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
            for (Pos p : positions) {
                auto [it, inserted] = owners.try_emplace(p, OwnerInfo{int(i), false});
                if (!inserted && it->second.owner != int(i)) it->second.shared = true;
            }
        }
        std::vector<long long> unique_counts(agents.size(), 0);
        for (const auto& [pos, info] : owners)
            if (!info.shared) unique_counts[std::size_t(info.owner)] += 1;
        return information_entropy(unique_counts);
    }
};

inline RunRecord run_model(const ModelConfig& cfg) {
    Model m(cfg);
    for (int t = 0; t < cfg.steps; ++t) m.step();
    return m.finish();
}

// Observer variant: `on_step` runs after every completed step (trace
// snapshots, live inspection).
template <class F>
RunRecord run_model(const ModelConfig& cfg, F&& on_step) {
    Model m(cfg);
    for (int t = 0; t < cfg.steps; ++t) {
        m.step();
        on_step(m);
    }
    return m.finish();
}

// Performance over the half-open step window [lo, hi): coverage gained plus
// per-agent food and coordination accrued inside the window.
inline double windowed_performance(const RunRecord& r, int lo, int hi) {
    if (lo < 0 || hi > int(r.series.size()) || lo >= hi)
        throw argument_error("engine: invalid performance window");
    const auto& s = r.series;
    const double food = double(s[std::size_t(hi - 1)].food_collected -
                               (lo > 0 ? s[std::size_t(lo - 1)].food_collected : 0));
    const double cov_gain =
        s[std::size_t(hi - 1)].coverage - (lo > 0 ? s[std::size_t(lo - 1)].coverage : 0.0);
    long long coord = 0;
    for (int t = lo; t < hi; ++t) coord += s[std::size_t(t)].coordination_events;
    const double agents = r.n_agents > 0 ? double(r.n_agents) : 1.0;
    return performance_score(std::max(0.0, cov_gain), food / agents, double(coord) / agents);
}

} // namespace stigmem
