#pragma once
// Agent state and behavior: energy accounting, the four-state behavioral
// cycle, heterogeneous traits, candidate-position scoring, movement
// selection, and trace-deposition decisions.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "stigmem/errors.hpp"
#include "stigmem/geom.hpp"
#include "stigmem/memory.hpp"
#include "stigmem/rng.hpp"
#include "stigmem/traces.hpp"
#include "stigmem/world.hpp"

namespace stigmem {

// Compact per-agent visited-cell bitmap.
class VisitMask {
public:
    VisitMask() = default;
    VisitMask(int width, int height)
        : width_(width), bits_((std::size_t(width) * std::size_t(height) + 63) / 64) {}

    bool test(Pos p) const {
        const std::size_t i = index(p);
        return (bits_[i >> 6] >> (i & 63)) & 1u;
    }

    // Returns true when the cell was not yet marked.
    bool set(Pos p) {
        const std::size_t i = index(p);
        const std::uint64_t bit = std::uint64_t(1) << (i & 63);
        if (bits_[i >> 6] & bit) return false;
        bits_[i >> 6] |= bit;
        ++count_;
        return true;
    }

    long long count() const { return count_; }

private:
    std::size_t index(Pos p) const { return std::size_t(p.y) * std::size_t(width_) + std::size_t(p.x); }

    int width_ = 0;
    std::vector<std::uint64_t> bits_;
    long long count_ = 0;
};

// Agent head-counts per cell, kept current as agents move within a step.
class OccupancyGrid {
public:
    OccupancyGrid() = default;
    OccupancyGrid(int width, int height)
        : width_(width), height_(height), counts_(std::size_t(width) * std::size_t(height), 0) {}

    void add(Pos p) { ++counts_[index(p)]; }
    void remove(Pos p) { --counts_[index(p)]; }
    int at(Pos p) const { return counts_[index(p)]; }

    // Total agents within Chebyshev radius of `center` (center included).
    int count_in_range(const World& world, Pos center, int radius) const {
        int total = 0;
        world.for_each_in_range(center, radius, [&](Pos p) { total += counts_[index(p)]; });
        return total;
    }

private:
    std::size_t index(Pos p) const { return std::size_t(p.y) * std::size_t(width_) + std::size_t(p.x); }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint16_t> counts_;
};

struct TraitProfile {
    double exploration_tendency = 0.5;
    // Social-learning weight per trace category, indexed by Category.
    std::array<double, 4> social_learning{0.5, 0.5, 0.5, 0.5};
    double memory_trust = 0.5;
    double cooperation_tendency = 0.5;

    // Each trait ~ uniform[0.3, 1.0]; draw order is fixed.
    static TraitProfile sample(Rng& rng) {
        auto draw = [&rng] { return 0.3 + 0.7 * rng.uniform(); };
        TraitProfile t;
        t.exploration_tendency = draw();
        for (auto& b : t.social_learning) b = draw();
        t.memory_trust = draw();
        t.cooperation_tendency = draw();
        return t;
    }
};

enum class BehaviorState : std::uint8_t { exploring, foraging, returning, resting };

inline const char* behavior_name(BehaviorState s) {
    switch (s) {
        case BehaviorState::exploring: return "exploring";
        case BehaviorState::foraging: return "foraging";
        case BehaviorState::returning: return "returning";
        case BehaviorState::resting: return "resting";
    }
    return "?";
}

struct ScoreWeights {
    double task_foraging = 10.0;
    double task_exploring = 8.0;
    double task_returning = 10.0;
    double memory = 15.0;
    double noise_amplitude = 2.0;
    double danger_site_penalty = 50.0;
    double danger_trace_penalty = 10.0;
    int social_cap = 3;
};

struct EnergyParams {
    double max = 150.0;
    double initial = 100.0;
    double move_cost = 1.0;
    double trace_cost = 2.0;
    double base_cost = 0.5;
    double rest_regen = 4.0;
};

struct StateThresholds {
    double rest_below = 15.0;
    double forage_below = 60.0;
    double explore_certain_at = 100.0;
};

// Deposition rules.
inline constexpr double kFoodDepositEnergyFloor = 50.0;
inline constexpr double kDangerDepositEnergyCeil = 20.0;
inline constexpr int kSocialDepositMinNeighbors = 2;
inline constexpr double kExplorationDepositProbability = 0.30;

struct AgentState {
    int id = 0;
    Pos position{};
    Pos spawn{};
    double energy = 100.0;
    BehaviorState state = BehaviorState::exploring;
    bool carrying_food = false;
    MemoryStore memory;
    TraitProfile traits;
    VisitMask visited;
    int foods_delivered = 0;
    bool dead = false;
};

// One energy-ledger tick, clamped to [0, max]:
//   E' = E - move*m - trace*l - base + food*ate + regen*rested - damage
inline double apply_energy(AgentState& a, const EnergyParams& p, bool moved, bool deposited,
                           bool ate, bool rested, double food_gain, double danger_damage) {
    double e = a.energy;
    e -= p.move_cost * (moved ? 1.0 : 0.0);
    e -= p.trace_cost * (deposited ? 1.0 : 0.0);
    e -= p.base_cost;
    e += food_gain * (ate ? 1.0 : 0.0);
    e += p.rest_regen * (rested ? 1.0 : 0.0);
    e -= danger_damage;
    a.energy = std::clamp(e, 0.0, p.max);
    return a.energy;
}

// Behavioral cycle. Exhausted agents rest; anyone carrying food heads home;
// low energy forces foraging; in the middle band an agent keeps exploring
// with probability equal to its exploration tendency, otherwise it forages.
inline BehaviorState select_state(const AgentState& a, const StateThresholds& t, Rng& rng) {
    if (a.energy < t.rest_below) return BehaviorState::resting;
    if (a.carrying_food) return BehaviorState::returning;
    if (a.energy < t.forage_below) return BehaviorState::foraging;
    if (a.energy < t.explore_certain_at)
        return rng.uniform() < a.traits.exploration_tendency ? BehaviorState::exploring
                                                             : BehaviorState::foraging;
    return BehaviorState::exploring;
}

// Everything candidate scoring needs beyond the agent itself.
struct MoveContext {
    const World& world;
    const TraceField& traces;
    const TraceParams& trace_params;
    const ScoreWeights& weights;
    const OccupancyGrid& occupancy;
    bool memory_enabled = true;
    // Per-cell step at which a harvested food cell regrows; null means food
    // never depletes.
    const std::vector<long>* food_ready = nullptr;
    long now = 0;

    bool food_available(Pos p) const {
        if (!world.is_food(p)) return false;
        if (!food_ready) return true;
        const auto idx = std::size_t(p.y) * std::size_t(world.width()) + std::size_t(p.x);
        return (*food_ready)[idx] <= now;
    }
};

// Task desirability of standing at `p` for the agent's current state.
inline double task_desirability(const AgentState& a, Pos p, const MoveContext& ctx) {
    switch (a.state) {
        case BehaviorState::foraging:
            return ctx.food_available(p) ? 1.0 : 0.0;
        case BehaviorState::exploring:
            return a.visited.test(p) ? 0.0 : 1.0;
        case BehaviorState::returning:
            return 1.0 / (1.0 + ctx.world.distance(p, a.spawn));
        case BehaviorState::resting:
            return 0.0;
    }
    return 0.0;
}

inline double task_weight(const AgentState& a, const ScoreWeights& w) {
    switch (a.state) {
        case BehaviorState::foraging: return w.task_foraging;
        case BehaviorState::exploring: return w.task_exploring;
        case BehaviorState::returning: return w.task_returning;
        case BehaviorState::resting: return 0.0;
    }
    return 0.0;
}

// Memory recall is task-cued: a forager consults everything it knows, an
// explorer ignores food bookmarks (it is not shopping) but heeds hazards and
// scouting marks, and an agent hauling food home recalls nothing; any recall
// field would fight the flat homeward gradient and stall deliveries.
inline double recalled_memory_score(const AgentState& a, Pos p) {
    switch (a.state) {
        case BehaviorState::foraging: return a.memory.score(p);
        case BehaviorState::exploring: return a.memory.score_excluding(p, Category::food);
        case BehaviorState::returning: return 0.0;
        case BehaviorState::resting: return 0.0;
    }
    return 0.0;
}

// Weighted candidate score:
//   S = noise + W_task*T + W_mem*M + social - danger
// where M is the task-cued memory score, social attraction counts nearby
// agents (capped), and danger combines a flat on-site penalty with the
// danger-trace consensus.
inline double score_position(const AgentState& a, Pos p, const MoveContext& ctx,
                             double noise_draw) {
    if (ctx.world.is_obstacle(p)) throw argument_error("agent: cannot score an obstacle cell");
    const ScoreWeights& w = ctx.weights;

    const double noise = w.noise_amplitude * noise_draw;
    const double task = task_weight(a, w) * task_desirability(a, p, ctx);
    const double mem = ctx.memory_enabled ? w.memory * recalled_memory_score(a, p) : 0.0;

    int nearby = ctx.occupancy.count_in_range(ctx.world, p, 2);
    if (ctx.world.distance(a.position, p) <= 2) nearby -= 1; // exclude self
    const double social = a.traits.cooperation_tendency * std::min(nearby, w.social_cap);

    double danger = ctx.world.danger_damage(p) > 0 ? w.danger_site_penalty : 0.0;
    danger += w.danger_trace_penalty * ctx.traces.consensus(p, Category::danger, ctx.trace_params);

    return noise + task + mem + social - danger;
}

// Pick the best of {stay, non-obstacle Moore-1 neighbors}. Candidates are
// scored in lexicographic order with one noise draw each; a strict comparison
// makes the lexicographically smallest position win ties. Resting agents do
// not move, and a fully walled-in agent stays put.
inline Pos choose_move(const AgentState& a, const MoveContext& ctx, Rng& rng) {
    if (a.state == BehaviorState::resting) return a.position;

    std::vector<Pos> candidates;
    candidates.reserve(9);
    candidates.push_back(a.position);
    for (Pos p : ctx.world.neighbors(a.position, 1))
        if (!ctx.world.is_obstacle(p)) candidates.push_back(p);
    std::sort(candidates.begin(), candidates.end());

    Pos best = a.position;
    double best_score = -std::numeric_limits<double>::infinity();
    for (Pos p : candidates) {
        const double s = score_position(a, p, ctx, rng.uniform());
        if (s > best_score) {
            best_score = s;
            best = p;
        }
    }
    return best;
}

// Uniform choice among legal Moore-1 moves; stays put when walled in.
inline Pos choose_random_move(const AgentState& a, const World& world, Rng& rng) {
    if (a.state == BehaviorState::resting) return a.position;
    std::vector<Pos> candidates;
    candidates.reserve(8);
    for (Pos p : world.neighbors(a.position, 1))
        if (!world.is_obstacle(p)) candidates.push_back(p);
    if (candidates.empty()) return a.position;
    return candidates[std::size_t(rng.uniform_below(candidates.size()))];
}

// Which trace categories to drop this step, indexed by Category. Food marks
// need a carried payload and healthy energy; danger marks fire when energy
// runs critical; social marks need company; exploration marks are rolled at a
// fixed probability (the roll is always consumed to keep draw order stable).
inline std::array<bool, 4> deposition_decision(const AgentState& a, int nearby_agents, Rng& rng) {
    std::array<bool, 4> out{};
    out[std::size_t(Category::food)] = a.carrying_food && a.energy > kFoodDepositEnergyFloor;
    out[std::size_t(Category::danger)] = a.energy < kDangerDepositEnergyCeil;
    out[std::size_t(Category::social)] = nearby_agents >= kSocialDepositMinNeighbors;
    out[std::size_t(Category::exploration)] = rng.uniform() < kExplorationDepositProbability;
    return out;
}

// Deposit strength scales with energy inside the allowed band.
inline double deposit_strength(double energy, double energy_max) {
    return std::clamp(0.7 + 0.3 * energy / energy_max, kTraceStrengthMin, kTraceStrengthMax);
}

} // namespace stigmem
