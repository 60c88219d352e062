#pragma once
// Robustness perturbations: mid-run agent removal, multiplicative trace
// corruption, wholesale food relocation, and the pre/post resilience ratio.
// The operations are templated over the model so they slot into the engine
// without a circular include; each draws only from the model's dedicated
// perturbation stream, and a zero fraction consumes no randomness at all.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "stigmem/errors.hpp"
#include "stigmem/geom.hpp"
#include "stigmem/rng.hpp"

namespace stigmem {

enum class PerturbKind { none, agent_failure, trace_corruption, dynamic_food };

inline const char* perturb_name(PerturbKind k) {
    switch (k) {
        case PerturbKind::none: return "none";
        case PerturbKind::agent_failure: return "agent_failure";
        case PerturbKind::trace_corruption: return "trace_corruption";
        case PerturbKind::dynamic_food: return "dynamic_food";
    }
    return "?";
}

struct PerturbConfig {
    PerturbKind kind = PerturbKind::none;
    double fraction = 0.0;
    int trigger_step = 50;
    // Steps on each side of the trigger used for the resilience ratio.
    int window = 25;
};

inline constexpr double kCorruptionFactorMin = 0.1;
inline constexpr double kCorruptionFactorMax = 0.5;

// Remove ceil(fraction * alive) uniformly chosen agents, always leaving at
// least one. A small slack absorbs floating error in fractions like 1/6.
template <class ModelT>
void remove_agents(ModelT& model, double fraction, Rng& rng) {
    if (fraction < 0.0 || fraction >= 1.0)
        throw argument_error("perturb: removal fraction must be in [0, 1)");
    if (fraction == 0.0) return;
    const std::size_t alive = model.agents.size();
    if (alive == 0) return;
    std::size_t k = std::size_t(std::ceil(fraction * double(alive) - 1e-9));
    k = std::min(k, alive - 1);
    if (k == 0) return;

    std::vector<std::size_t> order(alive);
    std::iota(order.begin(), order.end(), std::size_t(0));
    rng.partial_shuffle(order, k);
    std::vector<bool> doomed(alive, false);
    for (std::size_t i = 0; i < k; ++i) doomed[order[i]] = true;
    for (std::size_t i = 0; i < alive; ++i)
        if (doomed[i]) model.retire_agent(model.agents[i]);
    std::size_t w = 0;
    for (std::size_t i = 0; i < alive; ++i) {
        if (doomed[i]) continue;
        if (w != i) model.agents[w] = std::move(model.agents[i]);
        ++w;
    }
    model.agents.resize(w);
}

// Weaken each deposit independently with probability `fraction` by a factor
// drawn uniformly from [factor_min, factor_max]. Deposits pushed under the
// minimum strength disappear at the next decay tick.
template <class ModelT>
void corrupt_traces(ModelT& model, double fraction, Rng& rng,
                    double factor_min = kCorruptionFactorMin,
                    double factor_max = kCorruptionFactorMax) {
    if (fraction < 0.0 || fraction > 1.0)
        throw argument_error("perturb: corruption fraction must be in [0, 1]");
    if (factor_min < 0.0 || factor_max < factor_min)
        throw argument_error("perturb: corruption factor range invalid");
    if (fraction == 0.0) return;
    model.traces.for_each_deposit([&](Pos, Category, TraceDeposit& d) {
        if (rng.uniform() < fraction) {
            const double factor = factor_min + (factor_max - factor_min) * rng.uniform();
            d.strength = std::max(0.0, d.strength * factor);
        }
    });
}

// Re-place every food source over cells free of obstacles and danger zones,
// keeping the cell count and the patch structure of the original layout.
template <class ModelT>
void relocate_food(ModelT& model, Rng& rng) {
    const std::size_t n = model.world.food_sites().size();
    if (n == 0) return;
    std::vector<Pos> pool;
    for (int x = 0; x < model.world.width(); ++x)
        for (int y = 0; y < model.world.height(); ++y) {
            const Pos p{x, y};
            if (!model.world.is_obstacle(p) && model.world.danger_damage(p) == 0)
                pool.push_back(p);
        }
    if (pool.size() < n) throw config_error("perturb: not enough free cells to relocate food");
    auto sites =
        std::decay_t<decltype(model.world)>::grow_food_patches(model.world.config(), int(n),
                                                               std::move(pool), rng);
    model.world.replace_food_sites(std::move(sites));
    model.reset_food_readiness();
}

// Post/pre performance ratio over the fixed windows; undefined (NaN) when the
// pre-window performance is not positive.
inline double resilience_score(double pre_performance, double post_performance) {
    if (!(pre_performance > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return post_performance / pre_performance;
}

} // namespace stigmem
