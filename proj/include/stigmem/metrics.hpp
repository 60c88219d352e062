#pragma once
// Scalar evaluation metrics: the weighted performance score, memory-quality
// ratios, and the information entropy of per-agent unique knowledge.

#include <cmath>
#include <cstddef>
#include <vector>

#include "stigmem/errors.hpp"

namespace stigmem {

struct MetricWeights {
    double exploration = 1.0;
    double food = 15.0;
    double coordination = 5.0;
};

// Perf = w_e * coverage + w_f * food_per_agent + w_c * coordination_per_agent.
inline double performance_score(double exploration_coverage, double food_efficiency,
                                double coordination_events, MetricWeights w = {}) {
    if (exploration_coverage < 0.0 || exploration_coverage > 1.0)
        throw argument_error("metrics: exploration coverage must be in [0, 1]");
    if (food_efficiency < 0.0 || coordination_events < 0.0)
        throw argument_error("metrics: food efficiency and coordination events must be >= 0");
    return w.exploration * exploration_coverage + w.food * food_efficiency +
           w.coordination * coordination_events;
}

// A stored memory counts as fresh-and-strong below this age and above this
// strength.
inline constexpr double kFreshStrength = 0.3;
inline constexpr long kFreshMaxAge = 60;

struct MemoryQuality {
    double fresh_strong_fraction = 0.0;
    double efficiency = 0.0;
};

struct MemoryUsage {
    double strength = 0.0;
    long age = 0;
    bool used = false;
};

// fresh_strong_fraction: share of entries with strength > 0.3 and age < 60.
// efficiency: strength-weighted share of entries whose position the owner
// revisited after creating them. Empty input yields zeros.
inline MemoryQuality memory_quality(const std::vector<MemoryUsage>& entries) {
    MemoryQuality q;
    if (entries.empty()) return q;
    std::size_t fresh = 0;
    double total_strength = 0.0;
    double used_strength = 0.0;
    for (const auto& e : entries) {
        if (e.strength > kFreshStrength && e.age < kFreshMaxAge) ++fresh;
        total_strength += e.strength;
        if (e.used) used_strength += e.strength;
    }
    q.fresh_strong_fraction = double(fresh) / double(entries.size());
    q.efficiency = total_strength > 0.0 ? used_strength / total_strength : 0.0;
    return q;
}

// Entropy (nats) of the distribution p_i ~ unique_count_i + 1 across agents.
// The +1 smoothing keeps every agent on the support, so H is 0 for a single
// agent and log k when unique counts are equal.
inline double information_entropy(const std::vector<long long>& unique_counts) {
    const std::size_t k = unique_counts.size();
    if (k <= 1) return 0.0;
    double total = 0.0;
    for (long long u : unique_counts) total += double(u) + 1.0;
    double h = 0.0;
    for (long long u : unique_counts) {
        const double p = (double(u) + 1.0) / total;
        h -= p * std::log(p);
    }
    return h;
}

} // namespace stigmem
