#pragma once
// Environmental trace field: per-cell, per-category deposits that decay,
// expire, and aggregate into a consensus strength. Traces do not diffuse;
// they stay where they were dropped.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "stigmem/errors.hpp"
#include "stigmem/geom.hpp"
#include "stigmem/memory.hpp"

namespace stigmem {

struct TraceDeposit {
    double strength = 0.0;
    int agent_id = -1;
    long deposited_at = 0;
};

struct TraceParams {
    // Per-step multiplicative decay, indexed by Category. Deposits are
    // transient signals: together with removal at min_strength these rates
    // put the effective per-step field decay near 0.2, so a mark outlives
    // its author's visit by roughly ten steps, not the whole run.
    std::array<double, 4> decay{0.85, 0.90, 0.75, 0.80};
    // Deposits at or below this strength are removed during decay.
    double min_strength = 0.1;
    // Maximum deposit age in steps, indexed by Category.
    std::array<int, 4> max_age{70, 100, 40, 50};
    // Consensus grows by this much per extra distinct depositor...
    double consensus_amplification = 0.3;
    // ...up to this cap.
    double consensus_cap = 2.0;
    // A lone deposit only counts at this discount of its strength.
    double solo_discount = 0.8;
};

// Deposit strengths are bounded by design: weak marks are not worth reading
// and the scale keeps consensus arithmetic stable.
inline constexpr double kTraceStrengthMin = 0.7;
inline constexpr double kTraceStrengthMax = 1.0;

class TraceField {
public:
    TraceField() : TraceField(1, 1) {}
    TraceField(int width, int height)
        : width_(width), height_(height), cells_(std::size_t(width) * std::size_t(height)) {}

    int width() const { return width_; }
    int height() const { return height_; }

    // Append a deposit. A repeat deposit by the same agent at the same
    // cell/category replaces its previous one (strength and time refresh), so
    // each deposit list holds distinct agents.
    void deposit(Pos pos, Category cat, double sigma, int agent_id, long t) {
        if (sigma < kTraceStrengthMin || sigma > kTraceStrengthMax)
            throw argument_error("traces: deposit strength must be in [0.7, 1.0]");
        auto& list = at(pos, cat);
        for (auto& d : list) {
            if (d.agent_id == agent_id) {
                d.strength = sigma;
                d.deposited_at = t;
                return;
            }
        }
        list.push_back({sigma, agent_id, t});
    }

    const std::vector<TraceDeposit>& deposits(Pos pos, Category cat) const {
        return at(pos, cat);
    }

    // One decay tick: every strength is multiplied by its category rate, then
    // deposits at or below the minimum strength or past their age limit drop.
    void decay_step(const TraceParams& params, long now) {
        for (auto& cell : cells_) {
            for (std::size_t c = 0; c < 4; ++c) {
                auto& list = cell[c];
                if (list.empty()) continue;
                const double factor = params.decay[c];
                for (auto& d : list) d.strength = std::max(0.0, d.strength * factor);
                std::erase_if(list, [&](const TraceDeposit& d) {
                    return d.strength <= params.min_strength ||
                           now - d.deposited_at > long(params.max_age[c]);
                });
            }
        }
    }

    // Collective consensus at a cell: with two or more distinct depositors the
    // signal amplifies with their count (capped); a lone deposit counts at a
    // discount of its strength; an empty cell reads zero.
    double consensus(Pos pos, Category cat, const TraceParams& params) const {
        const auto& list = at(pos, cat);
        const std::size_t n = list.size();
        if (n == 0) return 0.0;
        if (n >= 2)
            return std::min(params.consensus_cap,
                            1.0 + params.consensus_amplification * double(n - 1));
        return params.solo_discount * list.front().strength;
    }

    double total_mass() const {
        double sum = 0.0;
        for (const auto& cell : cells_)
            for (const auto& list : cell)
                for (const auto& d : list) sum += d.strength;
        return sum;
    }

    std::size_t deposit_count() const {
        std::size_t n = 0;
        for (const auto& cell : cells_)
            for (const auto& list : cell) n += list.size();
        return n;
    }

    // Visit all deposits mutably in deterministic (cell, category, slot) order.
    template <class F>
    void for_each_deposit(F&& f) {
        for (std::size_t i = 0; i < cells_.size(); ++i) {
            const Pos pos{int(i % std::size_t(width_)), int(i / std::size_t(width_))};
            for (std::size_t c = 0; c < 4; ++c)
                for (auto& d : cells_[i][c]) f(pos, Category(c), d);
        }
    }

    // Visit per-cell, per-category totals (skipping empty lists) in
    // deterministic order; used by the snapshot exporter.
    template <class F>
    void for_each_cell_summary(F&& f) const {
        for (std::size_t i = 0; i < cells_.size(); ++i) {
            const Pos pos{int(i % std::size_t(width_)), int(i / std::size_t(width_))};
            for (std::size_t c = 0; c < 4; ++c) {
                const auto& list = cells_[i][c];
                if (list.empty()) continue;
                double total = 0.0;
                for (const auto& d : list) total += d.strength;
                f(pos, Category(c), total, list.size());
            }
        }
    }

private:
    std::vector<TraceDeposit>& at(Pos pos, Category cat) {
        return cells_[index(pos)][std::size_t(cat)];
    }
    const std::vector<TraceDeposit>& at(Pos pos, Category cat) const {
        return cells_[index(pos)][std::size_t(cat)];
    }
    std::size_t index(Pos p) const {
        return std::size_t(p.y) * std::size_t(width_) + std::size_t(p.x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::array<std::vector<TraceDeposit>, 4>> cells_;
};

// Base strength of a memory entry formed from a trace, before consensus and
// social-learning weighting.
inline constexpr double kTraceMemoryBase = 0.5;

// Fold a read trace into an agent's memory: the candidate strength is
// base * consensus * beta (capped at 1), and candidates that land at or below
// the prune threshold are discarded without touching the store.
inline bool integrate_trace_into_memory(MemoryStore& store, const CategoryParams& params,
                                        Pos pos, Category cat, double consensus, double beta,
                                        long now) {
    if (consensus < 0) throw argument_error("traces: consensus must be >= 0");
    const double strength = std::min(1.0, kTraceMemoryBase * consensus * beta);
    if (strength <= params.strength_threshold) return false;
    store.add_or_reinforce({pos, cat, now, strength, 0, false}, params, now);
    return true;
}

} // namespace stigmem
