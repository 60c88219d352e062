#pragma once
// Per-agent memory: four categories of decaying, reinforceable entries with
// capacity eviction, threshold/age pruning, and a near-field spatial score.

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "stigmem/errors.hpp"
#include "stigmem/geom.hpp"

namespace stigmem {

enum class Category : std::uint8_t { food = 0, danger = 1, social = 2, exploration = 3 };

inline constexpr std::array<Category, 4> all_categories{Category::food, Category::danger,
                                                        Category::social, Category::exploration};

inline const char* category_name(Category c) {
    switch (c) {
        case Category::food: return "food";
        case Category::danger: return "danger";
        case Category::social: return "social";
        case Category::exploration: return "exploration";
    }
    return "?";
}

// Contribution sign of a category in the spatial score: danger repels,
// everything else attracts with category-specific weight.
inline constexpr double category_score_sign(Category c) {
    switch (c) {
        case Category::food: return 1.0;
        case Category::danger: return -1.0;
        case Category::social: return 0.2;
        case Category::exploration: return 0.3;
    }
    return 0.0;
}

struct CategoryParams {
    // Per-step multiplicative decay, indexed by Category. Danger persists
    // longest, social fades fastest.
    std::array<double, 4> decay{0.985, 0.998, 0.95, 0.97};
    // Entries at or below this strength are dropped at the next prune.
    double strength_threshold = 0.2;
    // Maximum entry age in steps, indexed by Category.
    std::array<int, 4> max_age{80, 100, 40, 60};
    // Reinforcement multiplies strength by (1 + reinforcement_gain).
    double reinforcement_gain = 0.2;
    // Reinforcement never grows an entry past this strength. Capping at the
    // insertion ceiling keeps any single entry's pull below the task weights,
    // so remembered sites bias movement without freezing it.
    double strength_cap = 1.0;
};

struct MemoryEntry {
    Pos position{};
    Category category = Category::food;
    long created_at = 0;
    double strength = 0.0;
    int reinforcements = 0;
    // Owner stood on `position` at some step after the entry existed.
    bool revisited = false;
};

class MemoryStore {
public:
    explicit MemoryStore(std::size_t capacity = 50) : capacity_(capacity) {}

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    std::size_t capacity() const { return capacity_; }
    void set_capacity(std::size_t c) { capacity_ = c; }
    const std::vector<MemoryEntry>& entries() const { return entries_; }

    // Multiply every entry's strength by decay^dt. Removals happen in prune.
    void decay(const CategoryParams& params, int dt) {
        if (dt < 0) throw argument_error("memory: decay interval must be >= 0");
        if (dt == 0) return;
        std::array<double, 4> factor;
        for (std::size_t c = 0; c < 4; ++c)
            factor[c] = dt == 1 ? params.decay[c] : std::pow(params.decay[c], double(dt));
        for (auto& e : entries_) e.strength *= factor[std::size_t(e.category)];
    }

    // Insert `candidate`, or reinforce the entry already at the same
    // (position, category): strength scales by (1 + gain), the reinforcement
    // count increments, and the creation time refreshes. When the store then
    // exceeds capacity, the weakest entry goes (ties: oldest creation time,
    // then lexicographic position).
    void add_or_reinforce(MemoryEntry candidate, const CategoryParams& params, long now) {
        if (!(candidate.strength > 0.0) || candidate.strength > 1.0)
            throw argument_error("memory: candidate strength must be in (0, 1]");
        for (auto& e : entries_) {
            if (e.category == candidate.category && e.position == candidate.position) {
                e.strength = std::min(params.strength_cap,
                                      e.strength * (1.0 + params.reinforcement_gain));
                e.reinforcements += 1;
                e.created_at = now;
                return;
            }
        }
        candidate.created_at = now;
        candidate.reinforcements = 0;
        candidate.revisited = false;
        entries_.push_back(candidate);
        if (entries_.size() > capacity_) evict_weakest();
    }

    // Drop entries at or below the strength threshold or past their category
    // age limit.
    void prune(const CategoryParams& params, long now) {
        std::erase_if(entries_, [&](const MemoryEntry& e) {
            if (e.strength <= params.strength_threshold) return true;
            return now - e.created_at > long(params.max_age[std::size_t(e.category)]);
        });
    }

    // Signed near-field score at `pos`: entries within Chebyshev distance 2
    // contribute sign(category) * strength / (1 + distance).
    double score(Pos pos) const {
        double total = 0.0;
        for (const auto& e : entries_) {
            const int d = chebyshev(e.position, pos);
            if (d > 2) continue;
            total += category_score_sign(e.category) * e.strength / double(1 + d);
        }
        return total;
    }

    // Same sum restricted to a single category.
    double score(Pos pos, Category only) const {
        double total = 0.0;
        for (const auto& e : entries_) {
            if (e.category != only) continue;
            const int d = chebyshev(e.position, pos);
            if (d > 2) continue;
            total += category_score_sign(e.category) * e.strength / double(1 + d);
        }
        return total;
    }

    // Same sum with one category left out.
    double score_excluding(Pos pos, Category skipped) const {
        double total = 0.0;
        for (const auto& e : entries_) {
            if (e.category == skipped) continue;
            const int d = chebyshev(e.position, pos);
            if (d > 2) continue;
            total += category_score_sign(e.category) * e.strength / double(1 + d);
        }
        return total;
    }

    // Drop every entry of `cat` at `pos` (memory contradicted by observation).
    void erase_at(Pos pos, Category cat) {
        std::erase_if(entries_, [&](const MemoryEntry& e) {
            return e.category == cat && e.position == pos;
        });
    }

    // Mark entries at `pos` older than `now` as revisited by their owner.
    void mark_revisited(Pos pos, long now) {
        for (auto& e : entries_)
            if (e.position == pos && e.created_at < now) e.revisited = true;
    }

    std::size_t count(Category c) const {
        std::size_t n = 0;
        for (const auto& e : entries_)
            if (e.category == c) ++n;
        return n;
    }

private:
    void evict_weakest() {
        std::size_t victim = 0;
        for (std::size_t i = 1; i < entries_.size(); ++i) {
            const auto& e = entries_[i];
            const auto& v = entries_[victim];
            if (e.strength < v.strength ||
                (e.strength == v.strength &&
                 (e.created_at < v.created_at ||
                  (e.created_at == v.created_at && e.position < v.position))))
                victim = i;
        }
        entries_.erase(entries_.begin() + std::ptrdiff_t(victim));
    }

    std::vector<MemoryEntry> entries_;
    std::size_t capacity_;
};

} // namespace stigmem
