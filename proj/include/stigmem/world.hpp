#pragma once
// Static grid environment: food, obstacles, danger zones, neighborhood queries.
//
// Site placement samples uniformly without replacement in the order
// food -> obstacles -> danger, so the three site sets are disjoint by
// construction. A world is a pure function of (config, seed): identical
// inputs reproduce identical worlds bit for bit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "stigmem/errors.hpp"
#include "stigmem/geom.hpp"
#include "stigmem/rng.hpp"

namespace stigmem {

enum class Topology { bounded, torus };

inline const char* topology_name(Topology t) {
    return t == Topology::bounded ? "bounded" : "torus";
}

struct WorldConfig {
    int width = 15;
    int height = 15;
    // Fractions of all grid cells. Must sum below 1; the remainder is open
    // ground. Defaults sit at the midpoints of the surveyed bands.
    double food_fraction = 0.125;
    double obstacle_fraction = 0.065;
    double danger_fraction = 0.04;
    // Energy drained per step spent on a danger cell; each site gets a fixed
    // value drawn from this inclusive range.
    int danger_damage_min = 5;
    int danger_damage_max = 15;
    // Energy granted per food pickup. Calibrated low enough that a pickup
    // does not bounce the forager back into the exploring band.
    double food_energy_value = 6.0;
    // Mean cells per food source. Food cells cluster into contiguous patches
    // (a 15x15 grid at the default fraction yields 11 sources); 1 scatters
    // them uniformly.
    double food_patch_size = 2.5;
    // Steps a food cell needs to regrow after a pickup. 0 makes food
    // inexhaustible.
    int food_regen_steps = 12;
    Topology topology = Topology::bounded;

    void validate() const {
        if (width < 5 || height < 5)
            throw config_error("world: grid must be at least 5x5");
        if (food_fraction < 0 || obstacle_fraction < 0 || danger_fraction < 0)
            throw config_error("world: site fractions must be non-negative");
        if (food_fraction + obstacle_fraction + danger_fraction >= 1.0)
            throw config_error("world: site fractions must sum below 1");
        if (danger_damage_min < 0 || danger_damage_max < danger_damage_min)
            throw config_error("world: invalid danger damage range");
        if (food_energy_value < 0)
            throw config_error("world: food energy value must be non-negative");
        if (food_patch_size < 1.0)
            throw config_error("world: food patch size must be >= 1");
        if (food_regen_steps < 0)
            throw config_error("world: food regeneration must be >= 0 steps");
    }
};

class World {
public:
    // Lay out food cells as contiguous patches over the candidate cells:
    // round(count / patch_size) patch seeds are drawn uniformly, then each
    // patch grows one uniformly chosen Moore-adjacent free cell at a time.
    // Cells that cannot be grown (walled-in patches) spill into fresh seeds,
    // so the returned set always has exactly `count` cells.
    static std::vector<Pos> grow_food_patches(const WorldConfig& config, int count,
                                              std::vector<Pos> candidates, Rng& rng) {
        std::vector<Pos> chosen;
        if (count <= 0) return chosen;
        if (std::size_t(count) > candidates.size())
            throw config_error("world: not enough free cells for food placement");
        chosen.reserve(std::size_t(count));

        const int n_patches =
            std::clamp<int>(int(std::lround(double(count) / config.food_patch_size)), 1, count);
        std::vector<int> target(std::size_t(n_patches), count / n_patches);
        for (int i = 0; i < count % n_patches; ++i) target[std::size_t(i)] += 1;

        auto take = [&](std::size_t idx) {
            const Pos p = candidates[idx];
            candidates[idx] = candidates.back();
            candidates.pop_back();
            chosen.push_back(p);
            return p;
        };

        std::vector<Pos> patch;
        for (int i = 0; i < n_patches; ++i) {
            if (candidates.empty()) break;
            patch.clear();
            patch.push_back(take(std::size_t(rng.uniform_below(candidates.size()))));
            for (int grown = 1; grown < target[std::size_t(i)]; ++grown) {
                // Frontier: free candidates Moore-adjacent to the patch, in
                // deterministic order.
                std::vector<std::size_t> frontier;
                for (std::size_t c = 0; c < candidates.size(); ++c)
                    for (Pos p : patch)
                        if (chebyshev(candidates[c], p) == 1) {
                            frontier.push_back(c);
                            break;
                        }
                if (frontier.empty()) break;  // walled in; spill below
                patch.push_back(take(frontier[std::size_t(rng.uniform_below(frontier.size()))]));
            }
        }
        // Spill: any shortfall restarts as fresh single-cell seeds.
        while (int(chosen.size()) < count && !candidates.empty())
            take(std::size_t(rng.uniform_below(candidates.size())));
        return chosen;
    }

    static World generate(const WorldConfig& config, std::uint64_t seed) {
        config.validate();
        World w;
        w.config_ = config;
        const int n = config.width * config.height;
        w.obstacle_.assign(std::size_t(n), 0);
        w.food_.assign(std::size_t(n), 0);
        w.danger_.assign(std::size_t(n), 0);

        const auto n_food = site_count(config.food_fraction, n);
        const auto n_obstacle = site_count(config.obstacle_fraction, n);
        const auto n_danger = site_count(config.danger_fraction, n);

        std::vector<Pos> cells;
        cells.reserve(std::size_t(n));
        for (int x = 0; x < config.width; ++x)
            for (int y = 0; y < config.height; ++y)
                cells.push_back({x, y});

        Rng rng(seed);
        w.food_sites_ = grow_food_patches(config, n_food, cells, rng);
        std::sort(w.food_sites_.begin(), w.food_sites_.end());
        for (Pos p : w.food_sites_) w.food_[w.index(p)] = 1;

        // Obstacles and danger zones sample uniformly without replacement
        // over the remaining cells.
        std::erase_if(cells, [&](Pos p) { return w.food_[w.index(p)] != 0; });
        rng.partial_shuffle(cells, std::size_t(n_obstacle + n_danger));
        w.obstacle_sites_.assign(cells.begin(), cells.begin() + n_obstacle);
        w.danger_sites_.assign(cells.begin() + n_obstacle, cells.begin() + n_obstacle + n_danger);
        std::sort(w.obstacle_sites_.begin(), w.obstacle_sites_.end());
        std::sort(w.danger_sites_.begin(), w.danger_sites_.end());

        for (Pos p : w.obstacle_sites_) w.obstacle_[w.index(p)] = 1;
        // Damage values are drawn in sorted site order so they depend only on
        // (config, seed).
        for (Pos p : w.danger_sites_)
            w.danger_[w.index(p)] = rng.uniform_int(config.danger_damage_min, config.danger_damage_max);
        return w;
    }

    const WorldConfig& config() const { return config_; }
    int width() const { return config_.width; }
    int height() const { return config_.height; }
    int cell_count() const { return config_.width * config_.height; }
    int free_cell_count() const { return cell_count() - int(obstacle_sites_.size()); }

    bool in_bounds(Pos p) const {
        return p.x >= 0 && p.x < config_.width && p.y >= 0 && p.y < config_.height;
    }

    bool is_obstacle(Pos p) const { return obstacle_[index(p)] != 0; }
    bool is_food(Pos p) const { return food_[index(p)] != 0; }
    // Damage per step on this cell; 0 when it is not a danger site.
    int danger_damage(Pos p) const { return danger_[index(p)]; }

    const std::vector<Pos>& food_sites() const { return food_sites_; }
    const std::vector<Pos>& obstacle_sites() const { return obstacle_sites_; }
    const std::vector<Pos>& danger_sites() const { return danger_sites_; }

    // Cells carrying no feature at all; spawn and relocation pool.
    std::vector<Pos> featureless_cells() const {
        std::vector<Pos> out;
        for (int x = 0; x < config_.width; ++x)
            for (int y = 0; y < config_.height; ++y) {
                const Pos p{x, y};
                if (!is_obstacle(p) && !is_food(p) && danger_damage(p) == 0) out.push_back(p);
            }
        return out;
    }

    // Swap in a new food layout (dynamic-food perturbation). Sites must stay
    // disjoint from obstacles and danger zones.
    void replace_food_sites(std::vector<Pos> sites) {
        for (Pos p : sites) {
            if (!in_bounds(p)) throw argument_error("world: food site outside grid");
            if (is_obstacle(p) || danger_damage(p) > 0)
                throw argument_error("world: food site overlaps another feature");
        }
        std::fill(food_.begin(), food_.end(), std::uint8_t(0));
        std::sort(sites.begin(), sites.end());
        food_sites_ = std::move(sites);
        for (Pos p : food_sites_) food_[index(p)] = 1;
    }

    Pos wrap(Pos p) const {
        p.x = ((p.x % config_.width) + config_.width) % config_.width;
        p.y = ((p.y % config_.height) + config_.height) % config_.height;
        return p;
    }

    // Chebyshev distance, wrap-aware under torus topology.
    int distance(Pos a, Pos b) const {
        if (config_.topology == Topology::bounded) return chebyshev(a, b);
        int dx = std::abs(a.x - b.x);
        int dy = std::abs(a.y - b.y);
        dx = std::min(dx, config_.width - dx);
        dy = std::min(dy, config_.height - dy);
        return std::max(dx, dy);
    }

    // Moore neighborhood of Chebyshev radius `radius`, excluding `pos` itself.
    // Bounded topology clips at the grid edge; torus wraps and always yields
    // (2r+1)^2 - 1 positions. Obstacles are included; callers filter.
    std::vector<Pos> neighbors(Pos pos, int radius) const {
        if (!in_bounds(pos)) throw argument_error("world: position outside grid");
        if (radius < 1) throw argument_error("world: neighborhood radius must be >= 1");
        if (config_.topology == Topology::torus &&
            2 * radius + 1 > std::min(config_.width, config_.height))
            throw argument_error("world: torus neighborhood wraps onto itself");
        std::vector<Pos> out;
        out.reserve(std::size_t((2 * radius + 1) * (2 * radius + 1) - 1));
        for (int dx = -radius; dx <= radius; ++dx)
            for (int dy = -radius; dy <= radius; ++dy) {
                if (dx == 0 && dy == 0) continue;
                Pos p{pos.x + dx, pos.y + dy};
                if (config_.topology == Topology::torus) {
                    out.push_back(wrap(p));
                } else if (in_bounds(p)) {
                    out.push_back(p);
                }
            }
        return out;
    }

    // Visit every in-range cell (center included) in deterministic order.
    template <class F>
    void for_each_in_range(Pos center, int radius, F&& f) const {
        for (int dx = -radius; dx <= radius; ++dx)
            for (int dy = -radius; dy <= radius; ++dy) {
                Pos p{center.x + dx, center.y + dy};
                if (config_.topology == Topology::torus) {
                    f(wrap(p));
                } else if (in_bounds(p)) {
                    f(p);
                }
            }
    }

    friend bool operator==(const World& a, const World& b) {
        return a.food_sites_ == b.food_sites_ && a.obstacle_sites_ == b.obstacle_sites_ &&
               a.danger_sites_ == b.danger_sites_ && a.danger_ == b.danger_;
    }

private:
    static int site_count(double fraction, int cells) {
        return int(std::lround(fraction * cells));
    }

    std::size_t index(Pos p) const {
        return std::size_t(p.y) * std::size_t(config_.width) + std::size_t(p.x);
    }

    WorldConfig config_;
    std::vector<std::uint8_t> obstacle_;
    std::vector<std::uint8_t> food_;
    std::vector<int> danger_;
    std::vector<Pos> food_sites_;
    std::vector<Pos> obstacle_sites_;
    std::vector<Pos> danger_sites_;
};

} // namespace stigmem
