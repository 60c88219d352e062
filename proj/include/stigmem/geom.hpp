#pragma once
// Integer grid positions, lexicographic ordering, Chebyshev metric.

#include <cstddef>
#include <cstdint>
#include <functional>

namespace stigmem {

struct Pos {
    int x = 0;
    int y = 0;

    friend constexpr bool operator==(Pos a, Pos b) { return a.x == b.x && a.y == b.y; }
    friend constexpr bool operator!=(Pos a, Pos b) { return !(a == b); }
    // Lexicographic (x, then y): the canonical tie-break order everywhere.
    friend constexpr bool operator<(Pos a, Pos b) { return a.x != b.x ? a.x < b.x : a.y < b.y; }
};

constexpr int chebyshev(Pos a, Pos b) {
    const int dx = a.x > b.x ? a.x - b.x : b.x - a.x;
    const int dy = a.y > b.y ? a.y - b.y : b.y - a.y;
    return dx > dy ? dx : dy;
}

struct PosHash {
    std::size_t operator()(Pos p) const noexcept {
        const auto k = (std::uint64_t(std::uint32_t(p.x)) << 32) | std::uint32_t(p.y);
        return std::hash<std::uint64_t>{}(k);
    }
};

} // namespace stigmem
