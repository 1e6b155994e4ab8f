#pragma once

#include <cstdint>

namespace pearl {

// Connected-sum bookkeeping for the fiber surfaces of a fibered template.
// Copy k of the stage surface is one genus-g, one-boundary surface per
// reduced word of length <= k; consecutive copies are joined along arcs.
struct FiberStats {
    int k = 0;
    std::uint64_t copies_plain = 0;
    std::uint64_t copies_mirror = 0;
    std::uint64_t total_copies = 0;
    std::int64_t euler_char = 0;
    std::uint64_t genus = 0;
    int base_genus = 0;
};

// Throws std::invalid_argument unless n >= 3, g >= 1 and k >= 1.
FiberStats fiber_stats(int n, int g, int k);

// Joining arcs: total_copies - 1.
std::uint64_t arc_count(int n, int k);

}  // namespace pearl
