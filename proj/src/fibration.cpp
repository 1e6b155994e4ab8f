#include "pearl/fibration.hpp"

#include <stdexcept>

#include "pearl/orbit.hpp"

namespace pearl {

namespace {

void check(int n, int k) {
    if (n < 3) throw std::invalid_argument("fiber accounting needs at least 3 pearls");
    if (k < 1) throw std::invalid_argument("stage must be at least 1");
}

}  // namespace

FiberStats fiber_stats(int n, int g, int k) {
    check(n, k);
    if (g < 1) throw std::invalid_argument("base genus must be at least 1");
    const ParityCounts parity = word_parity_counts(n, k);
    FiberStats s;
    s.k = k;
    s.base_genus = g;
    s.copies_plain = parity.plain;
    s.copies_mirror = parity.mirror;
    s.total_copies = parity.total();
    const auto copies = static_cast<std::int64_t>(s.total_copies);
    s.euler_char = 1 - 2 * static_cast<std::int64_t>(g) * copies;
    s.genus = static_cast<std::uint64_t>(g) * s.total_copies;
    return s;
}

std::uint64_t arc_count(int n, int k) {
    check(n, k);
    return word_parity_counts(n, k).total() - 1;
}

}  // namespace pearl
