#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <vector>

#include "pearl/geom.hpp"
#include "pearl/necklace.hpp"
#include "pearl/orbit.hpp"

namespace pearl {

// Exact rational position on the necklace circle, reduced mod 1.
class Coordinate {
public:
    Coordinate() = default;
    // num / den taken mod 1; den > 0.
    Coordinate(std::uint64_t num, std::uint64_t den);

    std::uint64_t num() const noexcept { return num_; }
    std::uint64_t den() const noexcept { return den_; }
    double value() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend Coordinate operator+(const Coordinate& a, const Coordinate& b);
    friend Coordinate operator-(const Coordinate& a, const Coordinate& b);
    friend bool operator==(const Coordinate&, const Coordinate&) = default;
    friend std::strong_ordering operator<=>(const Coordinate& a, const Coordinate& b);

private:
    std::uint64_t num_ = 0;
    std::uint64_t den_ = 1;
};

// Half-open interval [position / count, (position + 1) / count).
struct CoordinateInterval {
    std::uint64_t position = 0;
    std::uint64_t count = 1;

    Coordinate lo() const { return {position, count}; }
    Coordinate midpoint() const { return {2 * position + 1, 2 * count}; }
    double lo_value() const { return static_cast<double>(position) / static_cast<double>(count); }
    double hi_value() const { return static_cast<double>(position + 1) / static_cast<double>(count); }
    bool contains(const Coordinate& theta) const;
};

// Stage-k pearls in the cyclic order of their tangency graph.
struct CyclicOrder {
    int k = 0;
    std::vector<Address> sequence;
    std::map<Address, std::size_t> positions;

    std::size_t position(const Address& a) const { return positions.at(a); }
};

// Traverses the tangency graph of the stage-k pearls, starting at the pearl
// 1.2.1.2... and moving first to the lexicographically smaller neighbour.
// Throws NotACycle unless the graph is one 2-regular cycle.
CyclicOrder cyclic_order(const Necklace& nk, int k, double tol = 1e-9,
                         std::uint64_t budget = kDefaultBudget);

// A stage pearl with its coordinate interval and the two tangency points it
// shares with its predecessor (entry) and successor (exit) in coordinate order.
struct OrientedPearl {
    Address address;
    Sphere ball;
    CoordinateInterval interval;
    Point entry;
    Point exit;
};

// Stage-k pearls sorted by coordinate.
std::vector<OrientedPearl> oriented_stage(const Necklace& nk, int k,
                                          std::uint64_t budget = kDefaultBudget);

// Letters of the children of w in coordinate order. Children form a chain
// (l+1, ..., l-1 mod n) for last letter l; the direction is read off from
// which end child touches the entry point of w.
std::vector<int> child_order(const Necklace& nk, const Address& w);

// Addresses of the stage-`depth` pearls containing x (two at a tangency point),
// sorted. Membership allows tol times the pearl radius plus a rounding floor
// proportional to the necklace extent. Throws NotInLimit when x leaves |T_k|
// at some stage.
std::vector<Address> locate(const Necklace& nk, const Point& x, int depth, double tol = 1e-9);

// Limit point of the coding w followed by its last two letters repeated
// forever (for |w| = 1 the tail alternates w1 with the next pearl). It lies in
// the ball of every finite extension of w; `extend` only names how far the
// caller intends to refine and does not change the point.
Point point_of(const Necklace& nk, const Address& w, int extend = 20);

// The ball of w extended by `extend` letters of its alternating tail.
Sphere extended_ball(const Necklace& nk, const Address& w, int extend);

CoordinateInterval necklace_coordinate(const Necklace& nk, const Address& w);

// Coordinate of a point at resolution `depth`: the shared endpoint of the two
// intervals for a tangency point, the interval midpoint otherwise.
Coordinate coordinate_of(const Necklace& nk, const Point& x, int depth, double tol = 1e-9);

// Limit point at coordinate theta. Exact (a tangency point) when theta is an
// interval endpoint; otherwise refined past `depth` until the enclosing ball
// is negligibly small.
Point point_from_coordinate(const Necklace& nk, const Coordinate& theta, int depth);

}  // namespace pearl
