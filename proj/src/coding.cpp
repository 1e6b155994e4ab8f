#include "pearl/coding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "orbit_tree.hpp"
#include "pearl/error.hpp"

namespace pearl {

using u128 = unsigned __int128;

Coordinate::Coordinate(std::uint64_t num, std::uint64_t den) {
    if (den == 0) throw std::invalid_argument("coordinate denominator must be positive");
    num %= den;
    const std::uint64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
}

Coordinate operator+(const Coordinate& a, const Coordinate& b) {
    const std::uint64_t g = std::gcd(a.den_, b.den_);
    const u128 l = static_cast<u128>(a.den_ / g) * b.den_;
    if (l > std::numeric_limits<std::uint64_t>::max() / 2) {
        throw std::overflow_error("coordinate denominators too large to add exactly");
    }
    const auto L = static_cast<std::uint64_t>(l);
    const u128 num = static_cast<u128>(a.num_) * (L / a.den_) + static_cast<u128>(b.num_) * (L / b.den_);
    return Coordinate(static_cast<std::uint64_t>(num % L), L);
}

Coordinate operator-(const Coordinate& a, const Coordinate& b) {
    return a + Coordinate(b.den_ - b.num_, b.den_);
}

std::strong_ordering operator<=>(const Coordinate& a, const Coordinate& b) {
    return static_cast<u128>(a.num_) * b.den_ <=> static_cast<u128>(b.num_) * a.den_;
}

bool CoordinateInterval::contains(const Coordinate& theta) const {
    const u128 scaled = static_cast<u128>(theta.num()) * count;
    return scaled >= static_cast<u128>(position) * theta.den() &&
           scaled < static_cast<u128>(position + 1) * theta.den();
}

namespace {

constexpr double kTangentRelTol = 1e-9;
// Absolute slack for rounding in point coordinates, in units of the necklace extent.
constexpr double kRoundingFloor = 1e-14;

// A node of the orbit tree together with its coordinate data.
struct Strand {
    Address address;
    detail::Frame frame;
    Point entry;
    Point exit;
    std::uint64_t position = 0;  // meaningful while the stage count fits 64 bits
};

struct OrientedKid {
    int letter;
    Point entry;
    Point exit;
};

double surface_miss(const Point& p, const Sphere& s) {
    return std::abs(distance(p, s.center()) - s.radius()) / s.radius();
}

std::vector<OrientedKid> oriented_kids(const Necklace& nk, const Strand& s) {
    const int n = nk.size();
    std::vector<OrientedKid> kids;
    kids.reserve(static_cast<std::size_t>(n));
    const auto& tp = nk.tangency_points();
    if (s.frame.last == 0) {
        for (int m = 1; m <= n; ++m) {
            kids.push_back({m, tp[static_cast<std::size_t>((m - 2 + n) % n)],
                            tp[static_cast<std::size_t>(m - 1)]});
        }
        return kids;
    }
    const int l = s.frame.last;
    std::vector<int> chain;
    for (int i = 1; i < n; ++i) chain.push_back((l - 1 + i) % n + 1);
    auto ball = [&](int letter) -> const Sphere& { return *s.frame.kids[static_cast<std::size_t>(letter)]; };
    if (surface_miss(s.entry, ball(chain.back())) < surface_miss(s.entry, ball(chain.front()))) {
        std::reverse(chain.begin(), chain.end());
    }
    for (std::size_t i = 0; i < chain.size(); ++i) {
        const Point entry = i == 0 ? s.entry : contact_point(ball(chain[i - 1]), ball(chain[i]));
        const Point exit =
            i + 1 == chain.size() ? s.exit : contact_point(ball(chain[i]), ball(chain[i + 1]));
        kids.push_back({chain[i], entry, exit});
    }
    return kids;
}

Strand root_strand(const Necklace& nk) {
    Strand s;
    s.frame = detail::root_frame(nk);
    return s;
}

Strand step(const Strand& s, const std::vector<OrientedKid>& kids, std::size_t index, int n) {
    Strand c;
    c.address = s.address.child(kids[index].letter);
    c.frame = detail::expand(s.frame, kids[index].letter);
    c.entry = kids[index].entry;
    c.exit = kids[index].exit;
    const std::uint64_t fan = s.frame.last == 0 ? static_cast<std::uint64_t>(n)
                                                : static_cast<std::uint64_t>(n - 1);
    c.position = s.position * fan + index;
    return c;
}

std::size_t index_of(const std::vector<OrientedKid>& kids, int letter) {
    for (std::size_t i = 0; i < kids.size(); ++i) {
        if (kids[i].letter == letter) return i;
    }
    throw std::invalid_argument("letter " + std::to_string(letter) + " is not a child here");
}

void require_address(const Necklace& nk, const Address& w) {
    if (w.empty()) throw std::invalid_argument("address must be non-empty");
    if (!is_reduced(w.letters, nk.size())) {
        throw std::invalid_argument("address " + to_string(w) + " is not reduced");
    }
}

// Limit of the infinite word a.b.a.b...: the fixed point inside B_a of I_a I_b.
// For tangent pearls this is their tangency point.
Point alternating_limit(const Necklace& nk, int a, int b) {
    const int n = nk.size();
    const auto& tp = nk.tangency_points();
    if (b == a % n + 1) return tp[static_cast<std::size_t>(a - 1)];
    if (a == b % n + 1) return tp[static_cast<std::size_t>(b - 1)];
    // Points on the line of centres that are inverse pairs for both spheres:
    // D s^2 - (ra^2 + D^2 - rb^2) s + D ra^2 = 0, smaller root lies in B_a.
    const Sphere& A = nk.pearl(a - 1);
    const Sphere& B = nk.pearl(b - 1);
    const Point axis = B.center() - A.center();
    const double D = norm(axis);
    const double ra2 = A.radius() * A.radius();
    const double beta = ra2 + D * D - B.radius() * B.radius();
    const double disc = std::max(0.0, beta * beta - 4.0 * D * D * ra2);
    const double s = 2.0 * D * ra2 / (beta + std::sqrt(disc));
    return A.center() + axis * (s / D);
}

Address alternating_extension(const Address& w, int n, int extend) {
    Address out = w;
    int a = 0;
    int b = 0;
    if (w.size() == 1) {
        a = w[0];
        b = a % n + 1;
    } else {
        a = w[w.size() - 2];
        b = w[w.size() - 1];
    }
    for (int i = 0; i < extend; ++i) {
        out.letters.push_back(out.last() == a ? b : a);
    }
    return out;
}

}  // namespace

std::vector<int> child_order(const Necklace& nk, const Address& w) {
    if (!w.empty()) require_address(nk, w);
    Strand s = root_strand(nk);
    for (int letter : w.letters) {
        const auto kids = oriented_kids(nk, s);
        s = step(s, kids, index_of(kids, letter), nk.size());
    }
    std::vector<int> letters;
    for (const auto& k : oriented_kids(nk, s)) letters.push_back(k.letter);
    return letters;
}

CyclicOrder cyclic_order(const Necklace& nk, int k, double tol, std::uint64_t budget) {
    const StageNecklace st = stage(nk, k, budget);
    std::vector<Sphere> spheres;
    spheres.reserve(st.nodes.size());
    for (const auto& node : st.nodes) spheres.push_back(node.ball);
    const detail::TangencyScan scan = detail::scan_tangencies(spheres, tol);

    std::vector<std::vector<std::size_t>> adj(spheres.size());
    for (const auto& [i, j] : scan.tangent) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    for (std::size_t i = 0; i < adj.size(); ++i) {
        if (adj[i].size() != 2) {
            throw NotACycle("stage " + std::to_string(k) + " pearl " + to_string(st.nodes[i].address) +
                                " has " + std::to_string(adj[i].size()) + " tangent neighbours",
                            {static_cast<int>(i)});
        }
    }

    Address start;
    for (int i = 0; i < k; ++i) start.letters.push_back(i % 2 == 0 ? 1 : 2);
    const auto it = std::lower_bound(st.nodes.begin(), st.nodes.end(), start,
                                     [](const PearlNode& node, const Address& a) { return node.address < a; });
    const auto first = static_cast<std::size_t>(it - st.nodes.begin());

    CyclicOrder order;
    order.k = k;
    order.sequence.reserve(spheres.size());
    std::vector<bool> seen(spheres.size(), false);
    // Lexicographic order of addresses is index order in the stage listing.
    std::size_t prev = first;
    std::size_t cur = first;
    for (std::size_t step_count = 0; step_count < spheres.size(); ++step_count) {
        if (seen[cur]) {
            throw NotACycle("stage " + std::to_string(k) + " tangency graph splits into several cycles");
        }
        seen[cur] = true;
        order.positions.emplace(st.nodes[cur].address, order.sequence.size());
        order.sequence.push_back(st.nodes[cur].address);
        std::size_t next = 0;
        if (step_count == 0) {
            next = std::min(adj[cur][0], adj[cur][1]);
        } else {
            next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
        }
        prev = cur;
        cur = next;
    }
    if (cur != first) throw NotACycle("stage " + std::to_string(k) + " tangency graph does not close");
    return order;
}

std::vector<OrientedPearl> oriented_stage(const Necklace& nk, int k, std::uint64_t budget) {
    if (k < 1) throw std::invalid_argument("stage index must be >= 1");
    const std::uint64_t count = stage_count(nk.size(), k);
    if (count > budget) {
        throw BudgetExceeded("stage " + std::to_string(k) + " has " + std::to_string(count) +
                             " pearls, budget is " + std::to_string(budget));
    }
    std::vector<OrientedPearl> out;
    out.reserve(count);
    const int n = nk.size();
    auto descend = [&](auto&& self, const Strand& s) -> void {
        const auto kids = oriented_kids(nk, s);
        const bool leaf_level = static_cast<int>(s.address.size()) + 1 == k;
        for (std::size_t i = 0; i < kids.size(); ++i) {
            if (leaf_level) {
                const std::uint64_t fan = s.frame.last == 0 ? static_cast<std::uint64_t>(n)
                                                            : static_cast<std::uint64_t>(n - 1);
                out.push_back({s.address.child(kids[i].letter),
                               *s.frame.kids[static_cast<std::size_t>(kids[i].letter)],
                               {s.position * fan + i, count}, kids[i].entry, kids[i].exit});
            } else {
                self(self, step(s, kids, i, n));
            }
        }
    };
    descend(descend, root_strand(nk));
    return out;
}

std::vector<Address> locate(const Necklace& nk, const Point& x, int depth, double tol) {
    if (depth < 1) throw std::invalid_argument("locate depth must be >= 1");
    struct Candidate {
        Address address;
        detail::Frame frame;
    };
    struct Hit {
        double score;
        std::size_t parent;
        int letter;
    };
    std::vector<Candidate> current;
    current.push_back({Address{}, detail::root_frame(nk)});
    const int n = nk.size();
    const double floor = kRoundingFloor * nk.extent();
    for (int m = 1; m <= depth; ++m) {
        std::vector<Hit> hits;
        for (std::size_t c = 0; c < current.size(); ++c) {
            const auto& f = current[c].frame;
            for (int j = 1; j <= n; ++j) {
                if (j == f.last) continue;
                const Sphere& s = *f.kids[static_cast<std::size_t>(j)];
                const double excess = distance(x, s.center()) - s.radius();
                if (excess <= tol * s.radius() + floor) hits.push_back({excess / s.radius(), c, j});
            }
        }
        if (hits.empty()) {
            throw NotInLimit("point leaves the stage-" + std::to_string(m) + " necklace");
        }
        // A point lies on at most two pearls of a stage (at their tangency).
        std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.score < b.score; });
        if (hits.size() > 2) hits.resize(2);
        // Deep pearls can sit closer than tol without touching; a second hit
        // only counts when the two pearls are tangent.
        if (hits.size() == 2) {
            const auto sphere = [&](const Hit& h) {
                return *current[h.parent].frame.kids[static_cast<std::size_t>(h.letter)];
            };
            const Sphere a = sphere(hits[0]);
            const Sphere b = sphere(hits[1]);
            const double sum = a.radius() + b.radius();
            if (std::abs(distance(a.center(), b.center()) - sum) > kTangentRelTol * sum) hits.resize(1);
        }
        std::vector<Candidate> next;
        for (const auto& h : hits) {
            Candidate c;
            c.address = current[h.parent].address.child(h.letter);
            if (m < depth) c.frame = detail::expand(current[h.parent].frame, h.letter);
            next.push_back(std::move(c));
        }
        current = std::move(next);
    }
    std::vector<Address> out;
    for (auto& c : current) out.push_back(std::move(c.address));
    std::sort(out.begin(), out.end());
    return out;
}

Point point_of(const Necklace& nk, const Address& w, int extend) {
    require_address(nk, w);
    if (extend < 0) throw std::invalid_argument("extend must be non-negative");
    const int n = nk.size();
    if (w.size() == 1) return alternating_limit(nk, w[0], w[0] % n + 1);
    const int a = w[w.size() - 2];
    const int b = w[w.size() - 1];
    const Address prefix = w.prefix(w.size() - 2);
    return apply_word(nk, prefix.letters, alternating_limit(nk, a, b));
}

Sphere extended_ball(const Necklace& nk, const Address& w, int extend) {
    require_address(nk, w);
    if (extend < 0) throw std::invalid_argument("extend must be non-negative");
    if (w.size() + static_cast<std::size_t>(extend) > 100000) {
        throw BudgetExceeded("extended word is too long");
    }
    return ball_of(nk, alternating_extension(w, nk.size(), extend));
}

CoordinateInterval necklace_coordinate(const Necklace& nk, const Address& w) {
    require_address(nk, w);
    const std::uint64_t count = stage_count(nk.size(), static_cast<int>(w.size()));
    Strand s = root_strand(nk);
    for (int letter : w.letters) {
        const auto kids = oriented_kids(nk, s);
        s = step(s, kids, index_of(kids, letter), nk.size());
    }
    return {s.position, count};
}

Coordinate coordinate_of(const Necklace& nk, const Point& x, int depth, double tol) {
    const auto found = locate(nk, x, depth, tol);
    if (found.size() == 1) return necklace_coordinate(nk, found[0]).midpoint();
    const CoordinateInterval a = necklace_coordinate(nk, found[0]);
    const CoordinateInterval b = necklace_coordinate(nk, found[1]);
    if ((a.position + 1) % a.count == b.position) return b.lo();
    if ((b.position + 1) % b.count == a.position) return a.lo();
    throw NotInLimit("point touches two pearls " + to_string(found[0]) + " and " + to_string(found[1]) +
                     " that are not neighbours");
}

Point point_from_coordinate(const Necklace& nk, const Coordinate& theta, int depth) {
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    const int n = nk.size();
    constexpr int kMaxRefinement = 200;
    const double floor_radius = 1e-13 * nk.extent();

    // frac = theta scaled into the current interval, kept as num / den.
    const u128 den = theta.den();
    u128 num = theta.num();
    Strand s = root_strand(nk);
    for (int level = 1;; ++level) {
        const std::uint64_t fan = level == 1 ? static_cast<std::uint64_t>(n) : static_cast<std::uint64_t>(n - 1);
        num *= fan;
        const auto index = static_cast<std::size_t>(num / den);
        num -= static_cast<u128>(index) * den;
        const auto kids = oriented_kids(nk, s);
        s = step(s, kids, index, n);
        if (level < depth) continue;
        if (num == 0) return s.entry;
        if (s.frame.sphere->radius() < floor_radius || level >= depth + kMaxRefinement) {
            return s.frame.sphere->center();
        }
    }
}

}  // namespace pearl
