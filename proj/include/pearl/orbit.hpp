#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pearl/geom.hpp"
#include "pearl/necklace.hpp"

namespace pearl {

// Word in the generator indices 1..n. A reduced word (no letter repeated
// back to back) names the pearl of stage |word|; the empty word is the root.
struct Address {
    std::vector<int> letters;

    std::size_t size() const noexcept { return letters.size(); }
    bool empty() const noexcept { return letters.empty(); }
    int last() const { return letters.back(); }
    int operator[](std::size_t i) const { return letters[i]; }
    Address child(int letter) const;
    Address prefix(std::size_t length) const;

    friend auto operator<=>(const Address&, const Address&) = default;
    friend bool operator==(const Address&, const Address&) = default;
};

bool is_reduced(std::span<const int> word, int n);
// "1.2.1"; the root prints as "()".
std::string to_string(const Address& a);
// Inverse of to_string; accepts '.', '-' or ',' separators.
Address parse_address(const std::string& text);

enum class Chirality { plain, mirror };

// Pearl of address w = j1...jk: the image of ball B_jk under I_j1 o ... o I_j(k-1).
// Its template copy is mirrored iff k-1 is odd.
struct PearlNode {
    Address address;
    Sphere ball;
    Chirality parity;
};

Chirality pearl_chirality(std::size_t word_length);

struct StageNecklace {
    int k = 0;
    std::vector<PearlNode> nodes;  // lexicographic by address
};

struct LimitCloud {
    std::vector<Point> points;  // leaf-ball centers, lexicographic by address
    double epsilon = 0.0;
    std::vector<Address> addresses;
    std::vector<double> radii;
    std::size_t depth_capped = 0;  // leaves cut by max_depth, not by radius
};

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

struct EnumerateOptions {
    double epsilon = 1e-2;
    int max_depth = 40;
    std::uint64_t budget = kDefaultBudget;
    unsigned threads = 0;  // 0: hardware concurrency
};

// n (n-1)^(k-1); throws BudgetExceeded on 64-bit overflow.
std::uint64_t stage_count(int n, int k);

// Children of a node, or the n stage-1 pearls for the empty address.
std::vector<PearlNode> children(const Necklace& nk, const Address& w);
std::vector<PearlNode> children(const Necklace& nk, const PearlNode& node);

// Ball of a non-empty reduced address, built by walking the orbit tree.
Sphere ball_of(const Necklace& nk, const Address& w);

// Word map I_w1 o ... o I_wm applied to x (the last letter acts first). The
// word need not be reduced. Letters are 1-based pearl indices.
Point apply_word(const Necklace& nk, std::span<const int> word, const Point& x);

StageNecklace stage(const Necklace& nk, int k, std::uint64_t budget = kDefaultBudget);

struct ParityCounts {
    std::uint64_t plain = 0;
    std::uint64_t mirror = 0;
    std::uint64_t total() const { return plain + mirror; }
};

// Template copies composing K_{k+1}: one per reduced word of length <= k,
// the empty word included; mirrored iff the word length is odd.
ParityCounts word_parity_counts(int n, int k);
ParityCounts parity_counts(const Necklace& nk, int k);

LimitCloud enumerate_pruned(const Necklace& nk, const EnumerateOptions& options);

struct NestingReport {
    int k = 0;
    std::uint64_t children_checked = 0;
    std::uint64_t containment_violations = 0;
    double max_containment_violation = 0.0;  // max(|dc| + r_child - r_parent, 0)
    std::uint64_t stage_pearls = 0;
    std::uint64_t tangent_pairs = 0;
    std::uint64_t degree_violations = 0;   // stage-k pearls without exactly 2 tangent mates
    std::uint64_t overlapping_pairs = 0;   // pairs neither tangent nor disjoint
    double max_overlap = 0.0;

    bool ok() const {
        return containment_violations == 0 && degree_violations == 0 && overlapping_pairs == 0;
    }
};

// Checks |T_{k+1}| inside |T_k| pearl by pearl, and the stage-k pattern:
// each pearl tangent to exactly two others, all other pairs disjoint.
// Tangency is judged with tol scaled by the radius sum of the pair.
NestingReport nesting_check(const Necklace& nk, int k, double tol,
                            std::uint64_t budget = kDefaultBudget);

// Largest pearl radius at stage k, by branch and bound over the orbit tree.
double max_radius(const Necklace& nk, int k, std::uint64_t budget = kDefaultBudget);

// Symmetric Hausdorff distance between finite point sets (grid accelerated,
// equal to the brute-force value).
double hausdorff(std::span<const Point> a, std::span<const Point> b);
double hausdorff(const LimitCloud& a, const LimitCloud& b);
// max over a of the distance to the nearest point of b.
double directed_hausdorff(std::span<const Point> a, std::span<const Point> b);

}  // namespace pearl
