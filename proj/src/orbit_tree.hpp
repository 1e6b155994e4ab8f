#pragma once

// Incremental orbit-tree frames shared by orbit, coding and homogeneity.
//
// With M_w = I_j1 o ... o I_jk the word map of w = w'.l, the reflection in the
// pearl sphere S(w) = M_w'(S_l) is M_w' I_l M_w'^-1, hence M_w = I_S(w) o M_w'.
// So ball(w.j) = M_w(B_j) is a single inversion in S(w) of
//   ball(w'.j)  when j != last(w')  (a sibling of w), or
//   S(w')       when j == last(w')  (the parent sphere, as a set).

#include <optional>
#include <utility>
#include <vector>

#include "pearl/necklace.hpp"
#include "pearl/orbit.hpp"

namespace pearl::detail {

struct Frame {
    int last = 0;                              // letter of this node, 0 at the root
    std::optional<Sphere> sphere;              // empty at the root
    std::vector<std::optional<Sphere>> kids;   // indexed by letter 1..n, kids[last] empty
};

inline Frame root_frame(const Necklace& nk) {
    Frame f;
    f.kids.resize(static_cast<std::size_t>(nk.size()) + 1);
    for (int j = 1; j <= nk.size(); ++j) f.kids[static_cast<std::size_t>(j)] = nk.pearl(j - 1);
    return f;
}

// Frame of child `letter` of `parent`, children included.
inline Frame expand(const Frame& parent, int letter) {
    const auto n = parent.kids.size() - 1;
    Frame f;
    f.last = letter;
    f.sphere = *parent.kids[static_cast<std::size_t>(letter)];
    f.kids.resize(n + 1);
    for (std::size_t j = 1; j <= n; ++j) {
        if (static_cast<int>(j) == letter) continue;
        const Sphere& source =
            static_cast<int>(j) == parent.last ? *parent.sphere : *parent.kids[j];
        f.kids[j] = invert_sphere(*f.sphere, source);
    }
    return f;
}

inline Frame frame_of(const Necklace& nk, const Address& w) {
    Frame f = root_frame(nk);
    for (int letter : w.letters) f = expand(f, letter);
    return f;
}

// Pairs of spheres classified by a sweep along x. Tangency tolerance for a
// pair is tol * (ra + rb).
struct TangencyScan {
    std::vector<std::pair<std::size_t, std::size_t>> tangent;  // sorted, i < j
    std::vector<int> degree;
    std::uint64_t overlapping = 0;
    double max_overlap = 0.0;
};

TangencyScan scan_tangencies(const std::vector<Sphere>& spheres, double tol);

}  // namespace pearl::detail
