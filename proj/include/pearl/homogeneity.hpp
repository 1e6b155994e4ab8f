#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pearl/coding.hpp"
#include "pearl/geom.hpp"
#include "pearl/necklace.hpp"

namespace pearl {

// I_w1 o ... o I_wm applied to x; the word need not be reduced.
Point group_move(const Necklace& nk, std::span<const int> word, const Point& x);

// Analytic differential of group_move at x (chain rule of inversion Jacobians).
Mat3 group_move_jacobian(const Necklace& nk, std::span<const int> word, const Point& x);

// Homeomorphism of the limit set sending p to q: rotation of the necklace
// coordinate by delta, conjugated through the coding at resolution `depth`.
struct LambdaHomeo {
    Point source;
    Point target;
    Coordinate delta;
    int depth = 1;
};

LambdaHomeo lambda_homeo(const Necklace& nk, const Point& p, const Point& q, int depth,
                         double tol = 1e-9);

// h(x) = point_from_coordinate(theta(x) + delta, depth).
Point apply(const Necklace& nk, const LambdaHomeo& h, const Point& x, double tol = 1e-9);

// The composite's delta: first a, then b.
LambdaHomeo compose(const LambdaHomeo& a, const LambdaHomeo& b);

struct HomeoReport {
    int depth = 0;
    std::size_t samples = 0;
    std::size_t in_limit_failures = 0;    // images outside the stage-depth necklace
    std::size_t injectivity_failures = 0; // two cells sent to one, or one cell to two
    std::uint64_t intervals = 0;
    std::uint64_t intervals_checked = 0;
    std::uint64_t surjectivity_failures = 0;  // cells not hit
    std::size_t adjacency_failures = 0;   // neighbouring samples whose images drift apart

    bool in_limit() const { return in_limit_failures == 0; }
    bool injective() const { return injectivity_failures == 0; }
    bool surjective() const { return surjectivity_failures == 0; }
    bool continuous() const { return adjacency_failures == 0; }
    bool passed() const { return in_limit() && injective() && surjective() && continuous(); }
};

using LimitMap = std::function<Point(const Point&)>;

// Checks a map of the limit set at the resolution of stage `depth` on
// `samples` limit points chosen by a base-2 van der Corput sequence:
// images stay in |T_depth|; the induced map on stage cells is injective;
// every stage cell is hit, or 2^16 evenly strided cells when there are more
// (preimages are taken through `inverse`, which must be thread safe); and
// neighbouring samples keep their cell offsets.
HomeoReport verify_map(const Necklace& nk, int depth, const LimitMap& map, const LimitMap& inverse,
                       std::size_t samples, double tol = 1e-9);

HomeoReport verify_homeo(const Necklace& nk, const LambdaHomeo& h, std::size_t samples,
                         double tol = 1e-9);

// The i-th sample coordinate: (2 v + 1) / 2^21 where v / 2^20 is the base-2
// van der Corput point of i. Odd numerators keep samples off cell endpoints.
Coordinate sample_coordinate(std::size_t i);

// Isometry x -> linear * x + shift that permutes the pearls:
// pearl i goes to pearl permutation[i].
struct RigidMap {
    Mat3 linear = Mat3::identity();
    Point shift;
    std::vector<int> permutation;

    Point operator()(const Point& x) const { return linear * x + shift; }
    Sphere operator()(const Sphere& s) const { return Sphere((*this)(s.center()), s.radius()); }
    bool proper() const { return determinant(linear) > 0.0; }
};

// Isometries of R^3 preserving the necklace while respecting its cyclic order
// (dihedral permutations). The identity is always first.
std::vector<RigidMap> stage_symmetries(const Necklace& nk, double tol = 1e-9);

// Address relabelled by a pearl permutation (0-based permutation, 1-based letters).
Address permute_address(const Address& w, std::span<const int> permutation);

}  // namespace pearl
