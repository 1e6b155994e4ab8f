#pragma once

#include "pearl/necklace.hpp"

namespace fixtures {

// Frozen trefoil: the (2,3) torus knot on a torus of radii 2 and 1, sampled
// densely with a phase that breaks its rotational symmetry, then resampled to
// 40 equal chords. Validates at tol 1e-9 and nests cleanly through stage 3.
inline constexpr int kTrefoilPearls = 40;
inline constexpr double kTrefoilMajor = 2.0;
inline constexpr double kTrefoilMinor = 1.0;
inline constexpr int kTrefoilSamples = 4000;
inline constexpr double kTrefoilPhase = 0.1;

inline const pearl::Necklace& trefoil() {
    static const pearl::Necklace nk = pearl::necklace_from_polygon(
        pearl::resample_equal_chords(
            pearl::torus_knot_curve(2, 3, kTrefoilMajor, kTrefoilMinor, kTrefoilSamples, kTrefoilPhase),
            kTrefoilPearls),
        1e-9);
    return nk;
}

inline pearl::Necklace unknot(int n) { return pearl::unknot_necklace(n, 1.0); }

}  // namespace fixtures
