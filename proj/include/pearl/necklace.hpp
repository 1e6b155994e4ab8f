#pragma once

#include <span>
#include <vector>

#include "pearl/geom.hpp"

namespace pearl {

// Closed polyline; the last vertex joins back to the first.
class PolygonalKnot {
public:
    // Throws std::invalid_argument for fewer than 3 vertices or a repeated
    // consecutive vertex.
    explicit PolygonalKnot(std::vector<Point> vertices);

    const std::vector<Point>& vertices() const noexcept { return vertices_; }
    std::size_t size() const noexcept { return vertices_.size(); }
    // Length of the edge from vertex i to vertex i+1 (cyclically).
    double edge_length(std::size_t i) const;

private:
    std::vector<Point> vertices_;
};

// Cyclic chain of n >= 3 round spheres, consecutive ones externally tangent
// and all others disjoint. Only obtainable through validate().
class Necklace {
public:
    const std::vector<Sphere>& pearls() const noexcept { return pearls_; }
    // tangency_points()[i] is where pearl i touches pearl i+1 (mod n).
    const std::vector<Point>& tangency_points() const noexcept { return tangency_points_; }
    int size() const noexcept { return static_cast<int>(pearls_.size()); }
    const Sphere& pearl(int i) const { return pearls_.at(static_cast<std::size_t>(i)); }
    double tolerance() const noexcept { return tolerance_; }
    // Largest |center| + radius; a length scale for relative tolerances.
    double extent() const noexcept { return extent_; }

    friend Necklace validate(std::vector<Sphere> pearls, double tol);

private:
    Necklace() = default;

    std::vector<Sphere> pearls_;
    std::vector<Point> tangency_points_;
    double tolerance_ = 0.0;
    double extent_ = 0.0;
};

// Non-consecutive pearls must clear each other by this multiple of tol.
inline constexpr double kDisjointMargin = 10.0;

Necklace validate(std::vector<Sphere> pearls, double tol);

// Symmetric necklace whose tangency points are the vertices of the regular
// n-gon inscribed in the circle of radius R in the xy-plane. Every pearl is
// orthogonal to that circle, so it is the limit set.
Necklace unknot_necklace(int n, double R);

// One pearl of radius L/2 centered at each vertex of an equilateral closed
// polygon (edge length L); consecutive pearls touch at edge midpoints.
Necklace necklace_from_polygon(const PolygonalKnot& knot, double tol);

// Resample a densely sampled closed curve into `count` equal chords. The chord
// length is found by bisection so that the chain closes up to `tol`.
PolygonalKnot resample_equal_chords(std::span<const Point> closed_curve, int count,
                                    double tol = 1e-9);

// Dense polyline of the (p,q) torus knot on the torus with the given radii.
// `phase` shifts the parameter origin.
std::vector<Point> torus_knot_curve(int p, int q, double major, double minor, int samples,
                                    double phase = 0.0);

// Polygonal template: tangency points in cyclic pearl order.
PolygonalKnot template_of(const Necklace& nk);

}  // namespace pearl
