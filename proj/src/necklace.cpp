#include "pearl/necklace.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "pearl/error.hpp"

namespace pearl {

PolygonalKnot::PolygonalKnot(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() < 3) throw std::invalid_argument("polygonal knot needs at least 3 vertices");
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (vertices_[i] == vertices_[(i + 1) % vertices_.size()]) {
            throw std::invalid_argument("polygonal knot has a repeated consecutive vertex");
        }
    }
}

double PolygonalKnot::edge_length(std::size_t i) const {
    return distance(vertices_[i % size()], vertices_[(i + 1) % size()]);
}

Necklace validate(std::vector<Sphere> pearls, double tol) {
    const int n = static_cast<int>(pearls.size());
    if (n < 3) {
        throw TooFewPearls("a necklace needs at least 3 pearls, got " + std::to_string(n));
    }
    if (!(tol >= 0.0)) throw std::invalid_argument("tolerance must be non-negative");

    Necklace nk;
    nk.tangency_points_.reserve(pearls.size());
    for (int i = 0; i < n; ++i) {
        const int j = (i + 1) % n;
        const auto t = tangency(pearls[i], pearls[j], tol);
        if (const auto* et = std::get_if<ExternallyTangent>(&t)) {
            nk.tangency_points_.push_back(et->point);
        } else {
            std::ostringstream os;
            os.precision(17);
            os << "pearls " << i << " and " << j << " are not externally tangent (center distance "
               << distance(pearls[i].center(), pearls[j].center()) << ", radius sum "
               << pearls[i].radius() + pearls[j].radius() << ')';
            throw NotTangent(os.str(), {i, j});
        }
    }

    for (int i = 0; i < n; ++i) {
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // consecutive through the wrap
            const double gap = distance(pearls[i].center(), pearls[j].center()) -
                               pearls[i].radius() - pearls[j].radius();
            if (gap < kDisjointMargin * tol || gap <= 0.0) {
                std::ostringstream os;
                os.precision(17);
                os << "pearls " << i << " and " << j << " are not disjoint (gap " << gap << ')';
                throw NotDisjoint(os.str(), {i, j});
            }
        }
    }

    // A pearl passing through another pearl's center would send part of the
    // orbit to infinity.
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double off = std::abs(distance(pearls[j].center(), pearls[i].center()) -
                                        pearls[j].radius());
            if (off <= kPoleTolerance * pearls[i].radius()) {
                throw PoleRisk("pearl " + std::to_string(j) + " passes through the center of pearl " +
                                   std::to_string(i),
                               {i, j});
            }
        }
    }

    double extent = 0.0;
    for (const auto& s : pearls) extent = std::max(extent, norm(s.center()) + s.radius());
    nk.extent_ = extent;
    nk.tolerance_ = tol;
    nk.pearls_ = std::move(pearls);
    return nk;
}

Necklace unknot_necklace(int n, double R) {
    if (n < 3) throw TooFewPearls("unknot necklace needs n >= 3");
    if (!(R > 0.0)) throw std::invalid_argument("circle radius must be positive");
    const double half = std::numbers::pi / n;
    const double center_radius = R / std::cos(half);
    const double pearl_radius = R * std::tan(half);
    std::vector<Sphere> pearls;
    pearls.reserve(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
        const double a = 2.0 * half * m;
        pearls.emplace_back(Point{center_radius * std::cos(a), center_radius * std::sin(a), 0.0},
                            pearl_radius);
    }
    return validate(std::move(pearls), 1e-9 * R);
}

Necklace necklace_from_polygon(const PolygonalKnot& knot, double tol) {
    const std::size_t n = knot.size();
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += knot.edge_length(i);
    mean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(knot.edge_length(i) - mean) > tol) {
            std::ostringstream os;
            os.precision(17);
            os << "edge " << i << " has length " << knot.edge_length(i) << ", mean is " << mean;
            throw UnequalEdges(os.str(), {static_cast<int>(i)});
        }
    }
    std::vector<Sphere> pearls;
    pearls.reserve(n);
    for (const auto& v : knot.vertices()) pearls.emplace_back(v, 0.5 * mean);
    return validate(std::move(pearls), tol);
}

namespace {

// Cursor on a closed polyline: segment index plus parameter in [0,1].
struct CurveCursor {
    std::size_t segment = 0;
    double t = 0.0;
    double arc = 0.0;  // arc length travelled since the start, may exceed one loop
};

class ClosedCurve {
public:
    explicit ClosedCurve(std::span<const Point> pts) : pts_(pts.begin(), pts.end()) {
        for (std::size_t i = 0; i < pts_.size(); ++i) total_ += seg_length(i);
    }

    std::size_t size() const { return pts_.size(); }
    double total() const { return total_; }
    const Point& at(std::size_t i) const { return pts_[i % pts_.size()]; }
    double seg_length(std::size_t i) const { return distance(at(i), at(i + 1)); }
    Point position(const CurveCursor& c) const {
        return at(c.segment) + (at(c.segment + 1) - at(c.segment)) * c.t;
    }

    // Advance to the first point further along the curve at Euclidean
    // distance `chord` from the current position. Returns false if no such
    // point exists within two loops.
    bool step(CurveCursor& c, double chord) const {
        const Point origin = position(c);
        const std::size_t limit = 2 * pts_.size();
        double t0 = c.t;
        std::size_t seg = c.segment;
        double arc = c.arc;
        for (std::size_t count = 0; count < limit; ++count) {
            const Point a = at(seg);
            const Point b = at(seg + 1);
            const double len = seg_length(seg);
            if (distance(b, origin) >= chord) {
                // |a + t (b - a) - origin|^2 = chord^2, larger root.
                const Point d = b - a;
                const Point f = a - origin;
                const double qa = dot(d, d);
                const double qb = 2.0 * dot(f, d);
                const double qc = dot(f, f) - chord * chord;
                const double disc = std::max(0.0, qb * qb - 4.0 * qa * qc);
                double t = (-qb + std::sqrt(disc)) / (2.0 * qa);
                t = std::clamp(t, t0, 1.0);
                c.arc = arc + (t - t0) * len;
                c.segment = seg % pts_.size();
                c.t = t;
                return true;
            }
            arc += (1.0 - t0) * len;
            t0 = 0.0;
            ++seg;
        }
        return false;
    }

private:
    std::vector<Point> pts_;
    double total_ = 0.0;
};

}  // namespace

PolygonalKnot resample_equal_chords(std::span<const Point> closed_curve, int count, double tol) {
    if (count < 3) throw std::invalid_argument("need at least 3 chords");
    if (closed_curve.size() < 3) throw std::invalid_argument("curve needs at least 3 points");
    const ClosedCurve curve(closed_curve);

    // Arc length covered by `count` chords of length L, minus one loop.
    // Monotone in L; its root closes the chain exactly.
    auto residual = [&](double L, std::vector<Point>* out) {
        CurveCursor c;
        if (out) out->push_back(curve.position(c));
        for (int i = 0; i < count; ++i) {
            if (!curve.step(c, L)) return curve.total();
            if (out && i + 1 < count) out->push_back(curve.position(c));
        }
        return c.arc - curve.total();
    };

    double hi = curve.total() / count;  // chords no longer than arcs: residual >= 0
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-3 * tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (residual(mid, nullptr) < 0.0) lo = mid;
        else hi = mid;
    }
    std::vector<Point> vertices;
    vertices.reserve(static_cast<std::size_t>(count));
    residual(0.5 * (lo + hi), &vertices);
    return PolygonalKnot(std::move(vertices));
}

std::vector<Point> torus_knot_curve(int p, int q, double major, double minor, int samples,
                                    double phase) {
    if (samples < 3) throw std::invalid_argument("need at least 3 samples");
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        const double t = phase + 2.0 * std::numbers::pi * i / samples;
        const double rho = major + minor * std::cos(q * t);
        pts.push_back({rho * std::cos(p * t), rho * std::sin(p * t), minor * std::sin(q * t)});
    }
    return pts;
}

PolygonalKnot template_of(const Necklace& nk) { return PolygonalKnot(nk.tangency_points()); }

}  // namespace pearl
