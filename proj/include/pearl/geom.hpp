#pragma once

#include <array>
#include <cmath>
#include <variant>

namespace pearl {

// A point of the R^3 chart of S^3. The point at infinity is never represented.
struct Point {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Point& operator+=(const Point& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Point& operator-=(const Point& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Point& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    friend constexpr Point operator+(Point a, const Point& b) { return a += b; }
    friend constexpr Point operator-(Point a, const Point& b) { return a -= b; }
    friend constexpr Point operator-(const Point& a) { return {-a.x, -a.y, -a.z}; }
    friend constexpr Point operator*(Point a, double s) { return a *= s; }
    friend constexpr Point operator*(double s, Point a) { return a *= s; }
    friend constexpr Point operator/(const Point& a, double s) { return {a.x / s, a.y / s, a.z / s}; }
    friend constexpr bool operator==(const Point&, const Point&) = default;
};

constexpr double dot(const Point& a, const Point& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Point cross(const Point& a, const Point& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
constexpr double norm2(const Point& a) { return dot(a, a); }
inline double norm(const Point& a) { return std::sqrt(norm2(a)); }
inline double distance(const Point& a, const Point& b) { return norm(a - b); }

// Round 2-sphere; also read as the closed ball it bounds.
class Sphere {
public:
    // Throws std::invalid_argument unless radius is finite and positive.
    Sphere(const Point& center, double radius);

    const Point& center() const noexcept { return center_; }
    double radius() const noexcept { return radius_; }

    bool contains(const Point& p, double slack = 0.0) const {
        return distance(p, center_) <= radius_ + slack;
    }

private:
    Point center_;
    double radius_;
};

// Row-major 3x3 matrix, only as much as Jacobian bookkeeping needs.
struct Mat3 {
    std::array<double, 9> a{};

    static constexpr Mat3 identity() { return {{1, 0, 0, 0, 1, 0, 0, 0, 1}}; }
    constexpr double operator()(int r, int c) const { return a[static_cast<std::size_t>(3 * r + c)]; }
    constexpr double& operator()(int r, int c) { return a[static_cast<std::size_t>(3 * r + c)]; }
};

Mat3 operator*(const Mat3& l, const Mat3& r);
Point operator*(const Mat3& m, const Point& p);
Mat3 transpose(const Mat3& m);
double determinant(const Mat3& m);

// Absolute pole tolerance, scaled by the mirror radius at each use.
inline constexpr double kPoleTolerance = 1e-12;

// Inversion in the mirror sphere m. Fixes m pointwise and is an involution.
Point invert_point(const Sphere& m, const Point& x, double pole_tol = kPoleTolerance);

// Image of the sphere s under inversion in m. Throws PoleError when s passes
// through m's center, since the image would be a plane.
Sphere invert_sphere(const Sphere& m, const Sphere& s, double pole_tol = kPoleTolerance);

// Isotropic scale of the differential of inversion at x: r^2 / |x - c|^2.
double conformal_scale(const Sphere& m, const Point& x, double pole_tol = kPoleTolerance);

// Differential of inversion at x, scale * (I - 2 u u^T). Determinant is negative.
Mat3 inversion_jacobian(const Sphere& m, const Point& x, double pole_tol = kPoleTolerance);

struct Reflection {
    Sphere mirror;

    Point operator()(const Point& x) const { return invert_point(mirror, x); }
    Sphere operator()(const Sphere& s) const { return invert_sphere(mirror, s); }
};

struct ExternallyTangent {
    Point point;
};
struct Disjoint {};
struct Overlapping {};
struct Nested {};

using Tangency = std::variant<ExternallyTangent, Disjoint, Overlapping, Nested>;

Tangency tangency(const Sphere& a, const Sphere& b, double tol);

// Tangency point on the center segment, splitting it in ratio ra : rb.
Point contact_point(const Sphere& a, const Sphere& b);

}  // namespace pearl
