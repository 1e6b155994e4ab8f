#include "pearl/geom.hpp"

#include <sstream>
#include <stdexcept>

#include "pearl/error.hpp"

namespace pearl {

Sphere::Sphere(const Point& center, double radius) : center_(center), radius_(radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw std::invalid_argument("sphere radius must be finite and positive");
    }
    if (!std::isfinite(center.x) || !std::isfinite(center.y) || !std::isfinite(center.z)) {
        throw std::invalid_argument("sphere center must be finite");
    }
}

Mat3 operator*(const Mat3& l, const Mat3& r) {
    Mat3 out;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += l(i, k) * r(k, j);
            out(i, j) = s;
        }
    }
    return out;
}

Point operator*(const Mat3& m, const Point& p) {
    return {m(0, 0) * p.x + m(0, 1) * p.y + m(0, 2) * p.z,
            m(1, 0) * p.x + m(1, 1) * p.y + m(1, 2) * p.z,
            m(2, 0) * p.x + m(2, 1) * p.y + m(2, 2) * p.z};
}

Mat3 transpose(const Mat3& m) {
    Mat3 t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t(i, j) = m(j, i);
    return t;
}

double determinant(const Mat3& m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

namespace {

[[noreturn]] void throw_pole(const Sphere& m, const char* what) {
    std::ostringstream os;
    os.precision(17);
    os << what << " (mirror center " << m.center().x << ',' << m.center().y << ','
       << m.center().z << ", radius " << m.radius() << ')';
    throw PoleError(os.str());
}

}  // namespace

Point invert_point(const Sphere& m, const Point& x, double pole_tol) {
    const Point d = x - m.center();
    const double d2 = norm2(d);
    if (std::sqrt(d2) < pole_tol * m.radius()) throw_pole(m, "point maps to infinity");
    return m.center() + d * (m.radius() * m.radius() / d2);
}

Sphere invert_sphere(const Sphere& m, const Sphere& s, double pole_tol) {
    const Point d = s.center() - m.center();
    const double d2 = norm2(d);
    // Distance from the mirror center to the surface of s.
    if (std::abs(std::sqrt(d2) - s.radius()) <= pole_tol * m.radius()) {
        throw_pole(m, "sphere passes through the mirror center");
    }
    const double k = m.radius() * m.radius() / (d2 - s.radius() * s.radius());
    return Sphere(m.center() + d * k, std::abs(k) * s.radius());
}

double conformal_scale(const Sphere& m, const Point& x, double pole_tol) {
    const double d2 = norm2(x - m.center());
    if (std::sqrt(d2) < pole_tol * m.radius()) throw_pole(m, "scale is infinite at the center");
    return m.radius() * m.radius() / d2;
}

Mat3 inversion_jacobian(const Sphere& m, const Point& x, double pole_tol) {
    const double s = conformal_scale(m, x, pole_tol);
    const Point u = (x - m.center()) / distance(x, m.center());
    const double uu[3] = {u.x, u.y, u.z};
    Mat3 j;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) j(r, c) = s * ((r == c ? 1.0 : 0.0) - 2.0 * uu[r] * uu[c]);
    return j;
}

Point contact_point(const Sphere& a, const Sphere& b) {
    return a.center() + (b.center() - a.center()) * (a.radius() / (a.radius() + b.radius()));
}

Tangency tangency(const Sphere& a, const Sphere& b, double tol) {
    const double d = distance(a.center(), b.center());
    const double sum = a.radius() + b.radius();
    if (std::abs(d - sum) <= tol) return ExternallyTangent{contact_point(a, b)};
    if (d > sum) return Disjoint{};
    if (d <= std::abs(a.radius() - b.radius()) + tol) return Nested{};
    return Overlapping{};
}

}  // namespace pearl
