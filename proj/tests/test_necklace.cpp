#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "fixtures.hpp"
#include "pearl/error.hpp"
#include "pearl/necklace.hpp"

using namespace pearl;

namespace {

std::vector<Sphere> hexagon_spheres(double r) {
    std::vector<Sphere> s;
    for (int m = 0; m < 6; ++m) {
        const double a = 2 * std::numbers::pi * m / 6;
        s.emplace_back(Point{std::cos(a), std::sin(a), 0}, r);
    }
    return s;
}

// Four unit pearls in a rhombus; pearls 0 and 2 clear each other by `gap`.
std::vector<Sphere> bent_chain(double gap) {
    const double half = 1 + gap / 2;
    const double h = std::sqrt(4 - half * half);
    return {Sphere({-half, 0, 0}, 1), Sphere({0, h, 0}, 1), Sphere({half, 0, 0}, 1), Sphere({0, -h, 0}, 1)};
}

template <class E>
std::vector<int> indices_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const E& e) {
        return e.indices();
    }
    ADD_FAILURE() << "expected exception";
    return {};
}

}  // namespace

TEST(Validate, HexagonOfHalfUnitSpheres) {
    const Necklace nk = validate(hexagon_spheres(0.5), 1e-9);
    ASSERT_EQ(nk.size(), 6);
    for (int m = 0; m < 6; ++m) {
        // tangency midway between neighbouring centers, on the circle of radius cos 30 deg
        const Point t = nk.tangency_points()[static_cast<std::size_t>(m)];
        const double angle = std::numbers::pi * (2 * m + 1) / 6;
        EXPECT_NEAR(t.x, std::cos(std::numbers::pi / 6) * std::cos(angle), 1e-12);
        EXPECT_NEAR(t.y, std::cos(std::numbers::pi / 6) * std::sin(angle), 1e-12);
    }
}

TEST(Validate, ChangedRadiusIsNotTangent) {
    auto s = hexagon_spheres(0.5);
    s[2] = Sphere(s[2].center(), 0.4);
    const auto idx = indices_of<NotTangent>([&] { validate(s, 1e-9); });
    EXPECT_EQ(idx, (std::vector<int>{1, 2}));
}

TEST(Validate, TooFewPearls) {
    EXPECT_THROW(validate({Sphere({0, 0, 0}, 1), Sphere({2, 0, 0}, 1)}, 1e-9), TooFewPearls);
}

TEST(Validate, TriangleOfUnitSpheres) {
    const double h = std::sqrt(3.0);
    const Necklace nk = validate({Sphere({0, 0, 0}, 1), Sphere({2, 0, 0}, 1), Sphere({1, h, 0}, 1)}, 1e-9);
    EXPECT_EQ(nk.size(), 3);
    EXPECT_NEAR(nk.tangency_points()[0].x, 1.0, 1e-15);
}

TEST(Validate, NonConsecutiveOverlapIsNotDisjoint) {
    const auto idx = indices_of<NotDisjoint>([] { validate(bent_chain(-0.1), 1e-9); });
    EXPECT_EQ(idx, (std::vector<int>{0, 2}));
}

TEST(Validate, GapBelowMarginRejected) {
    const double tol = 1e-6;
    EXPECT_THROW(validate(bent_chain(5e-6), tol), NotDisjoint);
    EXPECT_NO_THROW(validate(bent_chain(2e-5), tol));
}

TEST(UnknotNecklace, PearlsOrthogonalToCircle) {
    for (int n = 3; n <= 64; ++n) {
        for (double R : {0.5, 1.0, 2.0}) {
            const Necklace nk = unknot_necklace(n, R);
            ASSERT_EQ(nk.size(), n);
            for (int m = 0; m < n; ++m) {
                const Sphere& s = nk.pearl(m);
                EXPECT_NEAR(s.radius(), R * std::tan(std::numbers::pi / n), 1e-12 * R);
                // orthogonal to the circle of radius R: |c|^2 = R^2 + r^2
                EXPECT_NEAR(norm2(s.center()), R * R + s.radius() * s.radius(), 1e-12 * R * R);
                const Point t = nk.tangency_points()[static_cast<std::size_t>(m)];
                EXPECT_NEAR(norm(t), R, 1e-12 * R);
                const double angle = std::numbers::pi * (2 * m + 1) / n;
                EXPECT_NEAR(t.x, R * std::cos(angle), 1e-12 * R);
                EXPECT_NEAR(t.y, R * std::sin(angle), 1e-12 * R);
            }
        }
    }
}

TEST(UnknotNecklace, ThreePearlsPairwiseTangent) {
    const Necklace nk = unknot_necklace(3, 1.0);
    for (int i = 0; i < 3; ++i) {
        const Sphere& a = nk.pearl(i);
        const Sphere& b = nk.pearl((i + 1) % 3);
        EXPECT_NEAR(distance(a.center(), b.center()), a.radius() + b.radius(), 1e-12);
    }
}

TEST(UnknotNecklace, RejectsBadArguments) {
    EXPECT_THROW(unknot_necklace(2, 1.0), TooFewPearls);
    EXPECT_THROW(unknot_necklace(6, 0.0), std::invalid_argument);
}

TEST(TangencyPoints, LieOnBothPearls) {
    for (const Necklace& nk : {fixtures::unknot(5), fixtures::trefoil()}) {
        const int n = nk.size();
        for (int i = 0; i < n; ++i) {
            const Point t = nk.tangency_points()[static_cast<std::size_t>(i)];
            EXPECT_NEAR(distance(t, nk.pearl(i).center()), nk.pearl(i).radius(), 1e-9);
            EXPECT_NEAR(distance(t, nk.pearl((i + 1) % n).center()), nk.pearl((i + 1) % n).radius(), 1e-9);
        }
    }
}

TEST(PolygonalKnot, Invariants) {
    EXPECT_THROW(PolygonalKnot({{0, 0, 0}, {1, 0, 0}}), std::invalid_argument);
    EXPECT_THROW(PolygonalKnot({{0, 0, 0}, {1, 0, 0}, {1, 0, 0}}), std::invalid_argument);
    const PolygonalKnot k({{0, 0, 0}, {3, 0, 0}, {3, 4, 0}});
    EXPECT_DOUBLE_EQ(k.edge_length(2), 5.0);
}

TEST(NecklaceFromPolygon, TriangleOfSideTwo) {
    const double h = std::sqrt(3.0);
    const Necklace nk = necklace_from_polygon(PolygonalKnot({{0, 0, 0}, {2, 0, 0}, {1, h, 0}}), 1e-9);
    ASSERT_EQ(nk.size(), 3);
    for (const auto& s : nk.pearls()) EXPECT_NEAR(s.radius(), 1.0, 1e-12);
}

TEST(NecklaceFromPolygon, InscribedHexagonGivesHalfUnitPearls) {
    std::vector<Point> v;
    for (int m = 0; m < 6; ++m) {
        const double a = 2 * std::numbers::pi * m / 6;
        v.push_back({std::cos(a), std::sin(a), 0});
    }
    const Necklace nk = necklace_from_polygon(PolygonalKnot(v), 1e-9);
    const Necklace direct = validate(hexagon_spheres(0.5), 1e-9);
    for (int i = 0; i < 6; ++i) {
        EXPECT_NEAR(distance(nk.pearl(i).center(), direct.pearl(i).center()), 0.0, 1e-12);
        EXPECT_NEAR(nk.pearl(i).radius(), direct.pearl(i).radius(), 1e-12);
    }
}

TEST(NecklaceFromPolygon, UnequalEdges) {
    const PolygonalKnot k({{0, 0, 0}, {2, 0, 0}, {2, 2, 0}, {0, 2.5, 0}});
    EXPECT_THROW(necklace_from_polygon(k, 1e-9), UnequalEdges);
}

TEST(NecklaceFromPolygon, TemplateIsEdgeMidpoints) {
    const PolygonalKnot poly = resample_equal_chords(torus_knot_curve(2, 3, 2.0, 1.0, 4000, 0.1), 40);
    const Necklace nk = necklace_from_polygon(poly, 1e-9);
    const PolygonalKnot t = template_of(nk);
    ASSERT_EQ(t.size(), poly.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const Point mid = (poly.vertices()[i] + poly.vertices()[(i + 1) % poly.size()]) * 0.5;
        EXPECT_NEAR(distance(t.vertices()[i], mid), 0.0, 1e-9);
    }
}

TEST(ResampleEqualChords, ClosesWithEqualChords) {
    const auto curve = torus_knot_curve(2, 3, 2.0, 1.0, 4000, 0.1);
    for (int count : {12, 40, 77}) {
        const PolygonalKnot k = resample_equal_chords(curve, count);
        ASSERT_EQ(static_cast<int>(k.size()), count);
        const double L = k.edge_length(0);
        for (std::size_t i = 0; i < k.size(); ++i) EXPECT_NEAR(k.edge_length(i), L, 1e-9);
    }
}

TEST(ResampleEqualChords, CircleGivesRegularPolygon) {
    std::vector<Point> circle;
    for (int i = 0; i < 3000; ++i) {
        const double a = 2 * std::numbers::pi * i / 3000;
        circle.push_back({std::cos(a), std::sin(a), 0});
    }
    const PolygonalKnot k = resample_equal_chords(circle, 6);
    // chord of the dense polygon, slightly shorter than the circle's side 1
    EXPECT_NEAR(k.edge_length(0), 1.0, 1e-5);
}

TEST(TrefoilFixture, ValidFortyPearlNecklace) {
    const Necklace& nk = fixtures::trefoil();
    EXPECT_EQ(nk.size(), fixtures::kTrefoilPearls);
    const double r = nk.pearl(0).radius();
    for (const auto& s : nk.pearls()) EXPECT_NEAR(s.radius(), r, 1e-9);
}

TEST(Template, UnknotSixIsHexagon) {
    const PolygonalKnot t = template_of(unknot_necklace(6, 1.0));
    ASSERT_EQ(t.size(), 6u);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(t.edge_length(i), 1.0, 1e-12);
}

TEST(Template, UnknotThreeIsEquilateral) {
    const PolygonalKnot t = template_of(unknot_necklace(3, 1.0));
    EXPECT_NEAR(t.edge_length(0), t.edge_length(1), 1e-12);
    EXPECT_NEAR(t.edge_length(1), t.edge_length(2), 1e-12);
}
