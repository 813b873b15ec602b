#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "planefix/angles.hpp"
#include "planefix/complement.hpp"
#include "planefix/maps.hpp"

using namespace planefix;

namespace {

Polyline ngon(int n, double r = 1.0, Point c = {0, 0}) {
    std::vector<Point> v;
    for (int k = 0; k < n; ++k) {
        const double a = 2.0 * M_PI * k / n;
        v.push_back(c + r * Point{std::cos(a), std::sin(a)});
    }
    return Polyline(v, true);
}

DirectedCircle ccw(const Polyline& p) { return {p, 0, +1}; }

DirectedCircle image_of(const DirectedCircle& c, const MapExpr& f) {
    return {map_vertices(c.curve, [&](Point p) { return f(p); }), c.start_vertex, c.sense};
}

}  // namespace

TEST_CASE("directed angle examples") {
    CHECK(directed_angle({0, 0}, {1, 0}, {0, 1}) == doctest::Approx(M_PI / 2));
    CHECK(directed_angle({0, 0}, {1, 0}, {2, 0}) == 0.0);
    CHECK(directed_angle({0, 0}, {1, 0}, {1, -1}) == doctest::Approx(-M_PI / 4));
    CHECK_THROWS_AS(directed_angle({0, 0}, {1, 0}, {-1, 0}), DegenerateAngle);
    CHECK_THROWS_AS(directed_angle({0, 0}, {0, 0}, {1, 0}), DegenerateAngle);
}

TEST_CASE("directed angle is antisymmetric") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int i = 0; i < 2000; ++i) {
        const Point v{u(rng), u(rng)}, x{u(rng), u(rng)}, y{u(rng), u(rng)};
        CHECK(directed_angle(v, x, y) == -directed_angle(v, y, x));
    }
}

TEST_CASE("rotational angle examples") {
    const Polyline c = ngon(64);
    CHECK(rotational_angle(c, {0, 0}, 1e-12) == doctest::Approx(2 * M_PI).epsilon(1e-12));
    std::vector<Point> upper;
    for (int k = 0; k <= 32; ++k) upper.push_back({std::cos(M_PI * k / 32), std::sin(M_PI * k / 32)});
    CHECK(rotational_angle(Polyline(upper), {0, 0}, 1e-12) == doctest::Approx(M_PI));
    const PathFn constant = [](double) { return Point{1, 1}; };
    CHECK(rotational_angle(constant, {0, 0.5, 1}, {0, 0}, 1e-12) == 0.0);
    CHECK_THROWS_AS(rotational_angle(c, c.front(), 1e-12), UndefinedAngle);
}

TEST_CASE("rotational angle is invariant under refinement and matches the shortcut off a line") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int t = 0; t < 30; ++t) {
        std::vector<Point> v{{1.5, 0}};
        for (int k = 0; k < 8; ++k) v.push_back({1.5 + 0.3 * u(rng) + 0.5 * k, 0.6 * u(rng) + 1.0 + k * 0.2});
        const Polyline p(v);
        const Point o{0, 0};
        const double a = rotational_angle(p, o, 1e-12);
        CHECK(std::abs(rotational_angle(p.densified(0.01), o, 1e-12) - a) <= 1e-9);
        // the path stays in x > 0, off the negative x-axis
        CHECK(a == doctest::Approx(directed_angle(o, p.front(), p.back())).epsilon(1e-12));
    }
}

TEST_CASE("winding numbers of a circle") {
    const DirectedCircle c = ccw(ngon(64));
    CHECK(winding_number(c, {0, 0}) == 1);
    CHECK(winding_number(c.reversed(), {0, 0}) == -1);
    CHECK(winding_number(c, {2, 0}) == 0);
}

TEST_CASE("winding is constant over a face and agrees with the shoelace sign") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> r(0.4, 1.6), u(-1.9, 1.9);
    for (int t = 0; t < 10; ++t) {
        std::vector<Point> v;
        for (int k = 0; k < 16; ++k) {
            const double a = 2 * M_PI * k / 16, rr = r(rng);
            v.push_back({rr * std::cos(a), rr * std::sin(a)});
        }
        const Polyline p(v, true);
        const auto d = decompose_complement({p}, Box{-2, -2, 2, 2}, 0.02);
        for (int s : {+1, -1}) {
            const DirectedCircle c{p, static_cast<std::size_t>(t % 16), s};
            CHECK(overall_orientation(c) == shoelace_sign(c));
            CHECK(overall_orientation(c) == s);
        }
        std::map<int, int> seen;
        for (int k = 0; k < 200; ++k) {
            const Point q{u(rng), u(rng)};
            const int f = point_in_face(d, q, 1e-3);
            if (f < 0 || p.distance(q) < 1e-3) continue;
            const int w = winding_number(ccw(p), q);
            if (seen.count(f)) CHECK(seen[f] == w);
            seen[f] = w;
        }
    }
}

TEST_CASE("orientation of embeddings") {
    const DirectedCircle c = ccw(ngon(64));
    const MapExpr rot = MapExpr::affine(Mat2::rotation(0.7));
    CHECK(orientation_of_embedding(c, image_of(c, rot), {0, 0}, {0, 0}) == Orientation::PRESERVING);
    const MapExpr mirror = MapExpr::affine(Mat2::diag(1, -1));
    CHECK(orientation_of_embedding(c, image_of(c, mirror), {0, 0}, {0, 0}) == Orientation::REVERSING);
    const MapExpr spiral = MapExpr::spiral(3, 1.9);
    CHECK(orientation_of_embedding(c, image_of(c, spiral), {0, 0}, {0, 0}) == Orientation::PRESERVING);
    CHECK_THROWS(orientation_of_embedding(c, image_of(c, rot), {5, 0}, {0, 0}));
}

TEST_CASE("orientation composes like determinant signs") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-2, 2);
    const DirectedCircle c = ccw(ngon(32));
    for (int t = 0; t < 20; ++t) {
        const Mat2 a{u(rng), u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng), u(rng)};
        if (std::abs(a.det()) < 0.1 || std::abs(b.det()) < 0.1) continue;
        const MapExpr fa = MapExpr::affine(a), fb = MapExpr::affine(b);
        const MapExpr ab = MapExpr::compose({fa, fb});
        const auto oa = orientation_of_embedding(c, image_of(c, fa), {0, 0}, {0, 0});
        const auto ob = orientation_of_embedding(c, image_of(c, fb), {0, 0}, {0, 0});
        const auto oab = orientation_of_embedding(c, image_of(c, ab), {0, 0}, {0, 0});
        CHECK((oab == Orientation::PRESERVING) == (oa == ob));
        CHECK((oab == Orientation::PRESERVING) == ((b * a).det() > 0));
    }
}

TEST_CASE("sides of directed circles") {
    const DirectedCircle c = ccw(ngon(64));
    CHECK(side_of_directed_circle(c, {0, 0}) == Side::LEFT);
    CHECK(side_of_directed_circle(c, {3, 0}) == Side::RIGHT);
    CHECK(side_of_directed_circle(c.reversed(), {0, 0}) == Side::RIGHT);
}

TEST_CASE("sides of directed arcs") {
    const DirectedArc a{Polyline({{0, 0}, {4, 0}}), true};
    const DirectedCircle up{Polyline({{1, 0}, {3, 0}, {3, 2}, {1, 2}}, true), 0, +1};
    const DirectedCircle down{Polyline({{1, 0}, {1, -2}, {3, -2}, {3, 0}}, true), 0, +1};
    CHECK(side_of_directed_arc(a, up, 1e-9, 0.05) == Side::LEFT);
    CHECK(side_of_directed_arc(a, down, 1e-9, 0.05) == Side::RIGHT);
    const DirectedArc reversed{a.curve, false};
    CHECK(side_of_directed_arc(reversed, up, 1e-9, 0.05) == Side::RIGHT);
    // a U-shaped disc touching the axis along two separate stretches
    const DirectedCircle twice{
        Polyline({{0.5, 0}, {1.5, 0}, {1.5, 1}, {2.5, 1}, {2.5, 0}, {3.5, 0}, {3.5, 2}, {0.5, 2}}, true), 0, +1};
    CHECK(side_of_directed_arc(a, twice, 1e-9, 0.05) == Side::NOT_APPLICABLE);
}

TEST_CASE("sides flip under reflection and persist under rotation") {
    const DirectedArc a{Polyline({{0, 0}, {4, 0}}), true};
    const DirectedCircle up{Polyline({{1, 0}, {3, 0}, {3, 2}, {1, 2}}, true), 0, +1};
    for (const auto& [m, flips] : {std::pair{Mat2::rotation(1.1), false}, std::pair{Mat2::diag(1, -1), true},
                                   std::pair{Mat2{0, 1, 1, 0}, true}}) {
        auto h = [m = m](Point p) { return m.apply(p); };
        const DirectedArc ha{map_vertices(a.curve, h), true};
        const DirectedCircle hd{map_vertices(up.curve, h), 0, +1};
        const Side s = side_of_directed_arc(ha, hd, 1e-9, 0.05);
        CHECK(s == (flips ? Side::RIGHT : Side::LEFT));
        const Side p = side_of_directed_circle(hd, m.apply({2, 1}));
        const Side expect = flips ? Side::RIGHT : Side::LEFT;
        CHECK(p == expect);
    }
}
