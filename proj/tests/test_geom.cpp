#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "planefix/complement.hpp"
#include "planefix/geom.hpp"

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

}  // namespace

TEST_CASE("orient is exact on collinear triples that rounding gets wrong") {
    CHECK(orient({0.5, 0.5}, {12, 12}, {24, 24}) == 0);
    const double e = std::nextafter(0.5, 1.0);
    CHECK(orient({e, 0.5}, {12, 12}, {24, 24}) != 0);
    CHECK(orient({0, 0}, {1, 0}, {0, 1}) == 1);
    CHECK(orient({0, 0}, {0, 1}, {1, 0}) == -1);
}

TEST_CASE("orient is antisymmetric under swapping two points") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 2000; ++i) {
        const Point a{u(rng), u(rng)}, b{u(rng), u(rng)};
        const Point c = a + u(rng) * (b - a);  // nearly collinear
        CHECK(orient(a, b, c) == -orient(b, a, c));
        CHECK(orient(a, b, c) == orient(b, c, a));
    }
}

TEST_CASE("segment intersection covers crossings, touching and collinear overlap") {
    CHECK(segments_intersect({0, 0}, {2, 2}, {0, 2}, {2, 0}));
    CHECK(segments_intersect({0, 0}, {1, 0}, {1, 0}, {2, 5}));
    CHECK(segments_intersect({0, 0}, {2, 0}, {1, 0}, {3, 0}));
    CHECK_FALSE(segments_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1}));
    CHECK_FALSE(segments_intersect({0, 0}, {1, 0}, {2, 0}, {3, 0}));
    const auto pts = segment_intersection_points({0, 0}, {2, 0}, {1, 0}, {3, 0});
    REQUIRE(pts.size() == 2);
    CHECK(segment_distance({0, 0}, {1, 0}, {0, 1}, {1, 1}) == doctest::Approx(1.0));
    CHECK(segment_distance({0, 0}, {2, 2}, {0, 2}, {2, 0}) == 0.0);
}

TEST_CASE("simplicity of squares, bowties and single segments") {
    CHECK(is_simple(Polyline({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, true)));
    const auto bow = is_simple(Polyline({{0, 0}, {1, 1}, {1, 0}, {0, 1}}, true));
    CHECK_FALSE(bow);
    CHECK(bow.seg_i >= 0);
    CHECK(bow.seg_j >= 0);
    CHECK(is_simple(Polyline({{0, 0}, {1, 0}})));
    CHECK_THROWS_AS(Polyline({{0, 0}, {0, 0}, {1, 0}}), GeomError);
}

TEST_CASE("subarc by normalized arclength") {
    const Polyline seg({{0, 0}, {2, 0}});
    const Polyline s = subarc(seg, 0.25, 0.75);
    CHECK(s.front().x == doctest::Approx(0.5));
    CHECK(s.back().x == doctest::Approx(1.5));
    CHECK(subarc(seg, 0.75, 0.25).front().x == doctest::Approx(0.5));
    const Polyline pt = subarc(seg, 0.3, 0.3);
    CHECK(pt.degenerate());
    CHECK(pt.front().x == doctest::Approx(0.6));
    const Polyline L({{0, 0}, {1, 0}, {1, 1}});
    const Polyline whole = subarc(L, 0, 1);
    REQUIRE(whole.size() == L.size());
    for (std::size_t i = 0; i < L.size(); ++i) CHECK(whole.vertices()[i] == L.vertices()[i]);
    CHECK_THROWS(subarc(seg, -0.1, 0.5));
}

TEST_CASE("polyline parameters, projection and densification") {
    const Polyline L({{0, 0}, {1, 0}, {1, 1}});
    CHECK(L.length() == doctest::Approx(2.0));
    CHECK(L.point_at(0.75).y == doctest::Approx(0.5));
    double d = 0;
    CHECK(L.project({2, 0.5}, &d) == doctest::Approx(0.75));
    CHECK(d == doctest::Approx(1.0));
    const Polyline D = L.densified(0.1);
    for (std::size_t i = 0; i < D.segment_count(); ++i) CHECK(dist(D.seg_a(i), D.seg_b(i)) <= 0.1 + 1e-12);
    CHECK(D.front() == L.front());
    CHECK(D.back() == L.back());
}

TEST_CASE("region depth is a signed distance") {
    const Region c = Region::circle({0, 0}, 3);
    CHECK(c.depth({0, 0}) == doctest::Approx(3));
    CHECK(c.depth({4, 0}) == doctest::Approx(-1));
    const Region b = Region::box({0, 0, 2, 1});
    CHECK(b.depth({1, 0.5}) == doctest::Approx(0.5));
    const Region p = Region::polygon(Polyline({{0, 0}, {2, 0}, {2, 2}, {0, 2}}, true));
    CHECK(p.depth({1, 1}) == doctest::Approx(1));
    CHECK(p.depth({3, 1}) < 0);
}

TEST_CASE("complement of a circle has one bounded and one unbounded face") {
    const Polyline c = ngon(64);
    const auto d = decompose_complement({c}, Box{-2, -2, 2, 2}, 0.05);
    CHECK(d.faces.size() == 2);
    CHECK(d.bounded_faces().size() == 1);
    const int in = point_in_face(d, {0, 0}, 1e-9);
    CHECK(in == d.bounded_faces().front());
    CHECK(point_in_face(d, {1.8, 1.8}, 1e-9) == d.unbounded);
    CHECK(point_in_face(d, c.front(), 1e-9) == kOnCurve);
}

TEST_CASE("theta curve has two bounded faces and an open arc separates nothing") {
    const Polyline c = ngon(64);
    const Polyline chord({{-1.5, 0}, {1.5, 0}});
    const auto d = decompose_complement({c, chord}, Box{-2, -2, 2, 2}, 0.05);
    CHECK(d.bounded_faces().size() == 2);
    CHECK(exact_face_count({c, chord}) == 3);
    const auto a = decompose_complement({Polyline({{-1, 0}, {0, 1}, {1, 0}})}, Box{-2, -2, 2, 2}, 0.05);
    CHECK(a.faces.size() == 1);
    CHECK(a.bounded_faces().empty());
}

TEST_CASE("point_in_face is constant along segments avoiding the curves") {
    const Polyline c = ngon(40, 1.0);
    const auto d = decompose_complement({c}, Box{-2, -2, 2, 2}, 0.05);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.9, 1.9);
    const SegmentIndex idx = SegmentIndex::of(c);
    int checked = 0;
    while (checked < 200) {
        const Point a{u(rng), u(rng)}, b{u(rng), u(rng)};
        if (idx.first_crossing(a, b)) continue;
        if (idx.nearest(a, b).distance < 0.05) continue;
        const int fa = point_in_face(d, a, 1e-9);
        for (int k = 1; k <= 10; ++k) CHECK(point_in_face(d, a + (k / 10.0) * (b - a), 1e-9) == fa);
        ++checked;
    }
}

TEST_CASE("random simple polygons satisfy the polygonal Jordan property") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> r(0.5, 1.5);
    for (int t = 0; t < 10; ++t) {
        std::vector<Point> v;
        const int n = 12 + t;
        for (int k = 0; k < n; ++k) {
            const double a = 2.0 * M_PI * k / n, rr = r(rng);
            v.push_back({rr * std::cos(a), rr * std::sin(a)});
        }
        const Polyline p(v, true);
        REQUIRE(is_simple(p));
        const auto d = decompose_complement({p}, Box{-2, -2, 2, 2}, 0.02);
        CHECK(d.bounded_faces().size() == 1);
        CHECK(exact_face_count({p}) == 2);
    }
}

TEST_CASE("curve gap finds the closest pair") {
    const Polyline a({{0, 0}, {1, 0}});
    const Polyline b({{0.5, 0.3}, {2, 1}});
    const CurveGap g = curve_gap(a, SegmentIndex::of(b));
    CHECK(g.distance == doctest::Approx(0.3));
    CHECK(g.on_a.x == doctest::Approx(0.5));
}
