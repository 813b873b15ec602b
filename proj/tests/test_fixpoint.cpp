#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "planefix/fixpoint.hpp"

using namespace planefix;

namespace {

const MapExpr kHalf = MapExpr::affine(Mat2::diag(0.5, 0.5));
const Box kSq{-1, -1, 1, 1};

}  // namespace

TEST_CASE("degree examples") {
    const DegreeResult a = degree_on_box(kHalf, kSq, 0.01);
    CHECK_FALSE(a.boundary_zero);
    CHECK(a.degree == 1);
    CHECK(degree_on_box(MapExpr::translate({3, 0}), kSq, 0.01).degree == 0);
    CHECK(degree_on_box(MapExpr::spiral(3, 1.9), kSq, 0.01).degree == 1);
    CHECK(degree_on_box(MapExpr::affine(Mat2::diag(2, 0.5)), kSq, 0.01).degree == -1);
    CHECK(degree_on_box(MapExpr::identity(), kSq, 0.01).boundary_zero);
}

TEST_CASE("degree is additive over a split") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-2, 2);
    int checked = 0;
    for (int t = 0; t < 40; ++t) {
        const Mat2 m{u(rng), u(rng), u(rng), u(rng)};
        const MapExpr f = MapExpr::affine(m, {u(rng) * 0.3, u(rng) * 0.3});
        const Box parent{-1.3, -0.9, 1.1, 1.2};
        const double mid = 0.5 * (parent.x0 + parent.x1) + 0.0123;
        const Box l{parent.x0, parent.y0, mid, parent.y1}, r{mid, parent.y0, parent.x1, parent.y1};
        const DegreeResult dp = degree_on_box(f, parent, 1e-3), dl = degree_on_box(f, l, 1e-3),
                           dr = degree_on_box(f, r, 1e-3);
        if (dp.boundary_zero || dl.boundary_zero || dr.boundary_zero) continue;
        CHECK(dp.degree == dl.degree + dr.degree);
        ++checked;
    }
    CHECK(checked > 10);
}

TEST_CASE("degree is stable under small translations") {
    const MapExpr f = MapExpr::affine(Mat2{0.2, -1.1, 0.9, 0.4});
    const DegreeResult d = degree_on_box(f, kSq, 1e-3);
    REQUIRE_FALSE(d.boundary_zero);
    const double eps = 0.4 * d.min_displacement;
    const MapExpr g = MapExpr::compose({f, MapExpr::translate({eps, 0})});
    CHECK(degree_on_box(g, kSq, 1e-3).degree == d.degree);
}

TEST_CASE("locate examples") {
    LocateOptions o;
    const LocateResult a = locate(kHalf, {kSq}, o);
    REQUIRE(a.certificates.size() == 1);
    CHECK(norm(a.certificates[0].approx) <= 1e-9);
    CHECK(a.certificates[0].box.contains(Point{0, 0}));
    CHECK(a.certificates[0].boundary_degree != 0);
    const LocateResult b = locate(MapExpr::period_n(3), {{0, -1, 4, 1}}, o);
    CHECK(b.certificates.empty());
    CHECK(b.undecided.empty());
    const LocateResult c = locate(MapExpr::affine(Mat2::rotation(M_PI)), {{-2, -2, 2, 2}}, o);
    REQUIRE(c.certificates.size() == 1);
    CHECK(norm(c.certificates[0].approx) <= 1e-9);
}

TEST_CASE("locate over a box list isolates several fixed points") {
    // displacement 0.3 x (x^2 - 1) along x has zeros at x = -1, 0, 1 with degrees -1, +1, -1
    const MapExpr f = MapExpr::grid_pl(GridPL::sample({-2, -1, 2, 1}, 161, 5, [](Point p) {
        return Point{p.x + 0.3 * p.x * (p.x * p.x - 1), 0.5 * p.y};
    }));
    LocateOptions o;
    const LocateResult r =
        locate(f, {{0.63, -0.77, 1.41, 0.81}, {-1.37, -0.5, -0.55, 0.6}, {-0.31, -0.4, 0.47, 0.3}}, o);
    REQUIRE(r.certificates.size() == 3);
    CHECK(r.certificates[0].approx.x == doctest::Approx(-1).epsilon(1e-6));
    CHECK(r.certificates[1].approx.x == doctest::Approx(0).epsilon(1e-6));
    CHECK(r.certificates[2].approx.x == doctest::Approx(1).epsilon(1e-6));
    for (const auto& c : r.certificates) CHECK(c.residual <= o.tol_fix * (1 + *f.lipschitz(c.box)));
    // one box around all three: certificates only where the degree survives subdivision
    const Box whole{-1.7, -0.77, 1.63, 0.81};
    const LocateResult w = locate(f, {whole}, o);
    CHECK(degree_on_box(f, whole, o.eps_sep).degree == -1);
    int total = 0;
    for (const auto& c : w.certificates) {
        total += c.boundary_degree;
        CHECK(std::min({std::abs(c.approx.x + 1), std::abs(c.approx.x), std::abs(c.approx.x - 1)}) <= 1e-6);
    }
    CHECK((total == -1 || !w.undecided.empty()));
}

TEST_CASE("certificates agree with the grid oracle") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int t = 0; t < 5; ++t) {
        const Mat2 m{u(rng), u(rng), u(rng), u(rng)};
        const Point b{0.2 * u(rng), 0.2 * u(rng)};
        const Mat2 im{1 - m.a, -m.b, -m.c, 1 - m.d};
        if (std::abs(im.det()) < 0.2) continue;
        const MapExpr f = MapExpr::affine(m, b);
        const LocateResult r = locate(f, {kSq}, LocateOptions{});
        const OracleResult o = grid_oracle(f, kSq, 1e-2);
        for (const auto& c : r.certificates) {
            const OracleResult local = grid_oracle(f, c.box, c.box.width() / 4);
            CHECK(local.min < 10 * 1e-10 * (1 + *f.lipschitz(c.box)));
        }
        if (o.min < 1e-12) CHECK_FALSE(r.certificates.empty());
    }
}

TEST_CASE("grid oracle") {
    CHECK(grid_oracle(MapExpr::identity(), kSq, 0.1).min == 0.0);
    const OracleResult h = grid_oracle(kHalf, kSq, 1e-3);
    CHECK(h.min <= 1e-12);
    CHECK(norm(h.argmin) <= 1e-9);
    const OracleResult p = grid_oracle(MapExpr::period_n(3), {0, -1, 4, 1}, 1e-2);
    CHECK(p.min > 0.3);
}

TEST_CASE("one-dimensional bisection") {
    const MapExpr half = MapExpr::affine(Mat2::diag(0.5, 0));
    auto r = ivt_1d(half, -1, 1, 1e-10, 0.01);
    REQUIRE(r);
    CHECK(std::abs(*r) <= 1e-10);
    CHECK_FALSE(ivt_1d(MapExpr::translate({1, 0}), 0, 1, 1e-10, 0.01));
    const MapExpr axis = period_n_axis_map(3, {0, -1, 4, 1});
    auto s = ivt_1d(axis, 2, 3, 1e-10, 0.01);
    REQUIRE(s);
    CHECK(*s == doctest::Approx(7.0 / 3.0).epsilon(1e-10));
    CHECK_THROWS_AS(ivt_1d(MapExpr::translate({0, 1}), 0, 1, 1e-10, 0.01), std::domain_error);
}

TEST_CASE("bisection agrees with locate on an axis-preserving map") {
    const MapExpr f = MapExpr::affine(Mat2::diag(-0.5, 0.3), {1.2, 0});
    auto r = ivt_1d(f, -1, 2, 1e-10, 0.01);
    REQUIRE(r);
    const LocateResult l = locate(f, {{-1, -0.05, 2, 0.05}}, LocateOptions{});
    REQUIRE(l.certificates.size() == 1);
    CHECK(std::abs(l.certificates[0].approx.x - *r) <= 1e-9);
}

TEST_CASE("periodic orbit scan") {
    const auto hits = periodic_orbit_scan(MapExpr::period_n(3), {0, -1, 4, 1}, 9, 4, 1e-9);
    bool found = false;
    for (const auto& h : hits)
        if (h.p == Point{1, 0}) {
            found = true;
            CHECK(h.period == 3);
        }
    CHECK(found);
    CHECK(periodic_orbit_scan(kHalf, kSq, 21, 5, 1e-6).empty());
}
