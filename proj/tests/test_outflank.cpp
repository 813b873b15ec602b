#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "planefix/builtins.hpp"
#include "planefix/outflank.hpp"

using namespace planefix;

namespace {

/// Arc of the unit circle from angle 0 to n*alpha, marked at multiples of alpha.
StepArc rotation_arc(double alpha, int n) {
    std::vector<Point> v;
    const int per = 210;
    for (int i = 0; i <= n * per; ++i) {
        const double a = alpha * i / per;
        v.push_back({std::cos(a), std::sin(a)});
    }
    StepArc sa;
    sa.A = Polyline(v);
    sa.f = MapExpr::affine(Mat2::rotation(alpha));
    for (int k = 0; k <= n; ++k) sa.orbit_params.push_back(static_cast<double>(k) / n);
    return sa;
}

StepArc translation_arc(int n) {
    StepArc sa;
    std::vector<Point> v;
    for (int k = 0; k <= n; ++k) v.push_back({static_cast<double>(k), 0});
    sa.A = Polyline(v);
    sa.f = MapExpr::translate({1, 0});
    for (int k = 0; k <= n; ++k) sa.orbit_params.push_back(static_cast<double>(k) / n);
    return sa;
}

double hausdorff(const Polyline& a, const Polyline& b, double h) {
    double d = 0;
    const Polyline da = a.densified(h), db = b.densified(h);
    for (Point p : da.vertices()) d = std::max(d, b.distance(p));
    for (Point p : db.vertices()) d = std::max(d, a.distance(p));
    return d;
}

const Region kDisc = Region::circle({0, 0}, 3);

}  // namespace

TEST_CASE("step arc validation") {
    const Tolerances tol;
    StepArc one;
    one.A = Polyline({{1, 0}, {0.3, 0.8}, {std::cos(2.0), std::sin(2.0)}});
    one.f = MapExpr::affine(Mat2::rotation(2.0));
    one.orbit_params = {0, 1};
    CHECK(validate_step_arc(one, tol).verdict == Verdict::SATISFIED);
    const SpiralExample ex = example_4_5(3, 1.9);
    const TriState t = validate_step_arc(ex.arc, tol);
    CHECK(t.verdict == Verdict::SATISFIED);
    for (int k = 1; k < ex.arc.n(); ++k) CHECK(step_deviation(ex.arc, k, tol.h_sample) <= tol.eps_sep);
    StepArc shuffled = ex.arc;
    std::swap(shuffled.orbit_params[1], shuffled.orbit_params[2]);
    CHECK(validate_step_arc(shuffled, tol).verdict == Verdict::VIOLATED);
    CHECK(validate_step_arc(translation_arc(3), tol).verdict == Verdict::SATISFIED);
}

TEST_CASE("the spiral example is outflanked at the dip returning onto u0") {
    const Tolerances tol;
    const SpiralExample ex = example_4_5(3, 1.9);
    CHECK(ex.lambda == doctest::Approx(std::pow(2.0, 0.25)));
    CHECK(ex.b1 == doctest::Approx((2 * M_PI - 3 * 1.9) / 2));
    const OutflankSearch s = find_outflanking_point(ex.arc, tol);
    REQUIRE(s.certificate);
    const OutflankCertificate& c = *s.certificate;
    CHECK(dist(c.v, ex.arc.u(0)) <= 1e-9);
    CHECK(c.y == doctest::Approx(ex.y_param).epsilon(1e-6));
    CHECK(c.y > ex.arc.orbit_params[2]);
    CHECK(c.injectivity.verdict == Verdict::SATISFIED);
    CHECK(c.dodge.verdict == Verdict::SATISFIED);
    CHECK(c.moving.verdict == Verdict::SATISFIED);
}

TEST_CASE("a rotation that wraps past u0 is outflanked, a short one is not") {
    const Tolerances tol;
    // 7/20 of a turn: the arc vertices sit on a 1/600-turn lattice, so f(A) overlaps A exactly after wrapping
    const OutflankSearch wrap = find_outflanking_point(rotation_arc(2 * M_PI * 0.35, 2), tol);
    REQUIRE(wrap.certificate);
    CHECK(dist(wrap.certificate->v, Point{1, 0}) <= 1e-6);
    const OutflankSearch shortarc = find_outflanking_point(rotation_arc(0.5, 2), tol);
    CHECK_FALSE(shortarc.certificate);
    CHECK(find_outflanking_point(translation_arc(3), tol).certificate == std::nullopt);
}

TEST_CASE("certificates survive a four times denser re-validation") {
    const SpiralExample ex = example_4_5(3, 1.9);
    Tolerances tol;
    const OutflankSearch s = find_outflanking_point(ex.arc, tol);
    REQUIRE(s.certificate);
    Tolerances dense = tol;
    dense.h_sample /= 4;
    dense.grid_pitch /= 4;
    CHECK(validate_step_arc(ex.arc, dense).verdict == Verdict::SATISFIED);
    const OutflankSearch again = find_outflanking_point(ex.arc, dense);
    REQUIRE(again.certificate);
    CHECK(again.certificate->y == doctest::Approx(s.certificate->y).epsilon(1e-6));
    CHECK(again.certificate->dodge.verdict == Verdict::SATISFIED);
    CHECK(again.certificate->moving.verdict == Verdict::SATISFIED);
}

TEST_CASE("reducing the outflanked origin") {
    const Tolerances tol;
    OutflankCertificate c;
    c.base = translation_arc(3);
    c.y = 0.9;
    c.v_param = 0.1;
    const OutflankCertificate same = reduce_outflanked_origin(c);
    CHECK(same.base.n() == 3);
    CHECK(same.base.orbit_params == c.base.orbit_params);
    c.v_param = 0.4;
    const OutflankCertificate two = reduce_outflanked_origin(c);
    REQUIRE(two.base.n() == 2);
    CHECK(dist(two.base.u(0), Point{1, 0}) <= 1e-12);
    CHECK(dist(two.base.u(2), Point{3, 0}) <= 1e-12);
    CHECK(validate_step_arc(two.base, tol).verdict == Verdict::SATISFIED);
    CHECK(two.y == doctest::Approx(0.85));
    const OutflankCertificate twice = reduce_outflanked_origin(two);
    CHECK(twice.base.n() == two.base.n());
    CHECK(twice.base.orbit_params == two.base.orbit_params);
    CHECK(twice.y == two.y);
    c.v_param = 2.0 / 3.0;
    CHECK(reduce_outflanked_origin(c).base.n() == 1);
}

TEST_CASE("growing-squares construction from periodic orbits") {
    const Tolerances tol;
    const Construction two = construct_from_periodic_orbit(MapExpr::affine(Mat2::rotation(M_PI)), {1, 0}, 2, tol);
    REQUIRE(two.ok);
    REQUIRE(two.certificate);
    CHECK(two.certificate->base.n() <= 1);
    CHECK(validate_step_arc(two.certificate->base, tol).verdict == Verdict::SATISFIED);
    const Construction three =
        construct_from_periodic_orbit(MapExpr::affine(Mat2::rotation(2 * M_PI / 3)), {1, 0}, 3, tol);
    REQUIRE(three.ok);
    REQUIRE(three.certificate);
    CHECK(three.certificate->base.n() >= 1);
    CHECK(three.certificate->base.n() <= 2);
    CHECK(validate_step_arc(three.certificate->base, tol).verdict == Verdict::SATISFIED);
    const Construction fixed = construct_from_periodic_orbit(MapExpr::affine(Mat2::diag(0.5, 0.5)), {0, 0}, 1, tol);
    CHECK_FALSE(fixed.ok);
    CHECK(fixed.failed_step == "precondition");
}

TEST_CASE("construction is covariant under similarities") {
    const Tolerances tol;
    const MapExpr f = MapExpr::affine(Mat2::rotation(2 * M_PI / 3));
    const Construction base = construct_from_periodic_orbit(f, {1, 0}, 3, tol);
    REQUIRE(base.certificate);
    for (const auto& [s, a] : {std::pair{1.5, 0.4}, std::pair{0.7, -1.2}}) {
        const MapExpr h = MapExpr::compose({MapExpr::complex_scale_rot(s, a), MapExpr::translate({0.3, -0.6})});
        const MapExpr hinv = MapExpr::compose({MapExpr::translate({-0.3, 0.6}), MapExpr::complex_scale_rot(1 / s, -a)});
        Tolerances t = tol;
        t.eps_sep *= s;
        t.h_sample *= s;
        t.grid_pitch *= s;
        const Construction c = construct_from_periodic_orbit(conjugate(f, h), h({1, 0}), 3, t);
        REQUIRE(c.certificate);
        CHECK(c.certificate->base.n() == base.certificate->base.n());
        const Polyline back = map_vertices(c.certificate->base.A, [&](Point p) { return hinv(p); });
        CHECK(hausdorff(back, base.certificate->base.A, 1e-3) <= tol.eps_sep);
    }
}

TEST_CASE("full chain: spiral and rotations yield their fixed point at the origin") {
    const Tolerances tol;
    const SpiralExample ex = example_4_5(3, 1.9);
    const OutflankSearch s = find_outflanking_point(ex.arc, tol);
    REQUIRE(s.certificate);
    const OutflankReport r = certify_outflank(*s.certificate, ex.E, tol);
    CHECK(r.containment.verdict == Verdict::SATISFIED);
    CHECK(r.orientation.verdict == Verdict::SATISFIED);
    CHECK(r.injectivity.verdict == Verdict::SATISFIED);
    CHECK(r.exclusive.verdict == Verdict::SATISFIED);
    CHECK(r.overall == Verdict::SATISFIED);
    CHECK_FALSE(r.inconsistent);
    REQUIRE(r.certificate);
    CHECK(norm(r.certificate->approx) <= 1e-9);
    CHECK(r.certificate->residual <= tol.tol_fix * (1 + ex.lambda));
    for (const auto& [alpha, m] : {std::pair{M_PI, 2}, std::pair{2 * M_PI / 3, 3}}) {
        const MapExpr f = MapExpr::affine(Mat2::rotation(alpha));
        const Construction c = construct_from_periodic_orbit(f, {1, 0}, m, tol);
        REQUIRE(c.certificate);
        const OutflankReport t = certify_outflank(*c.certificate, kDisc, tol);
        CHECK(t.overall == Verdict::SATISFIED);
        REQUIRE(t.certificate);
        CHECK(norm(t.certificate->approx) <= 1e-9);
    }
}

TEST_CASE("a fold landing on the image of the tail breaks exclusivity") {
    const Tolerances tol;
    const MapExpr rot = MapExpr::affine(Mat2::rotation(M_PI));
    const Construction c = construct_from_periodic_orbit(rot, {1, 0}, 2, tol);
    REQUIRE(c.certificate);
    const OutflankCertificate& cert = *c.certificate;
    const StepArc& sa = cert.base;
    const Polyline tail = subarc(sa.A, sa.orbit_params[sa.n() - 1], cert.y);
    const Point target = rot(tail.point_at(0.5));
    // a single node far from A and f(A) is sent onto f(tail)
    const Point node{0, 2.5};
    REQUIRE(sa.A.distance(node) > 0.5);
    REQUIRE(map_vertices(sa.A, [&](Point p) { return rot(p); }).distance(node) > 0.5);
    const MapExpr fold = MapExpr::grid_pl(GridPL::sample({-3, -3, 3, 3}, 25, 25, [&](Point p) {
        return dist(p, node) < 1e-9 ? target : rot(p);
    }));
    OutflankCertificate bad = cert;
    bad.base.f = fold;
    const OutflankReport r = certify_outflank(bad, kDisc, tol);
    CHECK(r.exclusive.verdict == Verdict::VIOLATED);
    CHECK_FALSE(r.exclusive.witness.empty());
    CHECK(r.overall == Verdict::VIOLATED);
    CHECK_FALSE(r.certificate);
}
