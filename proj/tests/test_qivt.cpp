#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "planefix/qivt.hpp"
#include "planefix/scenario.hpp"

using namespace planefix;

namespace {

Resolved load(const std::string& name) {
    std::ifstream in(std::string(PLANEFIX_FIXTURE_DIR) + "/" + name);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return resolve(parse_scenario(ss.str()));
}

QivtInstance instance(const std::string& name) {
    const Resolved r = load(name);
    QivtInstance q;
    q.f = r.maps.at(r.task.map);
    q.X = r.curves.at(r.task.disc);
    q.A = r.curves.at(r.task.arc);
    q.x = *r.task.x;
    q.y = *r.task.y;
    q.tol = r.tol;
    q.q_candidates = r.task.q;
    return q;
}

const Polyline kSquareX({{0, 0}, {8, 0}, {8, 4}, {0, 4}}, true);
const Polyline kBaseA({{1, 0}, {7, 0}});

}  // namespace

TEST_CASE("bump scenario satisfies condition 1 and yields a fixed point in W") {
    const QivtInstance in = instance("qivt_cond1.scn");
    QivtDerived d;
    const HypothesisReport h = certify_qivt(in, &d);
    CHECK(dist(d.u, Point{4.5, 0}) <= 1e-12);
    CHECK(dist(d.v, Point{3.5, 0}) <= 1e-12);
    REQUIRE(d.dec);
    CHECK(d.dec->bounded_faces().size() == 1);
    CHECK(h.sign.verdict == Verdict::SATISFIED);
    CHECK(h.preimage.verdict == Verdict::SATISFIED);
    CHECK(h.preimage.margin > 0);
    CHECK(h.condition == 1);
    CHECK(h.conditions[0].verdict == Verdict::SATISFIED);
    CHECK(h.overall == Verdict::SATISFIED);
    CHECK_FALSE(h.inconsistent);
    REQUIRE(h.certificate);
    const Point p = h.certificate->approx;
    CHECK(dist(in.f(p), p) <= 1e-6);
    CHECK(point_in_face(*d.dec, p, 0) == h.W.face);
    const auto L = in.f.lipschitz(h.certificate->box);
    REQUIRE(L);
    CHECK(h.certificate->residual <= in.tol.tol_fix * (1 + *L));
    // the brute-force scan over the face's bounding box finds the same zero
    const OracleResult o = grid_oracle(in.f, {3, 0, 5, 1}, 1.0 / 64);
    CHECK(dist(o.argmin, p) <= 1.0 / 32);
}

TEST_CASE("order-pattern scenario satisfies condition 2") {
    const QivtInstance in = instance("qivt_cond2.scn");
    QivtDerived d;
    const HypothesisReport h = certify_qivt(in, &d);
    REQUIRE(d.lu);
    REQUIRE(d.lv);
    CHECK(in.x <= *d.lv);
    CHECK(*d.lv < in.y);
    CHECK(in.y < *d.lu);
    CHECK(h.condition == 2);
    CHECK(h.conditions[1].verdict == Verdict::SATISFIED);
    CHECK(h.overall == Verdict::SATISFIED);
    REQUIRE(h.certificate);
    CHECK(dist(in.f(h.certificate->approx), h.certificate->approx) <= 1e-6);
}

TEST_CASE("shifted mutants fail the sign clause and get no certificate") {
    for (const char* name : {"qivt_cond1_mutant.scn", "qivt_cond2_mutant.scn"}) {
        const HypothesisReport h = certify_qivt(instance(name));
        CHECK(h.sign.verdict == Verdict::VIOLATED);
        CHECK(h.overall == Verdict::VIOLATED);
        CHECK_FALSE(h.certificate);
    }
}

TEST_CASE("identity-like input is rejected by the strict sign product") {
    QivtInstance in;
    in.f = MapExpr::identity();
    in.X = kSquareX;
    in.A = kBaseA;
    in.x = 0.25;
    in.y = 0.75;
    const HypothesisReport h = certify_qivt(in);
    CHECK(h.sign.verdict == Verdict::VIOLATED);
    CHECK_FALSE(h.certificate);
}

TEST_CASE("malformed instances are rejected") {
    QivtInstance in;
    in.f = MapExpr::identity();
    in.X = kSquareX;
    in.A = kBaseA;
    in.x = 0.6;
    in.y = 0.4;
    CHECK_THROWS(derive(in));
    in.x = 0.2;
    in.y = 0.4;
    in.A = Polyline({{1, 1}, {7, 1}});
    CHECK_THROWS(derive(in));
}

TEST_CASE("preimage clause: injective maps pass and folds fail") {
    QivtInstance in = instance("qivt_cond1.scn");
    const MapExpr g = in.f;
    in.f = MapExpr::compose({MapExpr::affine(Mat2{1, 0.2, 0, 1}), MapExpr::translate({0.5, 0.5})});
    const QivtDerived d = derive(in);
    CHECK(check_preimage_clause(in, d, 0.1).verdict == Verdict::SATISFIED);
    // the top rows of nodes are sent onto the bump, folding the upper strip onto K0
    const MapExpr fold = MapExpr::grid_pl(
        GridPL::sample({0, 0, 8, 4}, 9, 5, [&](Point p) { return p.y >= 3 ? g({p.x, 0}) : g(p); }));
    in.f = fold;
    in.tol.h_sample = 2.5e-4;
    const QivtDerived e = derive(in);
    const TriState t = check_preimage_clause(in, e, 0.1);
    CHECK(t.verdict == Verdict::VIOLATED);
    CHECK_FALSE(t.witness.empty());
}

TEST_CASE("translations pushing the neighbourhood out of X select no W") {
    QivtInstance in;
    in.f = MapExpr::translate({0, -20});
    in.X = kSquareX;
    in.A = kBaseA;
    in.x = 1.0 / 3;
    in.y = 2.0 / 3;
    const QivtDerived d = derive(in);
    const WSelection w = select_W(in, d);
    CHECK(w.verdict.verdict != Verdict::SATISFIED);
    CHECK(w.face < 0);
}

TEST_CASE("conjugating by a similarity preserves the condition and moves the fixed point") {
    const QivtInstance base = instance("qivt_cond1.scn");
    const HypothesisReport h0 = certify_qivt(base);
    REQUIRE(h0.certificate);
    const std::vector<std::pair<double, double>> sims{{1.0, 0.7}, {1.3, -2.1}, {0.8, 3.0}};
    for (const auto& [s, a] : sims) {
        const MapExpr h = MapExpr::compose({MapExpr::complex_scale_rot(s, a), MapExpr::translate({-1.5, 2.25})});
        auto hp = [&](Point p) { return h(p); };
        QivtInstance in = base;
        in.f = conjugate(base.f, h);
        in.X = map_vertices(base.X, hp);
        in.A = map_vertices(base.A, hp);
        in.tol.eps_sep *= s;
        in.tol.grid_pitch *= s;
        in.tol.h_sample *= s;
        const HypothesisReport hc = certify_qivt(in);
        INFO("scale " << s << " angle " << a << " note " << hc.note << " uq " << hc.uq.note << " W " << hc.W.verdict.note);
        CHECK(hc.condition == h0.condition);
        CHECK(hc.overall == Verdict::SATISFIED);
        REQUIRE(hc.certificate);
        CHECK(dist(hc.certificate->approx, h(h0.certificate->approx)) <= 1e-6);
    }
}

TEST_CASE("a condition is never reported both satisfied and violated") {
    for (const char* name : {"qivt_cond1.scn", "qivt_cond2.scn", "qivt_cond1_mutant.scn"}) {
        const QivtInstance in = instance(name);
        const HypothesisReport a = certify_qivt(in), b = certify_qivt(in);
        for (int k = 0; k < 5; ++k) CHECK(a.conditions[k].verdict == b.conditions[k].verdict);
        CHECK(a.condition == b.condition);
    }
}
