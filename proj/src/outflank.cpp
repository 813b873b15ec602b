#include "planefix/outflank.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace planefix {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

/// Index of the vertex of p equal to q, if any.
std::optional<std::size_t> vertex_index(const Polyline& p, Point q) {
    const auto& vs = p.vertices();
    for (std::size_t i = 0; i < vs.size(); ++i)
        if (vs[i] == q) return i;
    return std::nullopt;
}

/// Two-sided Hausdorff distance between polylines, sampled at pitch h.
double hausdorff(const Polyline& a, const Polyline& b, double h) {
    const Polyline da = a.degenerate() ? a : a.densified(h);
    const Polyline db = b.degenerate() ? b : b.densified(h);
    auto one_sided = [](const Polyline& from, const Polyline& to) {
        double worst = 0.0;
        if (to.degenerate()) {
            for (const Point& p : from.vertices()) worst = std::max(worst, dist(p, to.front()));
            return worst;
        }
        const SegmentIndex idx = SegmentIndex::of(to);
        for (const Point& p : from.vertices()) worst = std::max(worst, idx.nearest(p).distance);
        return worst;
    };
    return std::max(one_sided(da, db), one_sided(db, da));
}

/// Point separation as a moving verdict for a degenerate arc.
TriState point_moving(const MapExpr& f, Point p, const Tolerances& tol) {
    const Point fp = f(p);
    const double d = dist(fp, p);
    if (d >= tol.eps_sep) return TriState::satisfied(d, 0.0);
    if (d <= tol.viol_tol()) return TriState::violated({p, fp}, "the point is fixed");
    return TriState::undecided(d, 0.0, "displacement below eps_sep");
}

struct PrefixHit {
    double distance = std::numeric_limits<double>::infinity();
    double param = 0.0;
    Point closest{};
};

/// Nearest point of [u_0, s)_A to p.
PrefixHit prefix_nearest(const Polyline& A, const SegmentIndex& idx, double s, Point p) {
    PrefixHit out;
    if (s <= 0.0) return out;
    const auto [k, frac] = A.locate(s);
    const auto h = idx.nearest(p, std::numeric_limits<double>::infinity(),
                               [s](const TaggedSegment& g) { return g.t1 <= s; });
    if (std::isfinite(h.distance)) {
        const TaggedSegment& g = idx.segments()[h.segment];
        const double len = dist(g.a, g.b);
        const double fr = len > 0 ? dist(g.a, h.closest) / len : 0.0;
        out = {h.distance, g.t0 + (g.t1 - g.t0) * fr, h.closest};
    }
    const Point a = A.seg_a(k);
    const Point b = A.point_at(s);
    if (frac > 0.0 && a != b) {
        double t = 0.0;
        const Point c = closest_on_segment(p, a, b, &t);
        const double d = dist(p, c);
        if (d < out.distance) {
            const double t0 = A.vertex_param(k);
            out = {d, t0 + (s - t0) * t, c};
        }
    }
    return out;
}

}  // namespace

double step_deviation(const StepArc& sa, int k, double h) {
    const Polyline src = subarc(sa.A, sa.orbit_params[k - 1], sa.orbit_params[k]);
    const Polyline tgt = subarc(sa.A, sa.orbit_params[k], sa.orbit_params[k + 1]);
    const Polyline img = image_polyline(sa.f, src, h).curve;
    return hausdorff(img, tgt, h);
}

TriState validate_step_arc(const StepArc& sa, const Tolerances& tol) {
    const auto& t = sa.orbit_params;
    if (t.size() < 2) return TriState::violated({}, "an n-step arc needs at least u_0 and u_1");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (!(t[i] > t[i - 1])) return TriState::violated({sa.A.point_at(t[i])}, "orbit parameters are not increasing");
    if (std::abs(t.front()) > 1e-12 || std::abs(t.back() - 1.0) > 1e-12)
        return TriState::violated({sa.u(0), sa.u(sa.n())}, "u_0 and u_n must be the endpoints of A");
    Point p = sa.u(0);
    for (int k = 1; k <= sa.n(); ++k) {
        p = sa.f(p);
        if (dist(p, sa.u(k)) > tol.eps_sep)
            return TriState::violated({sa.u(k), p}, "orbit inconsistency at k=" + std::to_string(k));
    }
    if (sa.n() == 1) return TriState::satisfied(tol.eps_sep, tol.h_sample);  // no step equation
    double worst = 0.0;
    int worst_k = 1;
    for (int k = 1; k < sa.n(); ++k) {
        const double d = step_deviation(sa, k, tol.h_sample);
        if (d > worst) {
            worst = d;
            worst_k = k;
        }
    }
    if (worst <= tol.eps_sep) return TriState::satisfied(tol.eps_sep - worst, tol.h_sample);
    return TriState::violated({sa.u(worst_k - 1), sa.u(worst_k)},
                              "step " + std::to_string(worst_k) + " deviates by " + fmt(worst));
}

StepArc transform(const StepArc& sa, const MapExpr& h) {
    StepArc out;
    out.A = map_vertices(sa.A, [&](Point p) { return h(p); });
    out.f = conjugate(sa.f, h);
    for (std::size_t i = 0; i < sa.orbit_params.size(); ++i) {
        const double t = sa.orbit_params[i];
        auto vi = vertex_index(sa.A, sa.A.point_at(t));
        if (vi && out.A.size() == sa.A.size()) out.orbit_params.push_back(out.A.vertex_param(*vi));
        else out.orbit_params.push_back(out.A.project(h(sa.A.point_at(t))));
    }
    return out;
}

OutflankSearch find_outflanking_point(const StepArc& sa, const Tolerances& tol) {
    OutflankSearch out;
    out.step_check = validate_step_arc(sa, tol);
    if (!out.step_check.ok()) {
        out.diagnostics.push_back(std::string("step arc not validated: ") + to_string(out.step_check.verdict) + " " +
                                  out.step_check.note);
        return out;
    }
    const Polyline& A = sa.A;
    const int n = sa.n();
    const double t_lo = sa.orbit_params[n - 1];
    const double dt = tol.h_sample / A.length();
    const SegmentIndex idx = SegmentIndex::of(A);
    auto contact = [&](double s) { return prefix_nearest(A, idx, s, sa.f(A.point_at(s))).distance; };

    double s_prev = t_lo;
    for (long k = 1;; ++k) {
        const double s = std::min(1.0, t_lo + k * dt);
        if (contact(s) <= tol.eps_sep) {
            // the window where the image stays within eps_sep of [u_0, s)_A
            double b = s;
            while (b < 1.0) {
                const double nb = std::min(1.0, b + dt);
                b = nb;
                if (contact(nb) > tol.eps_sep) break;
            }
            const double a = s_prev;
            double dmin = 0.0;
            double y = golden_min(contact, a, b, &dmin);
            if (dmin <= tol.viol_tol() && y > t_lo) {
                // an earlier zero in the window wins over the minimiser
                double lo = a, hi = y;
                while (hi - lo > 1e-15 * (1.0 + hi)) {
                    const double mid = 0.5 * (lo + hi);
                    if (mid <= lo || mid >= hi) break;
                    (contact(mid) <= tol.viol_tol() ? hi : lo) = mid;
                }
                if (y - hi > 1e-6 && hi > t_lo) y = hi;
            }
            if (dmin <= tol.viol_tol() && y > t_lo) {
                OutflankCertificate c;
                c.base = sa;
                c.y = y;
                c.y_point = A.point_at(y);
                c.v = sa.f(c.y_point);
                const PrefixHit ph = prefix_nearest(A, idx, y, c.v);
                c.v_param = ph.param;
                c.contact = ph.distance;

                const Polyline tail = subarc(A, t_lo, y);
                const double pitch = std::max(tol.h_sample, tail.length() / 3000.0);
                const Polyline dense = tail.degenerate() ? tail : tail.densified(pitch);
                const auto inj = injectivity_margin(sa.f, dense.vertices(), tol.eps_sep);
                c.injectivity = inj.value > tol.viol_tol() ? TriState::satisfied(inj.value, pitch)
                                                           : TriState::violated({inj.p, inj.q}, "f is not injective");
                const Polyline core = trim_end_tubes(sa.f, tail, tol.tube());
                c.dodge = (core.empty() || core.degenerate())
                              ? TriState::undecided(0.0, tol.tube(), "the dodging arc lies within the endpoint tubes")
                              : dodges(sa.f, core, A, tol);
                const Polyline head = subarc(A, y, 1.0);
                c.moving = head.degenerate() ? point_moving(sa.f, head.front(), tol) : is_moving(sa.f, head, tol);
                if (c.injectivity.ok() && c.dodge.ok() && c.moving.ok()) {
                    out.certificate = c;
                    return out;
                }
                out.diagnostics.push_back("y=" + fmt(y) + ": injectivity " + to_string(c.injectivity.verdict) +
                                          ", dodge " + to_string(c.dodge.verdict) + ", moving " +
                                          to_string(c.moving.verdict));
            } else {
                out.diagnostics.push_back("near return at y=" + fmt(y) + " misses [u_0,y)_A by " + fmt(dmin));
            }
            if (b >= 1.0) break;
            s_prev = b;
            k = static_cast<long>(std::ceil((b - t_lo) / dt));
            continue;
        }
        if (s >= 1.0) break;
        s_prev = s;
    }
    out.diagnostics.push_back("no parameter in (u_{n-1}, u_n] returns onto [u_0, y)_A");
    return out;
}

OutflankCertificate reduce_outflanked_origin(const OutflankCertificate& cert) {
    const StepArc& sa = cert.base;
    const auto& t = sa.orbit_params;
    int k = 0;
    for (int i = 1; i < sa.n(); ++i)
        if (t[i] <= cert.v_param) k = i;
    if (k == 0) return cert;
    OutflankCertificate out = cert;
    const double tk = t[k];
    out.base.A = subarc(sa.A, tk, 1.0);
    auto remap = [&](double s) { return std::clamp((s - tk) / (1.0 - tk), 0.0, 1.0); };
    out.base.orbit_params.clear();
    for (int i = k; i <= sa.n(); ++i) {
        auto vi = vertex_index(out.base.A, sa.A.point_at(t[i]));
        out.base.orbit_params.push_back(vi ? out.base.A.vertex_param(*vi) : remap(t[i]));
    }
    out.base.orbit_params.front() = 0.0;
    out.base.orbit_params.back() = 1.0;
    out.y = remap(cert.y);
    out.v_param = remap(cert.v_param);
    return out;
}

Construction construct_from_periodic_orbit(const MapExpr& f, Point x, int m, const Tolerances& tol) {
    Construction c;
    auto fail = [&](std::string step, std::string why) {
        c.ok = false;
        c.failed_step = std::move(step);
        c.diagnostic = std::move(why);
        return c;
    };
    if (m < 2) return fail("precondition", "the period must be at least 2");
    const Orbit o = orbit(f, x, m);
    if (o.truncated) return fail("precondition", "the orbit leaves the domain");
    if (dist(o.points[m], x) > tol.eps_sep) return fail("precondition", "x does not return after m steps");
    const Point u1 = o.points[1];
    if (dist(u1, x) <= tol.eps_sep) return fail("precondition", "x is fixed at resolution");

    // similarity sending x to 0 and u_1 to 1
    const Point w0 = u1 - x;
    const double s2 = dot(w0, w0);
    const Mat2 M{w0.x / s2, w0.y / s2, -w0.y / s2, w0.x / s2};
    const Mat2 Minv{w0.x, -w0.y, w0.y, w0.x};
    const MapExpr h = MapExpr::affine(M, Point{} - M.apply(x));
    const MapExpr hinv = MapExpr::affine(Minv, x);
    MapExpr g = MapExpr::compose({hinv, f, h});
    const Point zero{0.0, 0.0};
    const Point g0 = g(zero);
    const double scale = std::sqrt(s2);
    const double chord_n = tol.h_sample / scale;

    auto square = [](double t) { return Polyline({{t, t}, {-t, t}, {-t, -t}, {t, -t}}, true); };
    auto touching = [&](double t) {
        if (std::max(std::abs(g0.x), std::abs(g0.y)) <= t) return true;
        const Polyline sq = square(t);
        const ImagePolyline img = image_polyline(g, sq, std::min(chord_n, t / 64.0));
        if (img.curve.closed() && polygon_contains(img.curve, zero)) return true;
        return curve_gap(img.curve, SegmentIndex::of(sq)).distance <= 0.0;
    };
    double lo = 0.0, hi = 1.0;
    try {
        if (!touching(hi)) return fail("contact search", "f(Q_t) does not meet Q_t for t <= 1");
        while (hi - lo > 1e-9 * hi) {
            const double mid = 0.5 * (lo + hi);
            (touching(mid) ? hi : lo) = mid;
        }
    } catch (const OutOfDomain&) {
        return fail("contact search", "f(Q_t) leaves the domain before meeting Q_t");
    }
    const double b = hi;
    c.contact_t = b;

    // contact points on the boundary of Q_b, ordered anticlockwise from (b,b)
    const Polyline sq = square(b);
    const ImagePolyline img = image_polyline(g, sq, std::min(chord_n, b / 64.0));
    struct Cand {
        double param;
        Point w;
        double src;
    };
    std::vector<Cand> cands;
    const auto& iv = img.curve.vertices();
    const std::size_t nseg = img.curve.segment_count();
    for (std::size_t i = 0; i < nseg; ++i) {
        const Point a = img.curve.seg_a(i), e = img.curve.seg_b(i);
        const double s0 = img.src_params[i];
        const double s1 = (i + 1 < iv.size()) ? img.src_params[i + 1] : 1.0;
        for (std::size_t j = 0; j < sq.segment_count(); ++j)
            for (const Point& p : segment_intersection_points(a, e, sq.seg_a(j), sq.seg_b(j))) {
                const double len = dist(a, e);
                const double fr = len > 0 ? dist(a, p) / len : 0.0;
                cands.push_back({sq.project(p), p, s0 + (s1 - s0) * fr});
            }
    }
    if (cands.empty()) {
        const CurveGap gap = curve_gap(img.curve, SegmentIndex::of(sq));
        const double s0 = img.src_params[gap.seg_a];
        const double s1 = gap.seg_a + 1 < iv.size() ? img.src_params[gap.seg_a + 1] : 1.0;
        const Point a = img.curve.seg_a(gap.seg_a), e = img.curve.seg_b(gap.seg_a);
        const double len = dist(a, e);
        const double fr = len > 0 ? dist(a, gap.on_a) / len : 0.0;
        cands.push_back({sq.project(gap.on_b), gap.on_b, s0 + (s1 - s0) * fr});
    }
    const Cand best = *std::min_element(cands.begin(), cands.end(),
                                        [](const Cand& p, const Cand& q) { return p.param < q.param; });
    const Point w = best.w;
    const Point wp = sq.point_at(best.src);
    c.w = w;
    if (w == zero || wp == zero) return fail("contact point", "the contact point coincides with x");

    // J = [x,w] u L with L = f([x,w']) traversed from w to u_1
    const ImagePolyline L = image_polyline(g, Polyline({wp, zero}), std::min(chord_n, b / 64.0));
    std::vector<Point> jv{zero, w};
    const auto& lv = L.curve.vertices();
    for (std::size_t i = 1; i < lv.size(); ++i)
        if (lv[i] != jv.back()) jv.push_back(lv[i]);
    if (jv.back() != g0) jv.push_back(g0);
    try {
        c.J = Polyline(jv, false);
    } catch (const GeomError& e) {
        return fail("arc J", e.what());
    }
    if (auto s = is_simple(c.J); !s) return fail("arc J", "J is not simple");

    {
        const auto samples = grid_samples(Box{-b, -b, b, b}, b / 16.0);
        const auto inj = injectivity_margin(g, samples, b / 16.0);
        c.injectivity = inj.value > tol.viol_tol() / scale
                            ? TriState::satisfied(inj.value * scale, b * scale / 16.0)
                            : TriState::violated({h(inj.p), h(inj.q)}, "f is not injective near x");
        if (!c.injectivity.ok()) return fail("injectivity", "f is not injective on Q_b");
    }

    std::vector<Polyline> pieces{c.J};
    for (int n = 1; n <= m - 1; ++n) {
        if (n > 1) pieces.push_back(image_polyline(g, pieces.back(), chord_n).curve);
        std::vector<Point> verts = pieces[0].vertices();
        std::vector<std::size_t> junction{0};
        for (std::size_t i = 1; i < pieces.size(); ++i) {
            junction.push_back(verts.size() - 1);
            const auto& pv = pieces[i].vertices();
            for (std::size_t k = (pv.front() == verts.back()) ? 1 : 0; k < pv.size(); ++k) verts.push_back(pv[k]);
        }
        junction.push_back(verts.size() - 1);
        Polyline An;
        try {
            An = Polyline(verts, false);
        } catch (const GeomError& e) {
            return fail("assembly", e.what());
        }
        if (auto s = is_simple(An); !s) {
            c.n = n;
            c.witness = {hinv(An.seg_a(s.seg_i)), hinv(An.seg_b(s.seg_i)), hinv(An.seg_a(s.seg_j)),
                         hinv(An.seg_b(s.seg_j))};
            return fail("assembly", "the assembled arc for n=" + std::to_string(n) + " is not simple");
        }
        StepArc sa;
        sa.A = map_vertices(An, [&](Point p) { return hinv(p); });
        sa.f = f;
        for (std::size_t j : junction)
            sa.orbit_params.push_back(sa.A.size() == An.size() ? sa.A.vertex_param(j) : sa.A.project(hinv(verts[j])));
        sa.orbit_params.front() = 0.0;
        sa.orbit_params.back() = 1.0;
        const OutflankSearch found = find_outflanking_point(sa, tol);
        if (found.certificate) {
            c.ok = true;
            c.n = n;
            c.proof_case = n == 1 ? 1 : 2;
            c.certificate = found.certificate;
            return c;
        }
        for (const auto& d : found.diagnostics) c.attempts.push_back("n=" + std::to_string(n) + ": " + d);
    }
    return fail("outflanking point", "no outflanking arc with n < m");
}

OutflankReport certify_outflank(const OutflankCertificate& cert, const Region& E, const Tolerances& tol,
                                 const CertifyOptions& opt) {
    OutflankReport r;
    const StepArc& sa = cert.base;
    const MapExpr& f = sa.f;
    const Polyline& A = sa.A;
    const int n = sa.n();
    const double t_lo = sa.orbit_params[n - 1];

    {
        const ImagePolyline fa = image_polyline(f, A, tol.h_sample);
        double worst = std::numeric_limits<double>::infinity();
        Point wp{};
        for (const Polyline* c : {&A, &fa.curve})
            for (const Point& p : c->vertices()) {
                const double d = E.depth(p);
                if (d < worst) {
                    worst = d;
                    wp = p;
                }
            }
        if (worst >= tol.eps_sep) r.containment = TriState::satisfied(worst, tol.h_sample);
        else if (worst < 0.0) r.containment = TriState::violated({wp}, "A or f(A) leaves E");
        else r.containment = TriState::undecided(worst, tol.h_sample, "A or f(A) within eps_sep of the boundary of E");
    }

    r.u_center = sa.u(n - 1);
    r.u_radius = opt.u_radius > 0 ? opt.u_radius : std::min(10.0 * tol.eps_sep, 0.5 * E.depth(r.u_center));
    if (!(r.u_radius > 0)) {
        r.orientation = TriState::undecided(0.0, 0.0, "u_{n-1} is not interior to E");
        r.injectivity = r.orientation;
    } else {
        const LocalOrientation lo = local_orientation(f, r.u_center, r.u_radius);
        switch (lo.orientation) {
            case Orientation::PRESERVING: r.orientation = TriState::satisfied(r.u_radius, r.u_radius / 8.0); break;
            case Orientation::REVERSING: r.orientation = TriState::violated({r.u_center}, "f reverses orientation"); break;
            default: r.orientation = TriState::undecided(0.0, r.u_radius / 8.0, lo.note); break;
        }
        if (lo.injectivity > tol.viol_tol()) r.injectivity = TriState::satisfied(lo.injectivity, r.u_radius / 8.0);
        else if (lo.note == "not injective at resolution")
            r.injectivity = TriState::violated({r.u_center}, "two sampled points share an image");
        else r.injectivity = TriState::undecided(lo.injectivity, r.u_radius / 8.0, lo.note);
    }

    const Polyline tail = subarc(A, t_lo, cert.y);
    r.exclusive = exclusive_in(f, tail, E, tol, tol.grid_pitch / 4.0);

    // P = f([u_{n-1}, y]_A) u [v, u]_A
    {
        const Polyline vu = subarc(A, cert.v_param, 1.0);
        const ImagePolyline K = image_polyline(f, tail, tol.eps_sep / 4.0);
        const Point ka = A.back(), kb = vu.front();
        if (K.curve.degenerate() || vu.degenerate() || dist(K.curve.front(), ka) > tol.eps_sep ||
            dist(K.curve.back(), kb) > tol.eps_sep) {
            r.w_select = TriState::undecided(0.0, tol.eps_sep, "f([u_{n-1},y]_A) does not close up with [v,u]_A");
        } else {
            std::vector<Point> kv = K.curve.vertices();
            kv.front() = ka;
            kv.back() = kb;
            std::vector<Point> kd;
            for (const Point& p : kv)
                if (kd.empty() || p != kd.back()) kd.push_back(p);
            r.K = Polyline(kd, false);
            Box box = E.bounds();
            for (const Point& p : kd) box.expand(p);
            std::string why;
            double res = tol.grid_pitch;
            for (int attempt = 0; attempt < 3 && !r.dec; ++attempt, res /= 2.0) {
                try {
                    r.dec = decompose_complement({r.K, vu}, box, res);
                } catch (const GeomError& e) {
                    why = e.what();
                }
            }
            if (!r.dec) {
                r.w_select = TriState::undecided(0.0, res, "no decomposition: " + why);
            } else {
                const auto bf = r.dec->bounded_faces();
                if (bf.size() == 1) {
                    r.W = bf.front();
                    r.w_select = TriState::satisfied(r.dec->faces[r.W].clearance, r.dec->resolution);
                } else {
                    r.w_select = TriState::undecided(0.0, r.dec->resolution,
                                                     std::to_string(bf.size()) + " bounded components instead of one");
                }
            }
        }
    }

    TriState all = r.containment;
    for (const TriState* t : std::initializer_list<const TriState*>{&r.orientation, &r.injectivity, &r.exclusive, &r.w_select, &cert.injectivity,
                              &cert.dodge, &cert.moving})
        all = combine(all, *t);
    r.overall = all.verdict == Verdict::NOT_APPLICABLE ? Verdict::UNDECIDED : all.verdict;
    if (r.overall != Verdict::SATISFIED) {
        r.note = all.note;
        return r;
    }
    LocateOptions lo;
    lo.tol_fix = tol.tol_fix;
    lo.eps_sep = tol.eps_sep;
    lo.seed_jitter = tol.seed_jitter;
    r.located = locate(f, cover_in_domain(f, r.dec->faces[r.W].extent), lo);
    for (const auto& c : r.located.certificates)
        if (point_in_face(*r.dec, c.approx, tol.viol_tol()) == r.W) {
            r.certificate = c;
            break;
        }
    if (!r.certificate) {
        r.searched_whole_disc = true;
        r.located = locate(f, cover_in_domain(f, E.bounds()), lo);
        for (const auto& c : r.located.certificates)
            if (E.depth(c.approx) > 0.0) {
                r.certificate = c;
                break;
            }
    }
    if (!r.certificate) {
        r.inconsistent = true;
        r.note = "all hypotheses hold but no fixed point was certified in the interior of E";
    }
    return r;
}

}  // namespace planefix
