#include "planefix/qivt.hpp"

#include <algorithm>
#include <cmath>

namespace planefix {

namespace {

Polyline with_ends(std::vector<Point> vs, Point a, Point b) {
    vs.front() = a;
    vs.back() = b;
    std::vector<Point> out;
    for (const Point& p : vs)
        if (out.empty() || p != out.back()) out.push_back(p);
    if (out.size() > 2 && out[out.size() - 2] == b) out.pop_back();
    return Polyline(std::move(out), false);
}

/// Arc-order comparisons with a tolerance of viol_tol in arclength.
struct ArcOrder {
    double eq;
    bool lt(double a, double b) const { return a < b - eq; }
    bool le(double a, double b) const { return a <= b + eq; }
};

ArcOrder order_of(const QivtInstance& in) { return {in.tol.viol_tol() / in.A.length()}; }

}  // namespace

QivtDerived derive(const QivtInstance& in) {
    const Tolerances& tol = in.tol;
    if (!in.X.closed() || in.X.size() < 3) throw std::invalid_argument("X must be a closed polyline");
    if (!is_simple(in.X)) throw std::invalid_argument("the boundary of X is not simple");
    if (in.A.closed() || in.A.degenerate()) throw std::invalid_argument("A must be an open arc");
    if (!is_simple(in.A)) throw std::invalid_argument("A is not simple");
    for (const Point& p : in.A.vertices())
        if (in.X.distance(p) > tol.eps_sep) throw std::invalid_argument("A leaves the boundary of X");
    if (!(in.x >= 0.0 && in.x < in.y && in.y <= 1.0)) throw std::invalid_argument("need 0 <= x < y <= 1 on A");
    const auto L = in.f.lipschitz(in.X.bounds());
    tol.validate(L ? *L : 0.0);

    QivtDerived d;
    d.S = subarc(in.A, in.x, in.y);
    d.u = in.f(d.S.front());
    d.v = in.f(d.S.back());
    d.K = image_polyline(in.f, d.S, tol.eps_sep / 4.0);
    if (!d.K.curve.degenerate()) d.K.curve = with_ends(d.K.curve.vertices(), d.u, d.v);

    double du = 0.0, dv = 0.0;
    const double pu = in.A.project(d.u, &du);
    const double pv = in.A.project(d.v, &dv);
    if (du <= tol.eps_sep) d.lu = pu;
    if (dv <= tol.eps_sep) d.lv = pv;

    d.K0_src = trim_end_tubes(in.f, d.S, tol.tube());
    if (!d.K0_src.empty() && !d.K0_src.degenerate()) d.K0 = image_polyline(in.f, d.K0_src, tol.h_sample).curve;

    if (d.lu && d.lv && *d.lu != *d.lv && d.u != d.v) {
        std::vector<Point> vs = subarc(in.A, *d.lu, *d.lv).vertices();
        if (*d.lu > *d.lv) std::reverse(vs.begin(), vs.end());
        if (vs.size() >= 2) d.uvA = with_ends(std::move(vs), d.u, d.v);
    }

    std::vector<Polyline> curves;
    if (!d.K.curve.degenerate()) curves.push_back(d.K.curve);
    if (!d.uvA.empty() && !d.uvA.degenerate()) curves.push_back(d.uvA);
    Box box = in.X.bounds();
    for (const Point& p : d.K.curve.vertices()) box.expand(p);
    double res = tol.grid_pitch;
    for (int attempt = 0; attempt < 3 && !d.dec; ++attempt, res /= 2.0) {
        try {
            d.dec = decompose_complement(curves, box, res);
        } catch (const ResolutionTooCoarse& e) {
            d.dec_note = e.what();
        } catch (const GeomError& e) {
            d.dec_note = e.what();
            break;
        }
    }
    return d;
}

TriState check_containment(const QivtInstance& in, const QivtDerived& d) {
    const Region X = Region::polygon(in.X);
    double worst = std::numeric_limits<double>::infinity();
    std::size_t wi = 0;
    const auto& vs = d.K.curve.vertices();
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const double dep = X.depth(vs[i]);
        if (dep < worst) {
            worst = dep;
            wi = i;
        }
    }
    if (worst >= -in.tol.viol_tol()) return TriState::satisfied(std::max(worst, 0.0), in.tol.eps_sep / 4.0);
    const double s = wi < d.K.src_params.size() ? d.K.src_params[wi] : 0.0;
    return TriState::violated({d.S.point_at(s), vs[wi]}, "the image of [x,y]_A leaves X");
}

TriState check_sign(const QivtInstance& in, const QivtDerived& d) {
    if (!d.lu || !d.lv) return TriState::not_applicable("u or v is off A");
    const double len = in.A.length();
    const double a = (*d.lu - in.x) * len;
    const double b = (*d.lv - in.y) * len;
    const double vt = in.tol.viol_tol();
    if (std::abs(a) <= vt || std::abs(b) <= vt) return TriState::violated({d.u, d.v}, "order product is zero");
    if (a * b < 0.0) return TriState::satisfied(std::abs(a * b));
    return TriState::violated({d.u, d.v}, "order product is positive");
}

TriState check_disjoint(const QivtInstance& in, const QivtDerived& d) {
    if (d.uvA.empty()) {
        if (d.lu && d.lv) return TriState::satisfied(in.tol.eps_sep, 0.0);  // (u,v)_A is empty
        return TriState::not_applicable("u or v is off A");
    }
    if (d.K0_src.empty() || d.K0_src.degenerate())
        return TriState::undecided(0.0, in.tol.tube(), "the image of (x,y)_A lies within the endpoint tubes");
    return dodges(in.f, d.K0_src, d.uvA, in.tol);
}

TriState check_preimage_clause(const QivtInstance& in, const QivtDerived& d, double pitch) {
    const Tolerances& tol = in.tol;
    if (d.K0.empty() || d.K0.degenerate())
        return TriState::undecided(0.0, pitch, "the image of (x,y)_A lies within the endpoint tubes");
    const Region X = Region::polygon(in.X);
    const SegmentIndex sidx = SegmentIndex::of(d.S);
    const SegmentIndex kidx = SegmentIndex::of(d.K0);
    const double eps = tol.eps_sep;
    auto admissible = [&](Point z) { return X.depth(z) >= 0.0 && !(sidx.nearest(z, eps).distance <= eps); };
    double best = std::numeric_limits<double>::infinity();
    Point best_z{};
    for (const Point& z : grid_samples(in.X.bounds(), pitch)) {
        if (!admissible(z)) continue;
        Point fz;
        try {
            fz = in.f(z);
        } catch (const OutOfDomain&) {
            continue;
        }
        const auto h = kidx.nearest(fz, best);
        if (h.distance < best) {
            best = h.distance;
            best_z = z;
        }
    }
    if (!std::isfinite(best) || best >= eps) return TriState::satisfied(std::isfinite(best) ? best : eps, pitch);
    auto phi = [&](Point z) {
        if (!admissible(z)) return std::numeric_limits<double>::infinity();
        return kidx.nearest(in.f(z)).distance;
    };
    double fmin = best;
    const Point z = pattern_min(phi, best_z, pitch, &fmin);
    if (fmin <= tol.viol_tol()) return TriState::violated({z, in.f(z)}, "a point off (x,y)_A maps onto K0");
    return TriState::undecided(best, pitch, "images of X - (x,y)_A approach K0 below eps_sep");
}

WSelection select_W(const QivtInstance& in, const QivtDerived& d) {
    WSelection out;
    if (!d.dec) {
        out.verdict = TriState::undecided(0.0, in.tol.grid_pitch, "no decomposition: " + d.dec_note);
        return out;
    }
    const ComplementDecomposition& dec = *d.dec;
    if (dec.bounded_faces().empty()) {
        out.verdict = TriState::undecided(0.0, dec.resolution, "the complement of P has no bounded component");
        return out;
    }
    std::vector<double> qs = in.q_candidates;
    if (qs.empty()) {
        const double w = in.y - in.x;
        qs = {in.x + 0.5 * w, in.x + 0.25 * w, in.x + 0.75 * w};
    }
    const Region X = Region::polygon(in.X);
    const double vt = in.tol.viol_tol();
    // face receiving all sampled images of U_q - A at radius r, or -1
    auto receiving = [&](Point q, double r) {
        int face = -2;
        int kept = 0;
        for (int ring = 1; ring <= 4; ++ring)
            for (int k = 0; k < 32; ++k) {
                const double th = 2.0 * M_PI * k / 32.0;
                const double rr = r * ring / 4.0;
                const Point p{q.x + rr * std::cos(th), q.y + rr * std::sin(th)};
                if (!(X.depth(p) > 0.01 * r)) continue;
                ++kept;
                int fi;
                try {
                    fi = point_in_face(dec, in.f(p), vt);
                } catch (const OutOfDomain&) {
                    return -1;
                }
                if (fi < 0 || fi == dec.unbounded || !dec.faces[fi].bounded) return -1;
                if (face == -2) face = fi;
                else if (face != fi) return -1;
            }
        return kept >= 8 ? face : -1;
    };
    for (double qt : qs) {
        if (!(qt > in.x && qt < in.y)) continue;
        const Point q = in.A.point_at(qt);
        int face = -1, j0 = -1;
        for (int j = 6; j >= 0; --j) {
            const int fj = receiving(q, in.tol.eps_sep * std::ldexp(1.0, -j));
            if (fj < 0 || (face >= 0 && fj != face)) break;
            face = fj;
            j0 = j;
        }
        if (j0 >= 0) {
            out.face = face;
            out.radius = in.tol.eps_sep * std::ldexp(1.0, -j0);
            out.q = qt;
            out.verdict = TriState::satisfied(out.radius, in.tol.eps_sep * std::ldexp(1.0, -6));
            out.verdict.witness = {q, dec.faces[face].representative};
            return out;
        }
    }
    out.verdict = TriState::undecided(0.0, in.tol.eps_sep * std::ldexp(1.0, -6),
                                      "images of U_q - A split across faces at every radius");
    return out;
}

namespace {

TriState d0_clause(const QivtInstance& in, const QivtDerived& d) {
    if (!d.dec) return TriState::undecided(0.0, in.tol.grid_pitch, "no decomposition: " + d.dec_note);
    const ComplementDecomposition& dec = *d.dec;
    const Tolerances& tol = in.tol;
    const Point px = in.A.point_at(in.x), py = in.A.point_at(in.y);
    std::vector<Point> samples;
    auto add = [&](double a, double b, Point avoid) {
        const Polyline arc = subarc(in.A, a, b);
        const Polyline dense = arc.degenerate() ? arc : arc.densified(tol.h_sample);
        for (const Point& p : dense.vertices())
            if (dist(p, avoid) >= tol.tube()) samples.push_back(p);
    };
    add(*d.lu, in.x, px);
    add(in.y, *d.lv, py);
    if (samples.empty()) return TriState::undecided(0.0, tol.tube(), "the tails lie within the endpoint tubes");
    long n_in = 0, n_out = 0, n_near = 0;
    Point w_in{}, w_out{}, fw_in{}, fw_out{};
    double margin = std::numeric_limits<double>::infinity();
    for (const Point& p : samples) {
        const Point fp = in.f(p);
        const double cd = dec.index.nearest(fp, tol.eps_sep).distance;
        if (cd <= tol.viol_tol()) return TriState::violated({p, fp}, "a tail point maps onto P");
        if (cd <= tol.eps_sep) {
            ++n_near;
            continue;
        }
        margin = std::min(margin, std::isfinite(cd) ? cd : margin);
        const int fi = point_in_face(dec, fp, tol.viol_tol());
        if (fi >= 0 && fi != dec.unbounded && dec.faces[fi].bounded) {
            if (n_in++ == 0) { w_in = p; fw_in = fp; }
        } else if (fi == dec.unbounded) {
            if (n_out++ == 0) { w_out = p; fw_out = fp; }
        } else {
            ++n_near;
        }
    }
    if (!std::isfinite(margin)) margin = tol.eps_sep;
    if (n_near == 0 && (n_in == 0 || n_out == 0)) {
        TriState t = TriState::satisfied(margin, tol.h_sample);
        t.note = n_in > 0 ? "tails map into the interior of D0" : "tails map outside D0";
        return t;
    }
    if (n_near == 0) return TriState::violated({w_in, fw_in, w_out, fw_out}, "tails map both inside and outside D0");
    return TriState::undecided(0.0, tol.h_sample, "tail images approach the boundary of D0");
}

}  // namespace

TriState check_condition(const QivtInstance& in, const QivtDerived& d, int which) {
    if (!d.lu || !d.lv) return TriState::not_applicable("u or v is off A");
    const ArcOrder o = order_of(in);
    const double x = in.x, y = in.y, u = *d.lu, v = *d.lv;
    const TriState mismatch = TriState::not_applicable("order pattern does not match");
    switch (which) {
        case 1:
            if (o.le(x, u) && o.le(u, y) && o.le(x, v) && o.le(v, y)) return TriState::satisfied(in.tol.eps_sep, 0.0);
            return mismatch;
        case 2:
            if (!(o.le(x, v) && o.lt(v, y) && o.lt(y, u))) return mismatch;
            return is_moving(in.f, subarc(in.A, y, u), in.tol);
        case 3:
            if (!(o.lt(v, x) && o.lt(x, u) && o.le(u, y))) return mismatch;
            return is_moving(in.f, subarc(in.A, v, x), in.tol);
        case 4:
            if (!(o.lt(v, x) && o.lt(x, y) && o.lt(y, u))) return mismatch;
            return combine(is_moving(in.f, subarc(in.A, v, x), in.tol), is_moving(in.f, subarc(in.A, y, u), in.tol));
        case 5:
            if (!(o.lt(u, x) && o.lt(x, y) && o.lt(y, v))) return mismatch;
            return d0_clause(in, d);
        default:
            throw std::invalid_argument("condition number must be 1..5");
    }
}

HypothesisReport certify_qivt(const QivtInstance& in, QivtDerived* derived) {
    HypothesisReport r;
    QivtDerived local;
    QivtDerived& d = derived ? *derived : local;
    d = derive(in);
    const Tolerances& tol = in.tol;
    {
        double du = 0.0, dv = 0.0;
        in.A.project(d.u, &du);
        in.A.project(d.v, &dv);
        if (d.lu && d.lv) r.on_arc = TriState::satisfied(tol.eps_sep - std::max(du, dv), tol.eps_sep);
        else r.on_arc = TriState::violated({d.lu ? d.v : d.u}, "u or v is off A");
    }
    r.sign = check_sign(in, d);
    r.containment = check_containment(in, d);
    r.disjoint = check_disjoint(in, d);
    r.preimage = check_preimage_clause(in, d, tol.grid_pitch);
    r.W = select_W(in, d);
    r.uq = r.W.verdict;
    for (int k = 1; k <= 5; ++k) {
        r.conditions[k - 1] = check_condition(in, d, k);
        if (r.condition == 0 && r.conditions[k - 1].verdict != Verdict::NOT_APPLICABLE) r.condition = k;
    }
    TriState all = r.on_arc;
    for (const TriState* t : {&r.sign, &r.containment, &r.disjoint, &r.preimage, &r.uq}) all = combine(all, *t);
    all = combine(all, r.condition ? r.conditions[r.condition - 1]
                                   : TriState::undecided(0.0, 0.0, "no order pattern matches"));
    r.overall = all.verdict;
    if (r.overall == Verdict::NOT_APPLICABLE) r.overall = Verdict::UNDECIDED;
    if (r.overall != Verdict::SATISFIED) {
        r.note = all.note;
        return r;
    }
    const ComplementDecomposition& dec = *d.dec;
    const Face& W = dec.faces[r.W.face];
    LocateOptions lo;
    lo.tol_fix = tol.tol_fix;
    lo.eps_sep = tol.eps_sep;
    lo.seed_jitter = tol.seed_jitter;
    r.located = locate(in.f, cover_in_domain(in.f, W.extent), lo);
    for (const auto& c : r.located.certificates) {
        if (point_in_face(dec, c.approx, tol.viol_tol()) == r.W.face) {
            r.certificate = c;
            break;
        }
    }
    if (!r.certificate) {
        r.inconsistent = true;
        r.note = "all hypotheses hold but no fixed point was certified in W";
    }
    return r;
}

}  // namespace planefix
