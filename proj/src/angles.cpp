#include "planefix/angles.hpp"

#include <algorithm>
#include <cmath>

namespace planefix {

double directed_angle(Point v, Point x, Point y) {
    if (v == x || v == y) throw DegenerateAngle("directed angle needs points distinct from the vertex");
    const int o = orient(v, x, y);
    const Point a = x - v, b = y - v;
    const double dp = dot(a, b);
    if (o == 0 && dp < 0) throw DegenerateAngle("rays point in opposite directions");
    const double cr = cross(a, b);
    if (o != 0 && cr == 0.0 && dp < 0) return o * std::nextafter(M_PI, 0.0);
    return std::atan2(cr, dp);
}

double rotational_angle(const PathFn& rho, std::vector<double> ts, Point v, double eps, double min_dist,
                        std::size_t* samples_used) {
    if (ts.size() < 2) {
        if (samples_used) *samples_used = ts.size();
        return 0.0;
    }
    std::vector<std::pair<double, Point>> s;
    s.reserve(ts.size());
    for (double t : ts) s.push_back({t, rho(t)});
    const bool known = min_dist > 0;
    double d = known ? min_dist : std::numeric_limits<double>::infinity();
    const std::size_t cap = 20'000'000;
    while (true) {
        if (!known)
            for (const auto& [t, p] : s) d = std::min(d, dist(p, v));
        if (!(d > eps)) throw UndefinedAngle("path passes within tolerance of the centre");
        bool refined = false;
        std::vector<std::pair<double, Point>> next;
        next.reserve(s.size() * 2);
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
            next.push_back(s[i]);
            if (dist(s[i].second, s[i + 1].second) >= d / 3.0) {
                double tm = 0.5 * (s[i].first + s[i + 1].first);
                if (tm == s[i].first || tm == s[i + 1].first)
                    throw UndefinedAngle("path is discontinuous at parameter resolution");
                next.push_back({tm, rho(tm)});
                refined = true;
            }
        }
        next.push_back(s.back());
        s.swap(next);
        if (!refined) break;
        if (s.size() > cap) throw UndefinedAngle("rotational angle refinement did not converge");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        if (s[i].second == s[i + 1].second) continue;
        sum += directed_angle(v, s[i].second, s[i + 1].second);
    }
    if (samples_used) *samples_used = s.size();
    return sum;
}

double rotational_angle(const Polyline& path, Point v, double eps) {
    const double d = path.distance(v);
    if (!(d > eps)) throw UndefinedAngle("path passes within tolerance of the centre");
    const double chord = d / 3.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < path.segment_count(); ++i) {
        const Point a = path.seg_a(i), b = path.seg_b(i);
        const auto k = static_cast<std::size_t>(std::floor(dist(a, b) / chord)) + 1;
        Point prev = a;
        for (std::size_t j = 1; j <= k; ++j) {
            Point q = j == k ? b : a + (static_cast<double>(j) / static_cast<double>(k)) * (b - a);
            if (q != prev) sum += directed_angle(v, prev, q);
            prev = q;
        }
    }
    return sum;
}

Polyline DirectedCircle::traversal() const {
    const auto& v = curve.vertices();
    const std::size_t n = v.size();
    std::vector<Point> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t i = sense > 0 ? (start_vertex + k) % n : (start_vertex + n - k) % n;
        out.push_back(v[i]);
    }
    return Polyline(std::move(out), true);
}

int winding_number(const DirectedCircle& c, Point v, double eps) {
    const double a = rotational_angle(c.traversal(), v, eps);
    const double w = a / (2.0 * M_PI);
    const double r = std::round(w);
    if (std::abs(w - r) >= 1e-6) throw UndefinedAngle("winding residual exceeds 1e-6");
    return static_cast<int>(r);
}

const char* to_string(Orientation o) {
    switch (o) {
        case Orientation::PRESERVING: return "PRESERVING";
        case Orientation::REVERSING: return "REVERSING";
        case Orientation::UNDECIDED: return "UNDECIDED";
    }
    return "?";
}

const char* to_string(Side s) {
    switch (s) {
        case Side::LEFT: return "LEFT";
        case Side::RIGHT: return "RIGHT";
        case Side::NOT_APPLICABLE: return "NOT_APPLICABLE";
    }
    return "?";
}

Orientation orientation_of_embedding(const DirectedCircle& c, const DirectedCircle& image, Point v, Point w,
                                     double eps) {
    const int a = winding_number(c, v, eps);
    const int b = winding_number(image, w, eps);
    if (a == 0 || b == 0) throw std::invalid_argument("reference point is not interior to its circle");
    // product of the full rotational angles is 4*pi^2*a*b
    return a * b > 0 ? Orientation::PRESERVING : Orientation::REVERSING;
}

Point interior_point(const DirectedCircle& c) {
    const Polyline& p = c.curve;
    std::size_t best = 0;
    double len = -1.0;
    for (std::size_t i = 0; i < p.segment_count(); ++i) {
        double l = dist(p.seg_a(i), p.seg_b(i));
        if (l > len) {
            len = l;
            best = i;
        }
    }
    const Point a = p.seg_a(best), b = p.seg_b(best);
    const Point m = 0.5 * (a + b);
    const Point n = Point{-(b - a).y, (b - a).x} / len;
    for (int k = 2; k < 60; ++k) {
        const double delta = len * std::ldexp(1.0, -k);
        for (double sgn : {1.0, -1.0}) {
            Point q = m + (sgn * delta) * n;
            if (p.distance(q) > 0.0 && polygon_contains(p, q)) return q;
        }
    }
    throw GeomError("no interior point found");
}

int overall_orientation(const DirectedCircle& c) {
    const int w = winding_number(c, interior_point(c));
    return w > 0 ? 1 : (w < 0 ? -1 : 0);
}

int shoelace_sign(const DirectedCircle& c) {
    const Polyline t = c.traversal();
    double a = 0.0;
    for (std::size_t i = 0; i < t.segment_count(); ++i) a += cross(t.seg_a(i), t.seg_b(i));
    return a > 0 ? 1 : (a < 0 ? -1 : 0);
}

Side side_of_directed_circle(const DirectedCircle& c, Point p, double eps) {
    if (c.curve.distance(p) <= eps) throw std::invalid_argument("point lies on the circle");
    const int s = overall_orientation(c);
    const bool inside = winding_number(c, p, eps) != 0;
    return (inside == (s > 0)) ? Side::LEFT : Side::RIGHT;
}

Side side_of_directed_arc(const DirectedArc& a, const DirectedCircle& d, double contact_tol, double sample_pitch) {
    const Polyline path = a.traversal().densified(sample_pitch);
    const auto& pts = path.vertices();
    const SegmentIndex ci = SegmentIndex::of(d.curve);
    enum { OUT, ON, IN };
    std::vector<int> cls(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        auto h = ci.nearest(pts[i], contact_tol);
        if (h.distance <= contact_tol) cls[i] = ON;
        else cls[i] = polygon_contains(d.curve, pts[i]) ? IN : OUT;
        if (cls[i] == IN) return Side::NOT_APPLICABLE;
    }
    long r0 = -1, r1 = -1;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (cls[i] != ON) continue;
        if (r0 < 0) r0 = r1 = static_cast<long>(i);
        else if (r1 == static_cast<long>(i) - 1) r1 = static_cast<long>(i);
        else return Side::NOT_APPLICABLE;  // a second contact run
    }
    if (r0 <= 0 || r1 <= r0 || r1 >= static_cast<long>(pts.size()) - 1) return Side::NOT_APPLICABLE;
    const double s0 = d.curve.project(pts[r0]);
    const double s1 = d.curve.project(pts[(r0 + r1) / 2]);
    const double s2 = d.curve.project(pts[r1]);
    auto fwd = [](double from, double to) {
        double x = to - from;
        return x < 0 ? x + 1.0 : x;
    };
    const bool forward = fwd(s0, s1) < fwd(s0, s2);
    const int vertex_order = overall_orientation(DirectedCircle{d.curve, 0, +1});
    const int induced = forward ? vertex_order : -vertex_order;
    return induced > 0 ? Side::LEFT : Side::RIGHT;
}

}  // namespace planefix
