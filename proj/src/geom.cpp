#include "planefix/geom.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>

namespace planefix {

void Box::expand(Point p) {
    x0 = std::min(x0, p.x);
    y0 = std::min(y0, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
}

Box Box::of(Point a, Point b) {
    return {std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.x, b.x), std::max(a.y, b.y)};
}

Box Box::empty() {
    const double inf = std::numeric_limits<double>::infinity();
    return {inf, inf, -inf, -inf};
}

Box bounds_of(const std::vector<Point>& pts) {
    Box b = Box::empty();
    for (const auto& p : pts) b.expand(p);
    return b;
}

// ---------------------------------------------------------------- predicates

namespace {

int orient_exact(Point a, Point b, Point c) {
    using boost::multiprecision::cpp_rational;
    cpp_rational ax(a.x), ay(a.y), bx(b.x), by(b.y), cx(c.x), cy(c.y);
    cpp_rational det = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx);
    return det.sign();
}

}  // namespace

int orient(Point a, Point b, Point c) {
    // Shewchuk's stage-A filter, exact rational fallback.
    const double detleft = (a.x - c.x) * (b.y - c.y);
    const double detright = (a.y - c.y) * (b.x - c.x);
    const double det = detleft - detright;
    double detsum;
    if (detleft > 0.0) {
        if (detright <= 0.0) return det > 0 ? 1 : (det < 0 ? -1 : 0);
        detsum = detleft + detright;
    } else if (detleft < 0.0) {
        if (detright >= 0.0) return det > 0 ? 1 : (det < 0 ? -1 : 0);
        detsum = -detleft - detright;
    } else {
        return det > 0 ? 1 : (det < 0 ? -1 : 0);
    }
    constexpr double eps = std::numeric_limits<double>::epsilon() / 2;
    constexpr double errbound = (3.0 + 16.0 * eps) * eps;
    if (det >= errbound * detsum || -det >= errbound * detsum) return det > 0 ? 1 : -1;
    return orient_exact(a, b, c);
}

namespace {

bool on_segment_collinear(Point p, Point a, Point b) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

}  // namespace

bool segments_intersect(Point a, Point b, Point c, Point d) {
    if (std::max(a.x, b.x) < std::min(c.x, d.x) || std::max(c.x, d.x) < std::min(a.x, b.x) ||
        std::max(a.y, b.y) < std::min(c.y, d.y) || std::max(c.y, d.y) < std::min(a.y, b.y))
        return false;
    const int o1 = orient(a, b, c);
    const int o2 = orient(a, b, d);
    const int o3 = orient(c, d, a);
    const int o4 = orient(c, d, b);
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    if (o1 == 0 && on_segment_collinear(c, a, b)) return true;
    if (o2 == 0 && on_segment_collinear(d, a, b)) return true;
    if (o3 == 0 && on_segment_collinear(a, c, d)) return true;
    if (o4 == 0 && on_segment_collinear(b, c, d)) return true;
    return false;
}

std::vector<Point> segment_intersection_points(Point a, Point b, Point c, Point d) {
    std::vector<Point> out;
    if (!segments_intersect(a, b, c, d)) return out;
    const int o1 = orient(a, b, c);
    const int o2 = orient(a, b, d);
    if (o1 == 0 && o2 == 0) {
        // collinear overlap: ends are the extreme shared points
        const Point dir = b - a;
        auto par = [&](Point p) { return dot(p - a, dir); };
        double lo = std::max(std::min(par(a), par(b)), std::min(par(c), par(d)));
        double hi = std::min(std::max(par(a), par(b)), std::max(par(c), par(d)));
        Point cand[4] = {a, b, c, d};
        Point plo{}, phi{};
        bool have_lo = false, have_hi = false;
        for (const auto& p : cand) {
            double s = par(p);
            if (s == lo && !have_lo) { plo = p; have_lo = true; }
            if (s == hi && !have_hi) { phi = p; have_hi = true; }
        }
        out.push_back(plo);
        if (phi != plo) out.push_back(phi);
        return out;
    }
    // shared endpoints are returned verbatim
    for (Point p : {a, b}) {
        if (p == c || p == d) { out.push_back(p); return out; }
    }
    if (o1 == 0) { out.push_back(c); return out; }
    if (o2 == 0) { out.push_back(d); return out; }
    if (orient(c, d, a) == 0) { out.push_back(a); return out; }
    if (orient(c, d, b) == 0) { out.push_back(b); return out; }
    const Point r = b - a, s = d - c;
    const double den = cross(r, s);
    double t = cross(c - a, s) / den;
    t = std::clamp(t, 0.0, 1.0);
    out.push_back(a + t * r);
    return out;
}

Point closest_on_segment(Point p, Point a, Point b, double* t) {
    const Point ab = b - a;
    const double len2 = dot(ab, ab);
    double s = len2 > 0 ? dot(p - a, ab) / len2 : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    if (t) *t = s;
    if (s == 0.0) return a;
    if (s == 1.0) return b;
    return a + s * ab;
}

double point_segment_distance(Point p, Point a, Point b) { return dist(p, closest_on_segment(p, a, b)); }

double segment_distance(Point a, Point b, Point c, Point d) {
    if (segments_intersect(a, b, c, d)) return 0.0;
    return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                     point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

// ------------------------------------------------------------------ Polyline

Polyline::Polyline(std::vector<Point> vertices, bool closed) : v_(std::move(vertices)), closed_(closed) {
    if (v_.empty()) throw GeomError("polyline needs at least one vertex");
    for (std::size_t i = 0; i < v_.size(); ++i) {
        if (!is_finite(v_[i])) throw GeomError("polyline vertex is not finite");
        if (i + 1 < v_.size() && v_[i] == v_[i + 1]) throw GeomError("consecutive polyline vertices coincide");
    }
    if (v_.size() < 2) closed_ = false;
    if (closed_ && v_.front() == v_.back()) throw GeomError("closed polyline repeats its first vertex");
    const std::size_t n = segment_count();
    cum_.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) cum_[i + 1] = cum_[i] + dist(seg_a(i), seg_b(i));
}

std::size_t Polyline::segment_count() const {
    if (v_.size() < 2) return 0;
    return closed_ ? v_.size() : v_.size() - 1;
}

double Polyline::vertex_param(std::size_t i) const {
    if (length() == 0.0) return 0.0;
    if (i + 1 == cum_.size()) return 1.0;
    return cum_[i] / length();
}

std::pair<std::size_t, double> Polyline::locate(double t) const {
    const std::size_t n = segment_count();
    if (n == 0) return {0, 0.0};
    t = std::clamp(t, 0.0, 1.0);
    const double s = t * length();
    auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
    long k = static_cast<long>(it - cum_.begin()) - 1;
    k = std::clamp<long>(k, 0, static_cast<long>(n) - 1);
    const double seg = cum_[k + 1] - cum_[k];
    double frac = seg > 0 ? (s - cum_[k]) / seg : 0.0;
    frac = std::clamp(frac, 0.0, 1.0);
    const double snap = 1e-15 * length();
    if (s - cum_[k] <= snap) frac = 0.0;
    if (cum_[k + 1] - s <= snap) frac = 1.0;
    return {static_cast<std::size_t>(k), frac};
}

Point Polyline::point_at(double t) const {
    if (segment_count() == 0) return v_.front();
    if (t >= 1.0) return closed_ ? v_.front() : v_.back();
    if (t <= 0.0) return v_.front();
    auto [k, frac] = locate(t);
    if (frac == 0.0) return seg_a(k);
    if (frac == 1.0) return seg_b(k);
    return seg_a(k) + frac * (seg_b(k) - seg_a(k));
}

double Polyline::project(Point p, double* d) const {
    const std::size_t n = segment_count();
    if (n == 0) {
        if (d) *d = dist(p, v_.front());
        return 0.0;
    }
    double best = std::numeric_limits<double>::infinity();
    double best_t = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double f = 0.0;
        Point q = closest_on_segment(p, seg_a(i), seg_b(i), &f);
        double dd = dist(p, q);
        if (dd < best) {
            best = dd;
            best_t = (cum_[i] + f * (cum_[i + 1] - cum_[i])) / length();
        }
    }
    if (d) *d = best;
    return best_t;
}

double Polyline::distance(Point p) const {
    double d = 0.0;
    project(p, &d);
    return d;
}

Box Polyline::bounds() const { return bounds_of(v_); }

Polyline Polyline::reversed() const {
    std::vector<Point> r(v_.rbegin(), v_.rend());
    return Polyline(std::move(r), closed_);
}

Polyline Polyline::densified(double h) const {
    if (segment_count() == 0 || !(h > 0)) return *this;
    std::vector<Point> out;
    out.reserve(v_.size());
    for (std::size_t i = 0; i < segment_count(); ++i) {
        Point a = seg_a(i), b = seg_b(i);
        const double len = dist(a, b);
        const auto k = static_cast<std::size_t>(std::floor(len / h)) + 1;
        out.push_back(a);
        for (std::size_t j = 1; j < k; ++j) {
            Point q = a + (static_cast<double>(j) / static_cast<double>(k)) * (b - a);
            if (q != out.back() && q != b) out.push_back(q);
        }
    }
    if (!closed_) out.push_back(v_.back());
    return Polyline(std::move(out), closed_);
}

SimplicityResult is_simple(const Polyline& p) {
    SimplicityResult res;
    const std::size_t n = p.segment_count();
    if (n == 0) return res;
    if (p.closed() && p.size() < 3) return {false, 0, 1};
    auto idx = SegmentIndex::of(p);
    long bi = -1, bj = -1;
    auto adjacent = [&](std::size_t i, std::size_t j) {
        if (j == i + 1) return true;
        return p.closed() && i == 0 && j == n - 1;
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (bi >= 0 && static_cast<long>(i) > bi) break;
        Point a = p.seg_a(i), b = p.seg_b(i);
        idx.visit(Box::of(a, b), [&](std::size_t j) {
            if (j <= i) return;
            Point c = p.seg_a(j), d = p.seg_b(j);
            bool bad;
            if (adjacent(i, j)) {
                // adjacent segments may share only their common vertex
                Point shared = (j == i + 1) ? b : a;
                Point other_i = (j == i + 1) ? a : b;
                Point other_j = (j == i + 1) ? d : c;
                bad = orient(other_i, shared, other_j) == 0 && dot(other_i - shared, other_j - shared) > 0;
            } else {
                bad = segments_intersect(a, b, c, d);
            }
            if (bad && (bi < 0 || static_cast<long>(i) < bi || (static_cast<long>(i) == bi && static_cast<long>(j) < bj))) {
                bi = static_cast<long>(i);
                bj = static_cast<long>(j);
            }
        });
    }
    if (bi >= 0) return {false, bi, bj};
    return res;
}

Polyline subarc(const Polyline& host, double t1, double t2) {
    if (!(t1 >= 0.0 && t1 <= 1.0 && t2 >= 0.0 && t2 <= 1.0))
        throw GeomError("subarc parameter out of range");
    if (t1 > t2) std::swap(t1, t2);
    const Point p1 = host.point_at(t1);
    if (t1 == t2 || host.segment_count() == 0) return Polyline::single_point(p1);
    std::vector<Point> out{p1};
    const std::size_t nv = host.closed() ? host.size() + 1 : host.size();
    for (std::size_t i = 0; i < nv; ++i) {
        const double ti = host.vertex_param(i);
        if (ti > t1 && ti < t2) {
            Point q = host.vertices()[i % host.size()];
            if (q != out.back()) out.push_back(q);
        }
    }
    const Point p2 = host.point_at(t2);
    if (p2 != out.back()) out.push_back(p2);
    if (out.size() == 1) return Polyline::single_point(p1);
    return Polyline(std::move(out), false);
}

Polyline map_vertices(const Polyline& p, const std::function<Point(Point)>& f) {
    std::vector<Point> out;
    out.reserve(p.size());
    for (const auto& v : p.vertices()) {
        Point q = f(v);
        if (out.empty() || q != out.back()) out.push_back(q);
    }
    if (p.closed() && out.size() > 1 && out.front() == out.back()) out.pop_back();
    const bool closed = p.closed() && out.size() > 2;
    return Polyline(std::move(out), closed);
}

// -------------------------------------------------------------- SegmentIndex

SegmentIndex::SegmentIndex(std::vector<TaggedSegment> segs) : segs_(std::move(segs)) {
    if (segs_.empty()) return;
    for (const auto& s : segs_) {
        bounds_.expand(s.a);
        bounds_.expand(s.b);
    }
    const double extent = std::max({bounds_.width(), bounds_.height(), 1e-300});
    const double per_side = std::ceil(std::sqrt(static_cast<double>(segs_.size())));
    cell_ = extent / std::max(1.0, per_side);
    if (!(cell_ > 0)) cell_ = 1.0;
    nx_ = std::clamp<long>(static_cast<long>(std::floor(bounds_.width() / cell_)) + 1, 1, 4096);
    ny_ = std::clamp<long>(static_cast<long>(std::floor(bounds_.height() / cell_)) + 1, 1, 4096);
    cells_.assign(static_cast<std::size_t>(nx_ * ny_), {});
    for (std::size_t k = 0; k < segs_.size(); ++k) {
        long i0, j0, i1, j1;
        cell_range(Box::of(segs_[k].a, segs_[k].b), i0, j0, i1, j1);
        for (long j = j0; j <= j1; ++j)
            for (long i = i0; i <= i1; ++i) cells_[static_cast<std::size_t>(j * nx_ + i)].push_back(k);
    }
}

SegmentIndex SegmentIndex::of(const Polyline& p, int curve) {
    std::vector<TaggedSegment> s;
    s.reserve(p.segment_count());
    for (std::size_t i = 0; i < p.segment_count(); ++i)
        s.push_back({p.seg_a(i), p.seg_b(i), curve, p.vertex_param(i), p.vertex_param(i + 1)});
    return SegmentIndex(std::move(s));
}

SegmentIndex SegmentIndex::of(const std::vector<Polyline>& curves) {
    std::vector<TaggedSegment> s;
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const auto& p = curves[c];
        for (std::size_t i = 0; i < p.segment_count(); ++i)
            s.push_back({p.seg_a(i), p.seg_b(i), static_cast<int>(c), p.vertex_param(i), p.vertex_param(i + 1)});
    }
    return SegmentIndex(std::move(s));
}

void SegmentIndex::cell_range(const Box& q, long& i0, long& j0, long& i1, long& j1) const {
    auto clampx = [&](double v) {
        double c = std::floor((v - bounds_.x0) / cell_);
        if (c < 0) return 0L;
        if (c >= static_cast<double>(nx_)) return nx_ - 1;
        return static_cast<long>(c);
    };
    auto clampy = [&](double v) {
        double c = std::floor((v - bounds_.y0) / cell_);
        if (c < 0) return 0L;
        if (c >= static_cast<double>(ny_)) return ny_ - 1;
        return static_cast<long>(c);
    };
    i0 = clampx(q.x0);
    i1 = clampx(q.x1);
    j0 = clampy(q.y0);
    j1 = clampy(q.y1);
}

void SegmentIndex::visit(const Box& q, const std::function<void(std::size_t)>& fn) const {
    if (segs_.empty() || !q.intersects(bounds_)) return;
    long i0, j0, i1, j1;
    cell_range(q, i0, j0, i1, j1);
    std::vector<std::size_t> ids;
    for (long j = j0; j <= j1; ++j)
        for (long i = i0; i <= i1; ++i) {
            const auto& c = cells_[static_cast<std::size_t>(j * nx_ + i)];
            ids.insert(ids.end(), c.begin(), c.end());
        }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (auto k : ids) fn(k);
}

SegmentIndex::Hit SegmentIndex::nearest(Point p, double r, const Filter& keep) const {
    return nearest(p, p, r, keep);
}

SegmentIndex::Hit SegmentIndex::nearest(Point a, Point b, double r, const Filter& keep) const {
    Hit best;
    if (segs_.empty()) return best;
    const Box sb = Box::of(a, b);
    auto scan = [&](double rad) {
        visit(sb.inflated(rad), [&](std::size_t k) {
            const auto& s = segs_[k];
            if (keep && !keep(s)) return;
            double d;
            Point cp;
            if (a == b) {
                cp = closest_on_segment(a, s.a, s.b);
                d = dist(a, cp);
            } else {
                d = segment_distance(a, b, s.a, s.b);
                if (d == 0.0) {
                    auto pts = segment_intersection_points(a, b, s.a, s.b);
                    cp = pts.empty() ? s.a : pts.front();
                } else {
                    // closest pair among endpoint projections
                    Point c1 = closest_on_segment(a, s.a, s.b), c2 = closest_on_segment(b, s.a, s.b);
                    Point c3 = closest_on_segment(s.a, a, b), c4 = closest_on_segment(s.b, a, b);
                    double d1 = dist(a, c1), d2 = dist(b, c2), d3 = dist(s.a, c3), d4 = dist(s.b, c4);
                    cp = c1;
                    double m = d1;
                    if (d2 < m) { m = d2; cp = c2; }
                    if (d3 < m) { m = d3; cp = s.a; }
                    if (d4 < m) { m = d4; cp = s.b; }
                }
            }
            if (d < best.distance || (d == best.distance && k < best.segment)) {
                best.distance = d;
                best.segment = k;
                best.closest = cp;
            }
        });
    };
    if (std::isfinite(r)) {
        scan(r);
        if (best.distance > r) best = Hit{};
        return best;
    }
    const double full = bounds_.diam() + dist(sb.center(), bounds_.center()) + sb.diam();
    double rad = cell_;
    while (true) {
        scan(rad);
        if (best.distance <= rad || rad >= full) return best;
        rad *= 2.0;
    }
}

std::optional<std::size_t> SegmentIndex::first_crossing(Point a, Point b, const Filter& keep) const {
    std::optional<std::size_t> out;
    visit(Box::of(a, b), [&](std::size_t k) {
        if (out && *out < k) return;
        const auto& s = segs_[k];
        if (keep && !keep(s)) return;
        if (segments_intersect(a, b, s.a, s.b)) out = k;
    });
    return out;
}

CurveGap curve_gap(const Polyline& a, const SegmentIndex& b) {
    CurveGap g;
    if (b.empty()) return g;
    auto consider = [&](Point p, Point q, std::size_t ia) {
        auto h = b.nearest(p, q, std::isfinite(g.distance) ? g.distance : std::numeric_limits<double>::infinity());
        if (h.distance < g.distance) {
            g.distance = h.distance;
            g.seg_a = ia;
            g.seg_b = h.segment;
            g.on_b = h.closest;
            g.on_a = h.distance == 0.0 ? h.closest : closest_on_segment(h.closest, p, q);
        }
    };
    if (a.segment_count() == 0) {
        consider(a.front(), a.front(), 0);
        return g;
    }
    for (std::size_t i = 0; i < a.segment_count(); ++i) {
        consider(a.seg_a(i), a.seg_b(i), i);
        if (g.distance == 0.0) break;
    }
    return g;
}

// -------------------------------------------------------------------- Region

bool polygon_contains(const Polyline& c, Point p) {
    const std::size_t n = c.segment_count();
    bool inside = false;
    for (std::size_t i = 0; i < n; ++i) {
        Point a = c.seg_a(i), b = c.seg_b(i);
        if (orient(a, b, p) == 0 && on_segment_collinear(p, a, b)) return true;
        if ((a.y > p.y) != (b.y > p.y)) {
            // crossing of the rightward ray, decided by orientation
            int o = orient(a, b, p);
            if ((b.y > a.y && o > 0) || (b.y < a.y && o < 0)) inside = !inside;
        }
    }
    return inside;
}

Region Region::box(const Box& b) {
    Region r;
    r.kind_ = Kind::BOX;
    r.box_ = b;
    r.boundary_ = Polyline({{b.x0, b.y0}, {b.x1, b.y0}, {b.x1, b.y1}, {b.x0, b.y1}}, true);
    return r;
}

Region Region::circle(Point c, double radius) {
    Region r;
    r.kind_ = Kind::CIRCLE;
    r.center_ = c;
    r.radius_ = radius;
    std::vector<Point> v;
    const int n = 720;
    for (int i = 0; i < n; ++i) {
        double th = 2.0 * M_PI * i / n;
        v.push_back({c.x + radius * std::cos(th), c.y + radius * std::sin(th)});
    }
    r.boundary_ = Polyline(std::move(v), true);
    r.box_ = {c.x - radius, c.y - radius, c.x + radius, c.y + radius};
    return r;
}

Region Region::polygon(const Polyline& boundary) {
    if (!boundary.closed()) throw GeomError("region boundary must be closed");
    Region r;
    r.kind_ = Kind::POLYGON;
    r.boundary_ = boundary;
    r.box_ = boundary.bounds();
    r.index_ = std::make_shared<const SegmentIndex>(SegmentIndex::of(boundary));
    return r;
}

double Region::depth(Point p) const {
    switch (kind_) {
        case Kind::BOX: {
            if (box_.contains(p)) return std::min({p.x - box_.x0, box_.x1 - p.x, p.y - box_.y0, box_.y1 - p.y});
            double dx = std::max({box_.x0 - p.x, 0.0, p.x - box_.x1});
            double dy = std::max({box_.y0 - p.y, 0.0, p.y - box_.y1});
            return -std::hypot(dx, dy);
        }
        case Kind::CIRCLE:
            return radius_ - dist(p, center_);
        case Kind::POLYGON: {
            const double d = index_->nearest(p).distance;
            if (d == 0.0) return 0.0;
            const bool inside = ray_parity(p);
            return inside ? d : -d;
        }
    }
    return 0.0;
}

bool Region::ray_parity(Point p) const {
    // crossings of the rightward ray, found through the index
    bool inside = false;
    const auto& segs = index_->segments();
    index_->visit(Box{p.x, p.y, std::max(p.x, box_.x1), p.y}, [&](std::size_t i) {
        const Point a = segs[i].a, b = segs[i].b;
        if ((a.y > p.y) != (b.y > p.y)) {
            const int o = orient(a, b, p);
            if ((b.y > a.y && o > 0) || (b.y < a.y && o < 0)) inside = !inside;
        }
    });
    return inside;
}

bool Region::contains(Point p) const {
    if (kind_ != Kind::POLYGON) return depth(p) >= 0.0;
    if (index_->nearest(p, 0.0).distance == 0.0) return true;
    return ray_parity(p);
}

Box Region::bounds() const { return box_; }

}  // namespace planefix
