#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace planefix {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
inline Point operator/(Point a, double s) { return {a.x / s, a.y / s}; }
inline bool operator==(Point a, Point b) { return a.x == b.x && a.y == b.y; }
inline bool operator!=(Point a, Point b) { return !(a == b); }

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double dist(Point a, Point b) { return norm(a - b); }
inline bool is_finite(Point a) { return std::isfinite(a.x) && std::isfinite(a.y); }

struct Box {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double diam() const { return std::hypot(width(), height()); }
    Point center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
    Point lower_left() const { return {x0, y0}; }
    bool contains(Point p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
    bool contains(const Box& b) const { return b.x0 >= x0 && b.x1 <= x1 && b.y0 >= y0 && b.y1 <= y1; }
    bool intersects(const Box& b) const { return b.x0 <= x1 && b.x1 >= x0 && b.y0 <= y1 && b.y1 >= y0; }
    Box inflated(double m) const { return {x0 - m, y0 - m, x1 + m, y1 + m}; }
    void expand(Point p);
    static Box of(Point a, Point b);
    static Box empty();
    bool is_empty() const { return x0 > x1; }
};

Box bounds_of(const std::vector<Point>& pts);

/// Sign of the determinant |b-a, c-a|: +1 anticlockwise, -1 clockwise, 0 collinear. Exact.
int orient(Point a, Point b, Point c);

/// Closed-segment intersection test with exact predicates (collinear overlaps count).
bool segments_intersect(Point a, Point b, Point c, Point d);

/// Intersection points of two closed segments: none, one, or the two ends of a collinear overlap.
std::vector<Point> segment_intersection_points(Point a, Point b, Point c, Point d);

double point_segment_distance(Point p, Point a, Point b);
/// Closest point on [a,b] to p; `t` receives the segment fraction.
Point closest_on_segment(Point p, Point a, Point b, double* t = nullptr);
double segment_distance(Point a, Point b, Point c, Point d);

class Polyline {
public:
    Polyline() = default;
    /// Requires at least one vertex, finite coordinates and distinct consecutive vertices.
    /// A single vertex is the degenerate arc of an empty parameter interval.
    explicit Polyline(std::vector<Point> vertices, bool closed = false);

    static Polyline single_point(Point p) { return Polyline({p}, false); }

    const std::vector<Point>& vertices() const { return v_; }
    std::size_t size() const { return v_.size(); }
    bool closed() const { return closed_; }
    bool degenerate() const { return v_.size() < 2; }
    bool empty() const { return v_.empty(); }
    std::size_t segment_count() const;
    Point seg_a(std::size_t i) const { return v_[i]; }
    Point seg_b(std::size_t i) const { return v_[(i + 1) % v_.size()]; }
    Point front() const { return v_.front(); }
    Point back() const { return v_.back(); }

    double length() const { return cum_.empty() ? 0.0 : cum_.back(); }
    /// Normalized arclength parameter of vertex i (i == size() means the closing vertex).
    double vertex_param(std::size_t i) const;
    /// Arclength from the start to vertex i.
    double vertex_arclength(std::size_t i) const { return cum_[i]; }
    Point point_at(double t) const;
    /// Parameter of the closest point; `d` receives the distance.
    double project(Point p, double* d = nullptr) const;
    double distance(Point p) const;
    Box bounds() const;
    Polyline reversed() const;
    /// Subdivide so that every segment is at most `h` long.
    Polyline densified(double h) const;
    /// Locate segment index and fraction for parameter t.
    std::pair<std::size_t, double> locate(double t) const;

private:
    std::vector<Point> v_;
    std::vector<double> cum_;
    bool closed_ = false;
};

struct SimplicityResult {
    bool simple = true;
    long seg_i = -1;
    long seg_j = -1;
    explicit operator bool() const { return simple; }
};

SimplicityResult is_simple(const Polyline& p);

/// Subcurve between min(t1,t2) and max(t1,t2); a single-point polyline when they coincide.
Polyline subarc(const Polyline& host, double t1, double t2);

/// Apply a point map to every vertex; consecutive duplicates are merged.
Polyline map_vertices(const Polyline& p, const std::function<Point(Point)>& f);

struct TaggedSegment {
    Point a, b;
    int curve = 0;
    double t0 = 0.0, t1 = 0.0;  // parameters of a and b on their curve
};

/// Uniform-grid hash over segments.
class SegmentIndex {
public:
    SegmentIndex() = default;
    explicit SegmentIndex(std::vector<TaggedSegment> segs);
    static SegmentIndex of(const Polyline& p, int curve = 0);
    static SegmentIndex of(const std::vector<Polyline>& curves);

    const std::vector<TaggedSegment>& segments() const { return segs_; }
    bool empty() const { return segs_.empty(); }
    const Box& bounds() const { return bounds_; }

    /// Visit every segment whose cells meet `q`; a segment may be visited once only.
    void visit(const Box& q, const std::function<void(std::size_t)>& fn) const;

    struct Hit {
        double distance = std::numeric_limits<double>::infinity();
        std::size_t segment = 0;
        Point closest{};
    };
    using Filter = std::function<bool(const TaggedSegment&)>;

    /// Nearest segment to p within r (infinite r searches everything).
    Hit nearest(Point p, double r = std::numeric_limits<double>::infinity(), const Filter& keep = {}) const;
    /// Nearest segment to the segment [a,b] within r.
    Hit nearest(Point a, Point b, double r = std::numeric_limits<double>::infinity(),
                const Filter& keep = {}) const;
    /// First segment (in index order) intersecting [a,b] exactly.
    std::optional<std::size_t> first_crossing(Point a, Point b, const Filter& keep = {}) const;

private:
    std::vector<TaggedSegment> segs_;
    Box bounds_ = Box::empty();
    double cell_ = 1.0;
    long nx_ = 0, ny_ = 0;
    std::vector<std::vector<std::size_t>> cells_;
    void cell_range(const Box& q, long& i0, long& j0, long& i1, long& j1) const;
};

/// Minimum distance between two curves, with the witnessing pair.
struct CurveGap {
    double distance = std::numeric_limits<double>::infinity();
    Point on_a{}, on_b{};
    std::size_t seg_a = 0, seg_b = 0;
};
CurveGap curve_gap(const Polyline& a, const SegmentIndex& b);

/// A closed planar region: axis box, round disc, or polygon interior.
class Region {
public:
    enum class Kind { BOX, CIRCLE, POLYGON };
    static Region box(const Box& b);
    static Region circle(Point c, double r);
    static Region polygon(const Polyline& boundary);

    Kind kind() const { return kind_; }
    const Box& box_value() const { return box_; }
    Point center() const { return center_; }
    double radius() const { return radius_; }
    const Polyline& boundary() const { return boundary_; }

    bool contains(Point p) const;
    /// Signed distance to the boundary, positive inside.
    double depth(Point p) const;
    Box bounds() const;

private:
    bool ray_parity(Point p) const;

    Kind kind_ = Kind::BOX;
    Box box_{};
    Point center_{};
    double radius_ = 0.0;
    Polyline boundary_;
    std::shared_ptr<const SegmentIndex> index_;
};

/// Even-odd containment of p in the polygon bounded by a closed polyline (boundary counts as inside).
bool polygon_contains(const Polyline& closed_curve, Point p);

class GeomError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace planefix
