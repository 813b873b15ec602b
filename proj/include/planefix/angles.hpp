#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "planefix/geom.hpp"

namespace planefix {

class DegenerateAngle : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class UndefinedAngle : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Signed turn in (-pi, pi) carrying ray vx onto ray vy.
double directed_angle(Point v, Point x, Point y);

using PathFn = std::function<Point(double)>;

/// Accumulated directed angle of rho over the sample parameters `ts` (sorted), seen from v.
/// Intervals are bisected until every chord is shorter than a third of the distance to v.
/// `min_dist` may supply a known lower bound for that distance.
double rotational_angle(const PathFn& rho, std::vector<double> ts, Point v, double eps, double min_dist = -1.0,
                        std::size_t* samples_used = nullptr);

/// Rotational angle along a polyline (closed polylines are traversed once around).
double rotational_angle(const Polyline& path, Point v, double eps);

struct DirectedCircle {
    Polyline curve;  ///< closed
    std::size_t start_vertex = 0;
    int sense = +1;

    /// Closed polyline listing the vertices in traversal order.
    Polyline traversal() const;
    DirectedCircle reversed() const { return {curve, start_vertex, -sense}; }
};

struct DirectedArc {
    Polyline curve;  ///< open
    bool start_is_first_vertex = true;

    Polyline traversal() const { return start_is_first_vertex ? curve : curve.reversed(); }
};

int winding_number(const DirectedCircle& c, Point v, double eps = 1e-12);

enum class Orientation { PRESERVING, REVERSING, UNDECIDED };
const char* to_string(Orientation o);

Orientation orientation_of_embedding(const DirectedCircle& c, const DirectedCircle& image, Point v, Point w,
                                     double eps = 1e-12);

/// +1 when the traversal is overall anticlockwise, -1 when clockwise (winding definition).
int overall_orientation(const DirectedCircle& c);
/// Sign of the shoelace area of the traversal.
int shoelace_sign(const DirectedCircle& c);
/// A point strictly inside the circle.
Point interior_point(const DirectedCircle& c);

enum class Side { LEFT, RIGHT, NOT_APPLICABLE };
const char* to_string(Side s);

Side side_of_directed_circle(const DirectedCircle& c, Point p, double eps = 1e-12);

/// Side of the disc bounded by d relative to the directed arc, defined only when the disc meets
/// the arc exactly in a nondegenerate subarc of its interior.
Side side_of_directed_arc(const DirectedArc& a, const DirectedCircle& d, double contact_tol, double sample_pitch);

}  // namespace planefix
