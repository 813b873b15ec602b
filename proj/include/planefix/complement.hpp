#pragma once

#include <vector>

#include "planefix/geom.hpp"

namespace planefix {

struct Face {
    Point representative{};
    bool bounded = false;
    double clearance = 0.0;  ///< distance from the representative to the curves
    bool low_confidence = false;
    long cells = 0;
    Box extent = Box::empty();  ///< union of the face's free grid cells
};

class ResolutionTooCoarse : public GeomError {
public:
    using GeomError::GeomError;
};

struct ComplementDecomposition {
    std::vector<Polyline> curves;
    std::vector<Face> faces;
    double resolution = 0.0;
    Box box{};
    int unbounded = -1;
    int exact_faces = 0;          ///< face count of the whole plane from Euler's formula
    int missing_small_faces = 0;  ///< faces thinner than the grid can see

    // flood-fill grid
    double pitch = 0.0;
    Point origin{};
    long nx = 0, ny = 0;
    std::vector<int> label;  ///< face index per cell, or one of the negative markers
    SegmentIndex index;

    std::vector<int> bounded_faces() const;
};

constexpr int kOnCurve = -1;
constexpr int kUnresolved = -2;

/// Number of connected components of the plane minus the union of the curves.
int exact_face_count(const std::vector<Polyline>& curves);

ComplementDecomposition decompose_complement(const std::vector<Polyline>& curves, const Box& box, double resolution);

/// Face index containing p, kOnCurve within `on_curve_tol` of a curve, or kUnresolved.
int point_in_face(const ComplementDecomposition& d, Point p, double on_curve_tol);

}  // namespace planefix
