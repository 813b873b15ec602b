#pragma once

#include <functional>
#include <vector>

#include "planefix/angles.hpp"
#include "planefix/maps.hpp"
#include "planefix/tolerances.hpp"
#include "planefix/tristate.hpp"

namespace planefix {

/// f(V) and V disjoint.
TriState is_moving(const MapExpr& f, const Polyline& V, const Tolerances& tol);
/// f(V) and W disjoint.
TriState dodges(const MapExpr& f, const Polyline& V, const Polyline& W, const Tolerances& tol);
/// f(E - V) and f(V) disjoint; E - V is sampled on a grid of the given pitch (h_sample when 0)
/// with the tube of radius tol.tube() around V left out.
TriState exclusive_in(const MapExpr& f, const Polyline& V, const Region& E, const Tolerances& tol, double pitch = 0.0);

struct InjectivityMargin {
    double value = 0.0;
    Point p{}, q{};  ///< the witnessing pair
};
/// Minimum image distance over sample pairs at least eps apart.
InjectivityMargin injectivity_margin(const MapExpr& f, const std::vector<Point>& samples, double eps);

std::vector<Point> grid_samples(const Box& b, double pitch);
std::vector<Point> disc_samples(Point center, double radius, double pitch);

struct LocalOrientation {
    Orientation orientation = Orientation::UNDECIDED;
    double injectivity = 0.0;
    double radius = 0.0;
    std::string note;
};
LocalOrientation local_orientation(const MapExpr& f, Point center, double radius);

/// Golden-section minimisation of phi on [a,b], seeded by a coarse scan.
double golden_min(const std::function<double(double)>& phi, double a, double b, double* fmin, int iters = 80);
/// Compass search minimising phi over the plane near p.
Point pattern_min(const std::function<double(Point)>& phi, Point p, double step, double* fmin);

/// The part of src whose image stays at least `tube` away from the images of both endpoints;
/// an empty polyline when nothing is left.
Polyline trim_end_tubes(const MapExpr& f, const Polyline& src, double tube);

}  // namespace planefix
