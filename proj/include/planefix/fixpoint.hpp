#pragma once

#include <optional>
#include <string>
#include <vector>

#include "planefix/maps.hpp"

namespace planefix {

struct DegreeResult {
    bool boundary_zero = false;  ///< displacement too small on the boundary to certify
    int degree = 0;
    double min_displacement = 0.0;
    std::size_t samples = 0;
    std::string note;
};

/// Winding number of f(p) - p along the anticlockwise boundary of box.
DegreeResult degree_on_box(const MapExpr& f, const Box& box, double zero_tol);

struct FixedPointCertificate {
    Box box{};
    int boundary_degree = 0;
    Point approx{};
    double residual = 0.0;
};

struct LocateOptions {
    double tol_fix = 1e-10;
    double eps_sep = 0.01;
    unsigned seed_jitter = 0;
    long max_boxes = 200000;
};

struct LocateResult {
    std::vector<FixedPointCertificate> certificates;  ///< sorted by lower-left corner
    std::vector<Box> undecided;
    long boxes_processed = 0;
};

/// `b` itself when its corners lie in f's domain, else the tiles of an n x n split whose corners do.
/// Exact for convex domains.
std::vector<Box> cover_in_domain(const MapExpr& f, const Box& b, int n = 16);

/// Subdivision on nonzero-degree boxes down to diameter tol_fix.
LocateResult locate(const MapExpr& f, const std::vector<Box>& region, const LocateOptions& opt);

struct OracleResult {
    double min = 0.0;
    Point argmin{};
    long points = 0;
};
/// Exhaustive scan of |f(p) - p| on the grid of the given pitch anchored at the lower-left corner.
OracleResult grid_oracle(const MapExpr& f, const Box& box, double pitch);

/// Bisection for a fixed point of r -> f(r, 0).x on [x, y]; empty when the sign condition fails.
std::optional<double> ivt_1d(const MapExpr& f, double x, double y, double tol_fix, double axis_tol);

struct PeriodicHit {
    Point p{};
    int period = 0;
};
/// Grid points whose orbit returns within `thresh` after 2..max_period steps without being fixed.
std::vector<PeriodicHit> periodic_orbit_scan(const MapExpr& f, const Box& box, long n, int max_period, double thresh);

}  // namespace planefix
