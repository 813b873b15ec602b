#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "planefix/geom.hpp"

namespace planefix {

struct Mat2 {
    double a = 1, b = 0, c = 0, d = 1;  // [[a, b], [c, d]]

    Point apply(Point p) const { return {a * p.x + b * p.y, c * p.x + d * p.y}; }
    double det() const { return a * d - b * c; }
    Mat2 inverse() const;
    double spectral_norm() const;
    double min_singular() const;
    double cond() const { return spectral_norm() / min_singular(); }
    static Mat2 rotation(double theta);
    static Mat2 diag(double sx, double sy) { return {sx, 0, 0, sy}; }
};
Mat2 operator*(const Mat2& m, const Mat2& n);

/// Displacement samples on a regular node grid, interpolated bilinearly.
struct GridPL {
    Box box{};
    long nx = 2, ny = 2;     ///< node counts
    std::vector<Point> disp; ///< row-major, index j * nx + i

    double hx() const { return box.width() / static_cast<double>(nx - 1); }
    double hy() const { return box.height() / static_cast<double>(ny - 1); }
    Point node(long i, long j) const { return {box.x0 + i * hx(), box.y0 + j * hy()}; }
    Point displacement(Point p) const;
    /// Sample a point map at the nodes.
    static GridPL sample(const Box& box, long nx, long ny, const std::function<Point(Point)>& f);
};

class OutOfDomain : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Immutable plane-map expression tree.
class MapExpr {
public:
    enum class Kind { AFFINE, COMPLEX_SCALE_ROT, TRANSLATE, COMPOSE, GRID_PL, PERIOD_N, SPIRAL };

    struct Node {
        Kind kind = Kind::AFFINE;
        Mat2 m{};
        Point offset{};
        double scale = 1.0, angle = 0.0;
        std::vector<MapExpr> factors;
        GridPL grid;
        int n = 0;
        double beta = 0.0;
        std::optional<Box> domain;
        // cached coefficients for the rotation-type nodes
        double cr = 1.0, sr = 0.0;
    };

    MapExpr();  // identity
    static MapExpr identity() { return MapExpr(); }
    static MapExpr affine(const Mat2& m, Point offset = {});
    static MapExpr complex_scale_rot(double scale, double angle);
    static MapExpr translate(Point t);
    /// factors.front() is applied first.
    static MapExpr compose(std::vector<MapExpr> factors);
    static MapExpr grid_pl(GridPL g);
    static MapExpr period_n(int n);
    static MapExpr spiral(int n, double beta);

    MapExpr with_domain(const Box& b) const;

    Kind kind() const { return node_->kind; }
    const Node& node() const { return *node_; }
    std::optional<Box> domain() const;

    Point operator()(Point p) const;
    Point evaluate(Point p) const { return (*this)(p); }

    /// Upper bound on the Lipschitz constant over b; empty when no bound is known there.
    std::optional<double> lipschitz(const Box& b) const;
    /// Box containing the image of b.
    Box image_bounds(const Box& b) const;
    /// Parameters in (0,1) along [a,b] where the map changes piece.
    std::vector<double> breakpoints(Point a, Point b) const;
    /// Matrix and offset when the map is affine.
    std::optional<std::pair<Mat2, Point>> as_affine() const;

    /// The scale lambda = 2^(1/(n+1)) used by the rotation-spiral builtin.
    static double spiral_scale(int n) { return std::pow(2.0, 1.0 / (n + 1)); }
    /// The piecewise-linear g of the period-n builtin.
    static double period_n_g(int n, double r);

private:
    explicit MapExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct ImagePolyline {
    Polyline curve;
    std::vector<double> src_params;  ///< source parameter of every image vertex
    bool certified = true;           ///< false when a fixed-depth fallback was used
};

/// Image of a polyline whose chords are all shorter than chord_tol (when certified).
ImagePolyline image_polyline(const MapExpr& f, const Polyline& c, double chord_tol);

struct Orbit {
    std::vector<Point> points;
    bool truncated = false;
};
Orbit orbit(const MapExpr& f, Point x, int m);

/// h o f o h^-1 for an invertible affine h.
MapExpr conjugate(const MapExpr& f, const MapExpr& h);

/// GRID_PL realising (r, s) -> (g(r), 0) for the period-n builtin's g.
MapExpr period_n_axis_map(int n, const Box& box);

}  // namespace planefix
