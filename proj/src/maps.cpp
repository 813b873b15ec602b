#include "planefix/maps.hpp"

#include <algorithm>
#include <cmath>

namespace planefix {

// ---------------------------------------------------------------------- Mat2

Mat2 Mat2::inverse() const {
    const double dt = det();
    if (dt == 0.0 || !std::isfinite(dt)) throw std::invalid_argument("singular matrix");
    return {d / dt, -b / dt, -c / dt, a / dt};
}

namespace {

double sigma2(const Mat2& m, bool largest) {
    const double s = m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d;
    const double dt = m.det();
    const double disc = std::sqrt(std::max(0.0, s * s - 4.0 * dt * dt));
    if (largest) return 0.5 * (s + disc);
    // smaller root via the product to avoid cancellation
    const double big = 0.5 * (s + disc);
    return big > 0 ? dt * dt / big : 0.0;
}

}  // namespace

double Mat2::spectral_norm() const { return std::sqrt(sigma2(*this, true)); }
double Mat2::min_singular() const { return std::sqrt(sigma2(*this, false)); }

Mat2 Mat2::rotation(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {c, -s, s, c};
}

Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
}

// -------------------------------------------------------------------- GridPL

namespace {

struct CellPos {
    long i, j;
    double u, w;
};

CellPos cell_of(const GridPL& g, Point p) {
    const double fx = (p.x - g.box.x0) / g.hx();
    const double fy = (p.y - g.box.y0) / g.hy();
    long i = std::clamp<long>(static_cast<long>(std::floor(fx)), 0, g.nx - 2);
    long j = std::clamp<long>(static_cast<long>(std::floor(fy)), 0, g.ny - 2);
    return {i, j, fx - static_cast<double>(i), fy - static_cast<double>(j)};
}

}  // namespace

Point GridPL::displacement(Point p) const {
    const CellPos c = cell_of(*this, p);
    const Point d00 = disp[c.j * nx + c.i], d10 = disp[c.j * nx + c.i + 1];
    const Point d01 = disp[(c.j + 1) * nx + c.i], d11 = disp[(c.j + 1) * nx + c.i + 1];
    const double u = c.u, w = c.w;
    return (1 - u) * (1 - w) * d00 + u * (1 - w) * d10 + (1 - u) * w * d01 + u * w * d11;
}

GridPL GridPL::sample(const Box& box, long nx, long ny, const std::function<Point(Point)>& f) {
    GridPL g;
    g.box = box;
    g.nx = nx;
    g.ny = ny;
    g.disp.resize(static_cast<std::size_t>(nx * ny));
    for (long j = 0; j < ny; ++j)
        for (long i = 0; i < nx; ++i) {
            Point p = g.node(i, j);
            g.disp[j * nx + i] = f(p) - p;
        }
    return g;
}

// ------------------------------------------------------------------- MapExpr

MapExpr::MapExpr() : node_(std::make_shared<Node>()) {}

MapExpr MapExpr::affine(const Mat2& m, Point offset) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::AFFINE;
    n->m = m;
    n->offset = offset;
    return MapExpr(n);
}

MapExpr MapExpr::complex_scale_rot(double scale, double angle) {
    if (!(scale > 0)) throw std::invalid_argument("scale must be positive");
    auto n = std::make_shared<Node>();
    n->kind = Kind::COMPLEX_SCALE_ROT;
    n->scale = scale;
    n->angle = angle;
    n->cr = scale * std::cos(angle);
    n->sr = scale * std::sin(angle);
    return MapExpr(n);
}

MapExpr MapExpr::translate(Point t) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::TRANSLATE;
    n->offset = t;
    return MapExpr(n);
}

MapExpr MapExpr::compose(std::vector<MapExpr> factors) {
    if (factors.empty()) return MapExpr();
    auto n = std::make_shared<Node>();
    n->kind = Kind::COMPOSE;
    n->factors = std::move(factors);
    if (auto d = n->factors.front().domain()) n->domain = d;
    return MapExpr(n);
}

MapExpr MapExpr::grid_pl(GridPL g) {
    if (g.nx < 2 || g.ny < 2 || static_cast<long>(g.disp.size()) != g.nx * g.ny)
        throw std::invalid_argument("grid needs at least 2x2 nodes and one displacement per node");
    if (!(g.box.width() > 0 && g.box.height() > 0)) throw std::invalid_argument("grid box is empty");
    auto n = std::make_shared<Node>();
    n->kind = Kind::GRID_PL;
    n->domain = g.box;
    n->grid = std::move(g);
    return MapExpr(n);
}

MapExpr MapExpr::period_n(int nn) {
    if (nn < 2) throw std::invalid_argument("period-n builtin needs n >= 2");
    auto n = std::make_shared<Node>();
    n->kind = Kind::PERIOD_N;
    n->n = nn;
    return MapExpr(n);
}

MapExpr MapExpr::spiral(int nn, double beta) {
    if (nn < 1) throw std::invalid_argument("spiral builtin needs n >= 1");
    auto n = std::make_shared<Node>();
    n->kind = Kind::SPIRAL;
    n->n = nn;
    n->beta = beta;
    n->scale = spiral_scale(nn);
    n->angle = beta;
    n->cr = n->scale * std::cos(beta);
    n->sr = n->scale * std::sin(beta);
    return MapExpr(n);
}

MapExpr MapExpr::with_domain(const Box& b) const {
    auto n = std::make_shared<Node>(*node_);
    n->domain = b;
    return MapExpr(n);
}

std::optional<Box> MapExpr::domain() const { return node_->domain; }

double MapExpr::period_n_g(int n, double r) {
    if (r <= n - 1) return r + 1.0;
    return n + (1.0 - n) * (r - (n - 1));
}

Point MapExpr::operator()(Point p) const {
    const Node& n = *node_;
    if (n.domain) {
        const Box& b = *n.domain;
        const double slack = 1e-12 * (1.0 + b.diam());
        if (!b.inflated(slack).contains(p)) throw OutOfDomain("point outside the map's domain");
    }
    switch (n.kind) {
        case Kind::AFFINE:
            return n.m.apply(p) + n.offset;
        case Kind::COMPLEX_SCALE_ROT:
        case Kind::SPIRAL:
            return {n.cr * p.x - n.sr * p.y, n.sr * p.x + n.cr * p.y};
        case Kind::TRANSLATE:
            return p + n.offset;
        case Kind::COMPOSE: {
            Point q = p;
            for (const auto& f : n.factors) q = f(q);
            return q;
        }
        case Kind::GRID_PL:
            return p + n.grid.displacement(p);
        case Kind::PERIOD_N: {
            const double g = period_n_g(n.n, p.x);
            const double dz = std::abs(p.x - std::round(p.x));
            return {g, p.y + dz};
        }
    }
    return p;
}

std::optional<std::pair<Mat2, Point>> MapExpr::as_affine() const {
    const Node& n = *node_;
    switch (n.kind) {
        case Kind::AFFINE:
            return std::make_pair(n.m, n.offset);
        case Kind::COMPLEX_SCALE_ROT:
        case Kind::SPIRAL:
            return std::make_pair(Mat2{n.cr, -n.sr, n.sr, n.cr}, Point{});
        case Kind::TRANSLATE:
            return std::make_pair(Mat2{}, n.offset);
        case Kind::COMPOSE: {
            Mat2 m{};
            Point o{};
            for (const auto& f : n.factors) {
                auto a = f.as_affine();
                if (!a) return std::nullopt;
                m = a->first * m;
                o = a->first.apply(o) + a->second;
            }
            return std::make_pair(m, o);
        }
        default:
            return std::nullopt;
    }
}

namespace {

double grid_cell_lipschitz(const GridPL& g, long i, long j) {
    const Point d00 = g.disp[j * g.nx + i], d10 = g.disp[j * g.nx + i + 1];
    const Point d01 = g.disp[(j + 1) * g.nx + i], d11 = g.disp[(j + 1) * g.nx + i + 1];
    const double hx = g.hx(), hy = g.hy();
    // the Jacobian is affine over the cell, so its norm peaks at a corner
    double best = 0.0;
    for (int w = 0; w <= 1; ++w)
        for (int u = 0; u <= 1; ++u) {
            const Point dx = (w == 0 ? d10 - d00 : d11 - d01) / hx;
            const Point dy = (u == 0 ? d01 - d00 : d11 - d10) / hy;
            Mat2 m{1.0 + dx.x, dy.x, dx.y, 1.0 + dy.y};
            best = std::max(best, m.spectral_norm());
        }
    return best;
}

template <class F>
void for_cells(const GridPL& g, const Box& b, F&& fn) {
    const double hx = g.hx(), hy = g.hy();
    long i0 = std::clamp<long>(static_cast<long>(std::floor((b.x0 - g.box.x0) / hx)), 0, g.nx - 2);
    long i1 = std::clamp<long>(static_cast<long>(std::floor((b.x1 - g.box.x0) / hx)), 0, g.nx - 2);
    long j0 = std::clamp<long>(static_cast<long>(std::floor((b.y0 - g.box.y0) / hy)), 0, g.ny - 2);
    long j1 = std::clamp<long>(static_cast<long>(std::floor((b.y1 - g.box.y0) / hy)), 0, g.ny - 2);
    for (long j = j0; j <= j1; ++j)
        for (long i = i0; i <= i1; ++i) fn(i, j);
}

Box affine_image(const Mat2& m, Point o, const Box& b) {
    Box out = Box::empty();
    for (Point c : {Point{b.x0, b.y0}, Point{b.x1, b.y0}, Point{b.x0, b.y1}, Point{b.x1, b.y1}})
        out.expand(m.apply(c) + o);
    return out;
}

}  // namespace

std::optional<double> MapExpr::lipschitz(const Box& b) const {
    const Node& n = *node_;
    switch (n.kind) {
        case Kind::AFFINE:
            return n.m.spectral_norm();
        case Kind::COMPLEX_SCALE_ROT:
        case Kind::SPIRAL:
            return n.scale;
        case Kind::TRANSLATE:
            return 1.0;
        case Kind::COMPOSE: {
            double L = 1.0;
            Box cur = b;
            for (const auto& f : n.factors) {
                auto l = f.lipschitz(cur);
                if (!l) return std::nullopt;
                L *= *l;
                cur = f.image_bounds(cur);
            }
            return L;
        }
        case Kind::GRID_PL: {
            const double slack = 1e-12 * (1.0 + n.grid.box.diam());
            // the bound covers b's part inside the grid, where the map is defined
            if (!n.grid.box.inflated(slack).intersects(b)) return std::nullopt;
            double L = 0.0;
            for_cells(n.grid, b, [&](long i, long j) { L = std::max(L, grid_cell_lipschitz(n.grid, i, j)); });
            return L;
        }
        case Kind::PERIOD_N: {
            double L = 0.0;
            auto with_slope = [&](double g) { L = std::max(L, Mat2{g, 0.0, 1.0, 1.0}.spectral_norm()); };
            if (b.x0 <= n.n - 1) with_slope(1.0);
            if (b.x1 >= n.n - 1) with_slope(1.0 - n.n);
            return L;
        }
    }
    return std::nullopt;
}

Box MapExpr::image_bounds(const Box& b) const {
    const Node& n = *node_;
    switch (n.kind) {
        case Kind::COMPOSE: {
            Box cur = b;
            for (const auto& f : n.factors) cur = f.image_bounds(cur);
            return cur;
        }
        case Kind::GRID_PL: {
            Point lo{0, 0}, hi{0, 0};
            bool first = true;
            for_cells(n.grid, b, [&](long i, long j) {
                for (long jj = j; jj <= j + 1; ++jj)
                    for (long ii = i; ii <= i + 1; ++ii) {
                        Point d = n.grid.disp[jj * n.grid.nx + ii];
                        if (first) { lo = hi = d; first = false; }
                        lo = {std::min(lo.x, d.x), std::min(lo.y, d.y)};
                        hi = {std::max(hi.x, d.x), std::max(hi.y, d.y)};
                    }
            });
            return {b.x0 + lo.x, b.y0 + lo.y, b.x1 + hi.x, b.y1 + hi.y};
        }
        case Kind::PERIOD_N: {
            double g0 = period_n_g(n.n, b.x0), g1 = period_n_g(n.n, b.x1);
            double lo = std::min(g0, g1), hi = std::max(g0, g1);
            if (b.x0 < n.n - 1 && b.x1 > n.n - 1) hi = std::max(hi, period_n_g(n.n, n.n - 1));
            return {lo, b.y0, hi, b.y1 + 0.5};
        }
        default: {
            auto a = as_affine();
            return affine_image(a->first, a->second, b);
        }
    }
}

std::vector<double> MapExpr::breakpoints(Point a, Point b) const {
    std::vector<double> out;
    const Node& n = *node_;
    auto add_lines = [&](double a0, double b0, double origin, double step) {
        if (a0 == b0 || !(step > 0)) return;
        double lo = std::min(a0, b0), hi = std::max(a0, b0);
        double k0 = std::ceil((lo - origin) / step), k1 = std::floor((hi - origin) / step);
        if (k1 - k0 > 1e6) return;
        for (double k = k0; k <= k1; k += 1.0) {
            double t = (origin + k * step - a0) / (b0 - a0);
            if (t > 0.0 && t < 1.0) out.push_back(t);
        }
    };
    switch (n.kind) {
        case Kind::GRID_PL:
            add_lines(a.x, b.x, n.grid.box.x0, n.grid.hx());
            add_lines(a.y, b.y, n.grid.box.y0, n.grid.hy());
            break;
        case Kind::PERIOD_N:
            add_lines(a.x, b.x, 0.0, 0.5);
            break;
        case Kind::COMPOSE: {
            Point ca = a, cb = b;
            for (const auto& f : n.factors) {
                auto bp = f.breakpoints(ca, cb);
                out.insert(out.end(), bp.begin(), bp.end());
                if (!f.as_affine()) break;
                ca = f(ca);
                cb = f(cb);
            }
            break;
        }
        default:
            break;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// --------------------------------------------------------------- operations

ImagePolyline image_polyline(const MapExpr& f, const Polyline& c, double chord_tol) {
    if (!(chord_tol > 0)) throw std::invalid_argument("chord tolerance must be positive");
    ImagePolyline out;
    std::vector<Point> pts;
    std::vector<double> params;
    auto push = [&](Point q, double t) {
        if (!pts.empty() && q == pts.back()) return;
        pts.push_back(q);
        params.push_back(t);
    };
    const std::size_t nseg = c.segment_count();
    if (nseg == 0) {
        out.curve = Polyline::single_point(f(c.front()));
        out.src_params = {0.0};
        return out;
    }
    for (std::size_t i = 0; i < nseg; ++i) {
        const Point a = c.seg_a(i), b = c.seg_b(i);
        const double ta = c.vertex_param(i), tb = c.vertex_param(i + 1);
        std::vector<double> cuts{0.0};
        for (double t : f.breakpoints(a, b)) cuts.push_back(t);
        cuts.push_back(1.0);
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const double s0 = cuts[k], s1 = cuts[k + 1];
            const Point p0 = s0 == 0.0 ? a : a + s0 * (b - a);
            const Point p1 = s1 == 1.0 ? b : a + s1 * (b - a);
            const double len = dist(p0, p1);
            auto L = f.lipschitz(Box::of(p0, p1));
            std::size_t pieces;
            if (L) {
                const double want = std::floor(*L * len / chord_tol) + 1.0;
                if (want > 5e7) throw std::runtime_error("image_polyline refinement too deep");
                pieces = static_cast<std::size_t>(want);
            } else {
                pieces = 256;
                out.certified = false;
            }
            for (std::size_t j = 0; j < pieces; ++j) {
                const double s = s0 + (s1 - s0) * static_cast<double>(j) / static_cast<double>(pieces);
                const Point p = j == 0 ? p0 : a + s * (b - a);
                push(f(p), ta + s * (tb - ta));
            }
        }
    }
    if (!c.closed()) push(f(c.back()), 1.0);
    if (c.closed() && pts.size() > 1 && pts.front() == pts.back()) {
        pts.pop_back();
        params.pop_back();
    }
    if (pts.size() == 1) {
        out.curve = Polyline::single_point(pts.front());
    } else {
        const bool closed = c.closed() && pts.size() > 2;
        out.curve = Polyline(std::move(pts), closed);
    }
    out.src_params = std::move(params);
    return out;
}

Orbit orbit(const MapExpr& f, Point x, int m) {
    Orbit o;
    o.points.push_back(x);
    for (int k = 0; k < m; ++k) {
        try {
            o.points.push_back(f(o.points.back()));
        } catch (const OutOfDomain&) {
            o.truncated = true;
            break;
        }
    }
    return o;
}

MapExpr conjugate(const MapExpr& f, const MapExpr& h) {
    auto a = h.as_affine();
    if (!a) throw std::invalid_argument("conjugating map must be affine");
    const Mat2 mi = a->first.inverse();
    const MapExpr hinv = MapExpr::affine(mi, mi.apply(Point{} - a->second));
    MapExpr g = MapExpr::compose({hinv, f, h});
    if (auto d = f.domain()) {
        Box img = affine_image(a->first, a->second, *d);
        g = g.with_domain(img);
    }
    return g;
}

MapExpr period_n_axis_map(int n, const Box& box) {
    // nodes at every integer column keep the single kink of g exact
    const long nx = static_cast<long>(std::llround(box.width())) + 1;
    return MapExpr::grid_pl(
        GridPL::sample(box, nx, 2, [n](Point p) { return Point{MapExpr::period_n_g(n, p.x), 0.0}; }));
}

}  // namespace planefix
