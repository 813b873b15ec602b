#include "planefix/fixpoint.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "planefix/angles.hpp"

namespace planefix {

namespace {

struct BSample {
    double s;
    Point p;
    Point g;
};

Point boundary_point(const Box& b, double s) {
    // s in [0,4): bottom, right, top, left, anticlockwise
    const int side = std::min(3, static_cast<int>(std::floor(s)));
    const double u = s - side;
    switch (side) {
        case 0: return {u == 0 ? b.x0 : b.x0 + u * b.width(), b.y0};
        case 1: return {b.x1, u == 0 ? b.y0 : b.y0 + u * b.height()};
        case 2: return {u == 0 ? b.x1 : b.x1 - u * b.width(), b.y1};
        default: return {b.x0, u == 0 ? b.y1 : b.y1 - u * b.height()};
    }
}

}  // namespace

DegreeResult degree_on_box(const MapExpr& f, const Box& box, double zero_tol) {
    DegreeResult r;
    auto L = f.lipschitz(box);
    const double Lg = L ? *L + 1.0 : 0.0;
    std::vector<BSample> s;
    const int init = 8;
    for (int k = 0; k < 4 * init; ++k) {
        const double t = static_cast<double>(k) / init;
        const Point p = boundary_point(box, t);
        s.push_back({t, p, f(p) - p});
    }
    const std::size_t cap = 200000;
    while (true) {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& q : s) m = std::min(m, norm(q.g));
        r.min_displacement = m;
        if (!(m >= zero_tol) || m == 0.0) {
            r.boundary_zero = true;
            r.note = "displacement vanishes on the boundary at tolerance";
            r.samples = s.size();
            return r;
        }
        std::vector<BSample> next;
        next.reserve(s.size() * 2);
        bool refined = false;
        for (std::size_t i = 0; i < s.size(); ++i) {
            const BSample& a = s[i];
            const BSample& b = s[(i + 1) % s.size()];
            next.push_back(a);
            const bool chord_ok = norm(b.g - a.g) < m / 3.0;
            const bool lip_ok = !L || Lg * dist(a.p, b.p) < m / 2.0;
            if (!(chord_ok && lip_ok)) {
                const double sb = (i + 1 == s.size()) ? 4.0 : b.s;
                const double sm = 0.5 * (a.s + sb);
                if (sm == a.s || sm == sb) {
                    r.boundary_zero = true;
                    r.note = "boundary sampling reached parameter resolution";
                    r.samples = s.size();
                    return r;
                }
                const Point p = boundary_point(box, sm);
                next.push_back({sm, p, f(p) - p});
                refined = true;
            }
        }
        s.swap(next);
        if (!refined) break;
        if (s.size() > cap) {
            r.boundary_zero = true;
            r.note = "boundary sampling cap reached";
            r.samples = s.size();
            return r;
        }
    }
    double sum = 0.0;
    const Point o{0.0, 0.0};
    for (std::size_t i = 0; i < s.size(); ++i) sum += directed_angle(o, s[i].g, s[(i + 1) % s.size()].g);
    r.degree = static_cast<int>(std::lround(sum / (2.0 * M_PI)));
    r.samples = s.size();
    return r;
}

namespace {

FixedPointCertificate certify_box(const MapExpr& f, const Box& b, int degree) {
    FixedPointCertificate c;
    c.box = b;
    c.boundary_degree = degree;
    Point p = b.center();
    double res = norm(f(p) - p);
    for (int it = 0; it < 40; ++it) {
        const Point q = p + 0.5 * (f(p) - p);
        if (!b.contains(q)) break;
        const double rq = norm(f(q) - q);
        if (!(rq < res)) break;
        p = q;
        res = rq;
    }
    c.approx = p;
    c.residual = res;
    return c;
}

/// Boundary threshold below the root: the Lipschitz sampling rule carries the certificate, so the
/// threshold only has to stay clear of rounding noise in f(p) - p.
double child_zero_tol(const MapExpr& f, const Box& b, double eps_sep, double root_diam) {
    const auto L = f.lipschitz(b);
    // rounding in f(p) - p scales with |Df||p|, |p| and |f(p)|
    const double noise = 16.0 * std::numeric_limits<double>::epsilon() *
                         ((2.0 + (L ? *L : 1.0)) * (1.0 + norm(b.center())) + norm(f(b.center())));
    return std::max(eps_sep * 1e-6 * b.diam() / root_diam, noise);
}

}  // namespace

std::vector<Box> cover_in_domain(const MapExpr& f, const Box& b, int n) {
    auto inside = [&](const Box& t) {
        try {
            for (Point c : {Point{t.x0, t.y0}, Point{t.x1, t.y0}, Point{t.x0, t.y1}, Point{t.x1, t.y1}}) f(c);
            return true;
        } catch (const OutOfDomain&) {
            return false;
        }
    };
    if (inside(b)) return {b};
    std::vector<Box> out;
    const double w = b.width() / n, h = b.height() / n;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const Box t{b.x0 + i * w, b.y0 + j * h, i + 1 == n ? b.x1 : b.x0 + (i + 1) * w,
                        j + 1 == n ? b.y1 : b.y0 + (j + 1) * h};
            if (inside(t)) out.push_back(t);
        }
    return out;
}

LocateResult locate(const MapExpr& f, const std::vector<Box>& region, const LocateOptions& opt) {
    LocateResult out;
    std::mt19937 rng(opt.seed_jitter);
    std::uniform_real_distribution<double> jit(0.5, 1.5);
    struct Item {
        Box box;
        int degree;
        double root_diam;
    };
    std::vector<Item> stack;
    for (const Box& b : region) {
        auto d = degree_on_box(f, b, opt.eps_sep);
        ++out.boxes_processed;
        if (d.boundary_zero) {
            out.undecided.push_back(b);
            continue;
        }
        if (d.degree != 0) stack.push_back({b, d.degree, b.diam()});
    }
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        if (it.box.diam() < opt.tol_fix) {
            out.certificates.push_back(certify_box(f, it.box, it.degree));
            continue;
        }
        if (out.boxes_processed > opt.max_boxes) {
            out.undecided.push_back(it.box);
            continue;
        }
        const bool split_x = it.box.width() >= it.box.height();
        const double w = split_x ? it.box.width() : it.box.height();
        const double mid = split_x ? it.box.center().x : it.box.center().y;
        bool done = false;
        for (int attempt = 0; attempt < 2 && !done; ++attempt) {
            double cut = mid;
            if (attempt == 1) {
                double j = std::min(opt.eps_sep, w) / 7.0;
                if (opt.seed_jitter != 0) j *= jit(rng);
                cut = mid + j;
            }
            Box a = it.box, b = it.box;
            if (split_x) { a.x1 = cut; b.x0 = cut; } else { a.y1 = cut; b.y0 = cut; }
            const double zt_a = child_zero_tol(f, a, opt.eps_sep, it.root_diam);
            const double zt_b = child_zero_tol(f, b, opt.eps_sep, it.root_diam);
            auto da = degree_on_box(f, a, zt_a);
            auto db = degree_on_box(f, b, zt_b);
            out.boxes_processed += 2;
            if (da.boundary_zero || db.boundary_zero) continue;
            done = true;
            if (da.degree + db.degree != it.degree) {
                out.undecided.push_back(it.box);  // additivity broke: sampling cannot be trusted
                break;
            }
            // push b first so a is processed first
            if (db.degree != 0) stack.push_back({b, db.degree, it.root_diam});
            if (da.degree != 0) stack.push_back({a, da.degree, it.root_diam});
        }
        if (!done) out.undecided.push_back(it.box);
    }
    auto ll = [](const Box& a, const Box& b) { return a.x0 < b.x0 || (a.x0 == b.x0 && a.y0 < b.y0); };
    std::sort(out.certificates.begin(), out.certificates.end(),
              [&](const FixedPointCertificate& a, const FixedPointCertificate& b) { return ll(a.box, b.box); });
    std::sort(out.undecided.begin(), out.undecided.end(), ll);
    return out;
}

OracleResult grid_oracle(const MapExpr& f, const Box& box, double pitch) {
    OracleResult r;
    r.min = std::numeric_limits<double>::infinity();
    const long nx = static_cast<long>(std::floor(box.width() / pitch + 1e-9)) + 1;
    const long ny = static_cast<long>(std::floor(box.height() / pitch + 1e-9)) + 1;
    for (long j = 0; j < ny; ++j)
        for (long i = 0; i < nx; ++i) {
            const Point p{box.x0 + i * pitch, box.y0 + j * pitch};
            const double d = norm(f(p) - p);
            ++r.points;
            if (d < r.min) {
                r.min = d;
                r.argmin = p;
            }
        }
    return r;
}

std::optional<double> ivt_1d(const MapExpr& f, double x, double y, double tol_fix, double axis_tol) {
    auto phi = [&](double r) {
        const Point q = f(Point{r, 0.0});
        if (std::abs(q.y) > axis_tol) throw std::domain_error("image leaves the axis");
        return q.x - r;
    };
    double a = std::min(x, y), b = std::max(x, y);
    double fa = phi(a), fb = phi(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0) return std::nullopt;
    for (int it = 0; it < 400; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = phi(m);
        if (std::abs(fm) <= tol_fix && b - a <= tol_fix) return m;
        if (fm == 0.0) return m;
        if (m == a || m == b) return std::abs(fa) < std::abs(fb) ? a : b;
        if ((fm < 0) == (fa < 0)) { a = m; fa = fm; } else { b = m; fb = fm; }
    }
    return 0.5 * (a + b);
}

std::vector<PeriodicHit> periodic_orbit_scan(const MapExpr& f, const Box& box, long n, int max_period,
                                             double thresh) {
    std::vector<PeriodicHit> hits;
    for (long j = 0; j < n; ++j)
        for (long i = 0; i < n; ++i) {
            const Point p{box.x0 + box.width() * i / (n - 1), box.y0 + box.height() * j / (n - 1)};
            Point q = p;
            try {
                const Point f1 = f(p);
                if (norm(f1 - p) < thresh) continue;  // fixed points are excluded
                q = f1;
                for (int k = 2; k <= max_period; ++k) {
                    q = f(q);
                    if (norm(q - p) < thresh) {
                        hits.push_back({p, k});
                        break;
                    }
                }
            } catch (const OutOfDomain&) {
            }
        }
    return hits;
}

}  // namespace planefix
