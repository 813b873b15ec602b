#include "planefix/relations.hpp"

#include <algorithm>
#include <cmath>

namespace planefix {

// ------------------------------------------------------------------ TriState

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::SATISFIED: return "SATISFIED";
        case Verdict::VIOLATED: return "VIOLATED";
        case Verdict::UNDECIDED: return "UNDECIDED";
        case Verdict::NOT_APPLICABLE: return "NOT_APPLICABLE";
    }
    return "?";
}

Verdict verdict_from_string(const std::string& s) {
    if (s == "SATISFIED") return Verdict::SATISFIED;
    if (s == "VIOLATED") return Verdict::VIOLATED;
    if (s == "UNDECIDED") return Verdict::UNDECIDED;
    if (s == "NOT_APPLICABLE") return Verdict::NOT_APPLICABLE;
    throw std::invalid_argument("unknown verdict '" + s + "'");
}

TriState combine(const TriState& a, const TriState& b) {
    auto rank = [](Verdict v) {
        switch (v) {
            case Verdict::VIOLATED: return 3;
            case Verdict::UNDECIDED: return 2;
            case Verdict::NOT_APPLICABLE: return 1;
            default: return 0;
        }
    };
    if (rank(a.verdict) != rank(b.verdict)) return rank(a.verdict) > rank(b.verdict) ? a : b;
    if (a.verdict == Verdict::SATISFIED) {
        TriState r = a.margin <= b.margin ? a : b;
        r.resolution = std::max(a.resolution, b.resolution);
        return r;
    }
    return a;
}

void Tolerances::validate(double lipschitz) const {
    if (!(eps_sep > 0 && h_sample > 0 && tol_fix > 0 && tube_factor > 0 && grid_pitch > 0))
        throw std::invalid_argument("tolerances must be positive");
    if (!(eps_sep > 2.0 * h_sample * lipschitz))
        throw std::invalid_argument("eps_sep must exceed 2 * h_sample * Lipschitz bound (" +
                                    std::to_string(2.0 * h_sample * lipschitz) + ")");
}

// ------------------------------------------------------------ local search

double golden_min(const std::function<double(double)>& phi, double a, double b, double* fmin, int iters) {
    const int coarse = 16;
    double best_t = a, best_f = phi(a);
    for (int k = 1; k <= coarse; ++k) {
        double t = a + (b - a) * k / coarse;
        double v = phi(t);
        if (v < best_f) { best_f = v; best_t = t; }
    }
    double lo = std::max(a, best_t - (b - a) / coarse), hi = std::min(b, best_t + (b - a) / coarse);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = phi(x1), f2 = phi(x2);
    for (int i = 0; i < iters && hi - lo > 0; ++i) {
        if (f1 <= f2) {
            hi = x2; x2 = x1; f2 = f1; x1 = hi - g * (hi - lo); f1 = phi(x1);
        } else {
            lo = x1; x1 = x2; f1 = f2; x2 = lo + g * (hi - lo); f2 = phi(x2);
        }
    }
    for (auto [t, v] : {std::pair{x1, f1}, std::pair{x2, f2}})
        if (v < best_f) { best_f = v; best_t = t; }
    if (fmin) *fmin = best_f;
    return best_t;
}

Point pattern_min(const std::function<double(Point)>& phi, Point p, double step, double* fmin) {
    double best = phi(p);
    for (int it = 0; it < 200 && step > 1e-16 * (1 + norm(p)); ++it) {
        bool moved = false;
        for (Point d : {Point{1, 0}, Point{-1, 0}, Point{0, 1}, Point{0, -1}, Point{1, 1}, Point{-1, -1},
                        Point{1, -1}, Point{-1, 1}}) {
            Point q = p + step * d;
            double v;
            try {
                v = phi(q);
            } catch (const OutOfDomain&) {
                continue;
            }
            if (v < best) { best = v; p = q; moved = true; break; }
        }
        if (!moved) step *= 0.5;
    }
    if (fmin) *fmin = best;
    return p;
}

Polyline trim_end_tubes(const MapExpr& f, const Polyline& src, double tube) {
    if (src.degenerate()) return src;
    const double chord = std::max(tube / 16.0, 1e-12);
    const ImagePolyline img = image_polyline(f, src, chord);
    const auto& vs = img.curve.vertices();
    const Point a = vs.front(), b = vs.back();
    std::size_t i0 = 0, i1 = vs.size() - 1;
    while (i0 < vs.size() && dist(vs[i0], a) < tube) ++i0;
    while (i1 > 0 && dist(vs[i1], b) < tube) --i1;
    if (i0 >= vs.size() || i1 < i0 || img.src_params[i0] >= img.src_params[i1]) return Polyline();
    return subarc(src, img.src_params[i0], img.src_params[i1]);
}

namespace {

TriState image_against(const MapExpr& f, const Polyline& V, const Polyline& W, const Tolerances& tol) {
    const ImagePolyline img = image_polyline(f, V, tol.h_sample);
    const SegmentIndex widx = SegmentIndex::of(W);
    const CurveGap gap = curve_gap(img.curve, widx);
    if (gap.distance >= tol.eps_sep) {
        TriState t = TriState::satisfied(gap.distance, tol.h_sample);
        if (!img.certified) {
            t = TriState::undecided(gap.distance, tol.h_sample, "image flattened without a Lipschitz bound");
        }
        return t;
    }
    // refine near the closest approach
    const auto& sp = img.src_params;
    const std::size_t k = std::min(gap.seg_a, sp.size() - 1);
    const double s0 = sp[k > 0 ? k - 1 : 0];
    const double s1 = sp[std::min(k + 2, sp.size() - 1)];
    auto phi = [&](double s) { return widx.nearest(f(V.point_at(s))).distance; };
    double fmin = 0.0;
    const double s = golden_min(phi, s0, s1, &fmin);
    if (fmin <= tol.viol_tol()) {
        const Point p = V.point_at(s);
        return TriState::violated({p, f(p)}, "image meets the target");
    }
    return TriState::undecided(gap.distance, tol.h_sample, "closest approach below eps_sep");
}

}  // namespace

TriState is_moving(const MapExpr& f, const Polyline& V, const Tolerances& tol) { return image_against(f, V, V, tol); }

TriState dodges(const MapExpr& f, const Polyline& V, const Polyline& W, const Tolerances& tol) {
    return image_against(f, V, W, tol);
}

std::vector<Point> grid_samples(const Box& b, double pitch) {
    std::vector<Point> out;
    const long nx = static_cast<long>(std::floor(b.width() / pitch + 1e-9)) + 1;
    const long ny = static_cast<long>(std::floor(b.height() / pitch + 1e-9)) + 1;
    out.reserve(static_cast<std::size_t>(nx * ny));
    for (long j = 0; j < ny; ++j)
        for (long i = 0; i < nx; ++i) out.push_back({b.x0 + i * pitch, b.y0 + j * pitch});
    return out;
}

std::vector<Point> disc_samples(Point c, double r, double pitch) {
    std::vector<Point> out;
    for (const Point& p : grid_samples({c.x - r, c.y - r, c.x + r, c.y + r}, pitch))
        if (dist(p, c) <= r) out.push_back(p);
    return out;
}

TriState exclusive_in(const MapExpr& f, const Polyline& V, const Region& E, const Tolerances& tol, double pitch) {
    if (!(pitch > 0)) pitch = tol.h_sample;
    const ImagePolyline img = image_polyline(f, V, tol.h_sample);
    const SegmentIndex iidx = SegmentIndex::of(img.curve);
    const SegmentIndex vidx = SegmentIndex::of(V);
    const double tube = tol.tube();
    // margins beyond cap are reported as cap
    const double cap = 2.0 * tol.eps_sep;
    double best = std::numeric_limits<double>::infinity();
    Point best_z{};
    long probed = 0;
    const Box b = E.bounds();
    const long nx = static_cast<long>(std::floor(b.width() / pitch)) + 1;
    const long ny = static_cast<long>(std::floor(b.height() / pitch)) + 1;
    for (long j = 0; j < ny; ++j)
        for (long i = 0; i < nx; ++i) {
            const Point z{b.x0 + i * pitch, b.y0 + j * pitch};
            if (!E.contains(z)) continue;
            if (vidx.nearest(z, tube).distance <= tube) continue;
            const Point fz = f(z);
            ++probed;
            auto h = iidx.nearest(fz, std::min(best, cap));
            if (h.distance < best) {
                best = h.distance;
                best_z = z;
            }
        }
    if (probed == 0) return TriState::satisfied(std::numeric_limits<double>::max(), pitch);
    if (!std::isfinite(best)) best = cap;
    if (best >= tol.eps_sep) {
        if (!img.certified) return TriState::undecided(best, pitch, "image flattened without a Lipschitz bound");
        return TriState::satisfied(best, pitch);
    }
    auto phi = [&](Point z) {
        if (vidx.nearest(z, tube).distance <= tube || !E.contains(z)) return std::numeric_limits<double>::infinity();
        return iidx.nearest(f(z)).distance;
    };
    double fmin = best;
    const Point z = pattern_min(phi, best_z, pitch, &fmin);
    if (fmin <= tol.viol_tol()) {
        const Point fz = f(z);
        const double s = V.project(iidx.nearest(fz).closest);
        return TriState::violated({z, V.point_at(s), fz}, "a point outside V shares an image with V");
    }
    return TriState::undecided(best, pitch, "images of E - V approach f(V) below eps_sep");
}

InjectivityMargin injectivity_margin(const MapExpr& f, const std::vector<Point>& samples, double eps) {
    InjectivityMargin m;
    m.value = std::numeric_limits<double>::infinity();
    std::vector<Point> img(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) img[i] = f(samples[i]);
    const double eps_cut = eps * (1.0 - 1e-12);
    for (std::size_t i = 0; i < samples.size(); ++i)
        for (std::size_t j = i + 1; j < samples.size(); ++j) {
            if (dist(samples[i], samples[j]) < eps_cut) continue;
            const double d = dist(img[i], img[j]);
            if (d < m.value) {
                m.value = d;
                m.p = samples[i];
                m.q = samples[j];
            }
        }
    if (!std::isfinite(m.value)) m.value = 0.0;
    return m;
}

LocalOrientation local_orientation(const MapExpr& f, Point center, double radius) {
    LocalOrientation out;
    out.radius = radius;
    try {
        std::vector<Point> samples = disc_samples(center, radius, radius / 8.0);
        std::vector<Point> ring;
        for (int k = 0; k < 64; ++k) {
            const double th = 2.0 * M_PI * k / 64.0;
            ring.push_back({center.x + radius * std::cos(th), center.y + radius * std::sin(th)});
        }
        samples.insert(samples.end(), ring.begin(), ring.end());
        const auto inj = injectivity_margin(f, samples, radius / 8.0);
        out.injectivity = inj.value;
        if (!(inj.value > 0)) {
            out.note = "not injective at resolution";
            return out;
        }
        const Polyline circle(ring, true);
        auto L = f.lipschitz(circle.bounds());
        const double chord = radius * (L ? *L : 1.0) / 32.0;
        const ImagePolyline img = image_polyline(f, circle, chord);
        if (img.curve.degenerate() || !img.curve.closed() || !is_simple(img.curve)) {
            out.note = "image circle not simple at resolution";
            return out;
        }
        const int a = winding_number(DirectedCircle{circle, 0, +1}, center);
        const int b = winding_number(DirectedCircle{img.curve, 0, +1}, f(center));
        if (a == 0 || b == 0) {
            out.note = "image of the centre not enclosed";
            return out;
        }
        out.orientation = a * b > 0 ? Orientation::PRESERVING : Orientation::REVERSING;
    } catch (const std::exception& e) {
        out.orientation = Orientation::UNDECIDED;
        out.note = e.what();
    }
    return out;
}

}  // namespace planefix
