#include "planefix/complement.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <unordered_map>

namespace planefix {

namespace {

constexpr int kBlocked = -3;
constexpr int kFree = -4;
constexpr int kDropped = -5;

struct VertexSnap {
    double snap;
    std::vector<Point> pts;
    std::unordered_map<long long, std::vector<int>> grid;

    static long long key(long i, long j) { return (static_cast<long long>(i) << 32) ^ (j & 0xffffffffLL); }

    int find_or_add(Point p) {
        const long i = static_cast<long>(std::floor(p.x / snap));
        const long j = static_cast<long>(std::floor(p.y / snap));
        for (long di = -1; di <= 1; ++di)
            for (long dj = -1; dj <= 1; ++dj) {
                auto it = grid.find(key(i + di, j + dj));
                if (it == grid.end()) continue;
                for (int id : it->second)
                    if (dist(pts[id], p) <= snap) return id;
            }
        pts.push_back(p);
        int id = static_cast<int>(pts.size()) - 1;
        grid[key(i, j)].push_back(id);
        return id;
    }
};

int find_root(std::vector<int>& parent, int a) {
    while (parent[a] != a) {
        parent[a] = parent[parent[a]];
        a = parent[a];
    }
    return a;
}

}  // namespace

std::vector<int> ComplementDecomposition::bounded_faces() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < faces.size(); ++i)
        if (faces[i].bounded) out.push_back(static_cast<int>(i));
    return out;
}

int exact_face_count(const std::vector<Polyline>& curves) {
    std::vector<TaggedSegment> segs;
    Box bb = Box::empty();
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const auto& p = curves[c];
        for (std::size_t i = 0; i < p.segment_count(); ++i) {
            segs.push_back({p.seg_a(i), p.seg_b(i), static_cast<int>(c), 0.0, 0.0});
            bb.expand(p.seg_a(i));
            bb.expand(p.seg_b(i));
        }
    }
    if (segs.empty()) return 1;
    SegmentIndex idx(segs);
    VertexSnap vs{1e-9 * std::max(bb.diam(), 1e-300), {}, {}};
    std::vector<std::vector<std::pair<double, int>>> on_seg(segs.size());
    auto frac = [](const TaggedSegment& s, Point p) {
        double t = 0.0;
        closest_on_segment(p, s.a, s.b, &t);
        return t;
    };
    for (std::size_t k = 0; k < segs.size(); ++k) {
        on_seg[k].push_back({0.0, vs.find_or_add(segs[k].a)});
        on_seg[k].push_back({1.0, vs.find_or_add(segs[k].b)});
    }
    for (std::size_t k = 0; k < segs.size(); ++k) {
        const auto& s = segs[k];
        idx.visit(Box::of(s.a, s.b), [&](std::size_t j) {
            if (j <= k) return;
            const auto& o = segs[j];
            for (Point q : segment_intersection_points(s.a, s.b, o.a, o.b)) {
                int id = vs.find_or_add(q);
                on_seg[k].push_back({frac(s, q), id});
                on_seg[j].push_back({frac(o, q), id});
            }
        });
    }
    std::set<std::pair<int, int>> edges;
    for (auto& lst : on_seg) {
        std::sort(lst.begin(), lst.end());
        for (std::size_t i = 0; i + 1 < lst.size(); ++i) {
            int a = lst[i].second, b = lst[i + 1].second;
            if (a == b) continue;
            edges.insert({std::min(a, b), std::max(a, b)});
        }
    }
    std::vector<int> parent(vs.pts.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<char> used(vs.pts.size(), 0);
    for (auto [a, b] : edges) {
        used[a] = used[b] = 1;
        int ra = find_root(parent, a), rb = find_root(parent, b);
        if (ra != rb) parent[ra] = rb;
    }
    long V = 0, C = 0;
    for (std::size_t i = 0; i < vs.pts.size(); ++i) {
        if (!used[i]) continue;
        ++V;
        if (find_root(parent, static_cast<int>(i)) == static_cast<int>(i)) ++C;
    }
    const long E = static_cast<long>(edges.size());
    return static_cast<int>(E - V + 1 + C);
}

ComplementDecomposition decompose_complement(const std::vector<Polyline>& curves, const Box& box, double resolution) {
    if (!(resolution > 0)) throw GeomError("resolution must be positive");
    ComplementDecomposition d;
    d.curves = curves;
    d.resolution = resolution;
    d.box = box;
    d.pitch = resolution / 4.0;
    d.index = SegmentIndex::of(curves);
    const double h = d.pitch;
    d.origin = {box.x0 - 2 * h, box.y0 - 2 * h};
    d.nx = static_cast<long>(std::ceil((box.width() + 4 * h) / h));
    d.ny = static_cast<long>(std::ceil((box.height() + 4 * h) / h));
    if (d.nx * d.ny > 40'000'000L) throw GeomError("decomposition grid too large; coarsen the resolution");
    const long nx = d.nx, ny = d.ny;
    d.label.assign(static_cast<std::size_t>(nx * ny), kFree);

    // conservative rasterisation: every cell a curve touches is blocked
    const double pad = 1e-9 * h;
    auto col_of = [&](double x) { return static_cast<long>(std::floor((x - d.origin.x) / h)); };
    auto row_of = [&](double y) { return static_cast<long>(std::floor((y - d.origin.y) / h)); };
    auto block = [&](long i, long j) {
        if (i < 0 || j < 0 || i >= nx || j >= ny) return;
        d.label[static_cast<std::size_t>(j * nx + i)] = kBlocked;
    };
    for (const auto& s : d.index.segments()) {
        const Point a = s.a, b = s.b;
        const long c0 = col_of(std::min(a.x, b.x) - pad), c1 = col_of(std::max(a.x, b.x) + pad);
        for (long c = c0; c <= c1; ++c) {
            double xl = d.origin.x + c * h - pad, xr = d.origin.x + (c + 1) * h + pad;
            double ylo, yhi;
            if (a.x == b.x) {
                ylo = std::min(a.y, b.y);
                yhi = std::max(a.y, b.y);
            } else {
                double ta = (xl - a.x) / (b.x - a.x), tb = (xr - a.x) / (b.x - a.x);
                double t0 = std::clamp(std::min(ta, tb), 0.0, 1.0), t1 = std::clamp(std::max(ta, tb), 0.0, 1.0);
                double ya = a.y + t0 * (b.y - a.y), yb = a.y + t1 * (b.y - a.y);
                ylo = std::min(ya, yb);
                yhi = std::max(ya, yb);
            }
            const long r0 = row_of(ylo - pad), r1 = row_of(yhi + pad);
            for (long r = r0; r <= r1; ++r) block(c, r);
        }
    }

    // flood fill
    std::vector<int> comp(d.label.size(), -1);
    std::vector<bool> comp_border;
    int ncomp = 0;
    std::deque<long> q;
    for (long start = 0; start < nx * ny; ++start) {
        if (d.label[start] != kFree || comp[start] >= 0) continue;
        bool border = false;
        comp[start] = ncomp;
        q.push_back(start);
        while (!q.empty()) {
            long c = q.front();
            q.pop_front();
            long i = c % nx, j = c / nx;
            if (i == 0 || j == 0 || i == nx - 1 || j == ny - 1) border = true;
            const long nb[4] = {i > 0 ? c - 1 : -1, i + 1 < nx ? c + 1 : -1, j > 0 ? c - nx : -1,
                                j + 1 < ny ? c + nx : -1};
            for (long n : nb) {
                if (n < 0 || d.label[n] != kFree || comp[n] >= 0) continue;
                comp[n] = ncomp;
                q.push_back(n);
            }
        }
        comp_border.push_back(border);
        ++ncomp;
    }

    // chamfer clearance (3-4 metric) to pick well-inside representatives
    const int inf = 1 << 29;
    std::vector<int> cl(d.label.size());
    for (std::size_t k = 0; k < cl.size(); ++k) cl[k] = d.label[k] == kBlocked ? 0 : inf;
    for (long j = 0; j < ny; ++j)
        for (long i = 0; i < nx; ++i) {
            int& v = cl[j * nx + i];
            if (i > 0) v = std::min(v, cl[j * nx + i - 1] + 3);
            if (j > 0) {
                v = std::min(v, cl[(j - 1) * nx + i] + 3);
                if (i > 0) v = std::min(v, cl[(j - 1) * nx + i - 1] + 4);
                if (i + 1 < nx) v = std::min(v, cl[(j - 1) * nx + i + 1] + 4);
            }
        }
    for (long j = ny - 1; j >= 0; --j)
        for (long i = nx - 1; i >= 0; --i) {
            int& v = cl[j * nx + i];
            if (i + 1 < nx) v = std::min(v, cl[j * nx + i + 1] + 3);
            if (j + 1 < ny) {
                v = std::min(v, cl[(j + 1) * nx + i] + 3);
                if (i + 1 < nx) v = std::min(v, cl[(j + 1) * nx + i + 1] + 4);
                if (i > 0) v = std::min(v, cl[(j + 1) * nx + i - 1] + 4);
            }
        }
    std::vector<long> best(ncomp, -1), count(ncomp, 0);
    std::vector<Box> extent(ncomp, Box::empty());
    for (long c = 0; c < nx * ny; ++c) {
        int k = comp[c];
        if (k < 0) continue;
        ++count[k];
        long i = c % nx, j = c / nx;
        extent[k].expand({d.origin.x + i * h, d.origin.y + j * h});
        extent[k].expand({d.origin.x + (i + 1) * h, d.origin.y + (j + 1) * h});
        if (best[k] < 0 || cl[c] > cl[best[k]]) best[k] = c;
    }

    auto center_of = [&](long c) {
        return Point{d.origin.x + (static_cast<double>(c % nx) + 0.5) * h,
                     d.origin.y + (static_cast<double>(c / nx) + 0.5) * h};
    };
    std::vector<int> remap(ncomp, kDropped);
    int border_faces = 0;
    for (int k = 0; k < ncomp; ++k) {
        Face f;
        f.representative = center_of(best[k]);
        f.bounded = !comp_border[k];
        f.cells = count[k];
        f.extent = extent[k];
        auto hit = d.index.nearest(f.representative);
        f.clearance = d.index.empty() ? std::numeric_limits<double>::infinity() : hit.distance;
        f.low_confidence = f.clearance < resolution;
        if (f.bounded && f.clearance < h) continue;  // sliver below grid visibility
        if (!f.bounded) {
            ++border_faces;
            d.unbounded = static_cast<int>(d.faces.size());
        }
        remap[k] = static_cast<int>(d.faces.size());
        d.faces.push_back(f);
    }
    if (border_faces != 1) throw ResolutionTooCoarse("curves reach the decomposition box border");
    for (long c = 0; c < nx * ny; ++c) {
        if (d.label[c] == kBlocked) continue;
        d.label[c] = remap[comp[c]];
    }

    d.exact_faces = exact_face_count(curves);
    const int seen = static_cast<int>(d.faces.size());
    if (seen > d.exact_faces)
        throw ResolutionTooCoarse("flood fill split a face (" + std::to_string(seen) + " seen, " +
                                  std::to_string(d.exact_faces) + " exist); refine the resolution");
    d.missing_small_faces = d.exact_faces - seen;
    return d;
}

int point_in_face(const ComplementDecomposition& d, Point p, double on_curve_tol) {
    if (!d.index.empty()) {
        auto hit = d.index.nearest(p, std::max(on_curve_tol, 0.0));
        if (hit.distance <= on_curve_tol) return kOnCurve;
    }
    const double h = d.pitch;
    const long i = static_cast<long>(std::floor((p.x - d.origin.x) / h));
    const long j = static_cast<long>(std::floor((p.y - d.origin.y) / h));
    if (i < 0 || j < 0 || i >= d.nx || j >= d.ny) return d.unbounded;
    const int own = d.label[j * d.nx + i];
    if (own >= 0) return own;
    // nearby free cell whose centre is visible from p
    struct Cand {
        double dd;
        long c;
    };
    std::vector<Cand> cands;
    const long R = 6;
    for (long jj = std::max(0L, j - R); jj <= std::min(d.ny - 1, j + R); ++jj)
        for (long ii = std::max(0L, i - R); ii <= std::min(d.nx - 1, i + R); ++ii) {
            long c = jj * d.nx + ii;
            if (d.label[c] < 0) continue;
            Point ctr{d.origin.x + (ii + 0.5) * h, d.origin.y + (jj + 0.5) * h};
            cands.push_back({dist(ctr, p), c});
        }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        return a.dd < b.dd || (a.dd == b.dd && a.c < b.c);
    });
    for (const auto& cd : cands) {
        long ii = cd.c % d.nx, jj = cd.c / d.nx;
        Point ctr{d.origin.x + (ii + 0.5) * h, d.origin.y + (jj + 0.5) * h};
        if (!d.index.first_crossing(p, ctr)) return d.label[cd.c];
    }
    return kUnresolved;
}

}  // namespace planefix
