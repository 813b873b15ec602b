#include "planefix/svg.hpp"

#include <algorithm>
#include <cstdio>

namespace planefix {

namespace {

std::string f4(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    std::string s = buf;
    if (s == "-0.0000") s = "0.0000";
    return s;
}

/// Plane to document coordinates: y points down in SVG.
std::string xy(Point p) { return f4(p.x) + "," + f4(-p.y); }

std::string path_of(const Polyline& c) {
    std::string d;
    for (std::size_t i = 0; i < c.size(); ++i) d += (i ? " L" : "M") + xy(c.vertices()[i]);
    if (c.closed()) d += " Z";
    return d;
}

std::string rect(const Box& b) {
    return "<rect x=\"" + f4(b.x0) + "\" y=\"" + f4(-b.y1) + "\" width=\"" + f4(b.width()) + "\" height=\"" +
           f4(b.height()) + "\"/>\n";
}

}  // namespace

std::string render_svg(const RenderData& d) {
    Box bb = Box::empty();
    auto grow = [&](const Polyline& c) {
        for (const Point& p : c.vertices()) bb.expand(p);
    };
    for (const auto& c : d.domain) grow(c);
    for (const auto& c : d.arcs) grow(c);
    for (const auto& c : d.images) grow(c);
    for (const Box& b : d.boxes) bb.expand(b.center());
    for (const Point& p : d.points) bb.expand(p);
    if (bb.is_empty()) bb = {-1, -1, 1, 1};
    const double size = std::max({bb.width(), bb.height(), 1e-3});
    bb = bb.inflated(0.05 * size);
    const double w = size / 400.0;

    std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" + f4(bb.x0) + " " + f4(-bb.y1) + " " +
         f4(bb.width()) + " " + f4(bb.height()) + "\" width=\"800\" height=\"" +
         f4(800.0 * bb.height() / bb.width()) + "\">\n";

    s += "<g id=\"domain\" fill=\"none\" stroke=\"#555555\" stroke-width=\"" + f4(w) + "\">\n";
    for (const auto& c : d.domain) s += "<path d=\"" + path_of(c) + "\"/>\n";
    s += "</g>\n";

    if (!d.faces.empty()) {
        s += "<g id=\"faces\" fill=\"#9ecae1\" fill-opacity=\"0.5\" stroke=\"none\">\n";
        for (const Box& b : d.faces) s += rect(b);
        s += "</g>\n";
    }
    if (!d.images.empty()) {
        s += "<g id=\"images\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"" + f4(w) + "\">\n";
        for (const auto& c : d.images) s += "<path d=\"" + path_of(c) + "\"/>\n";
        s += "</g>\n";
    }
    if (!d.arcs.empty()) {
        s += "<g id=\"arcs\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"" + f4(1.5 * w) + "\">\n";
        for (const auto& c : d.arcs) {
            s += "<path d=\"" + path_of(c) + "\"/>\n";
            if (c.degenerate()) continue;
            // arrow at the start of the traversal
            const Point a = c.front();
            const Point dir = c.point_at(std::min(1.0, 0.02)) - a;
            const double n = norm(dir);
            if (n == 0) continue;
            const Point t = dir / n, perp{-t.y, t.x};
            const double L = 6.0 * w;
            const Point tip = a + 2.0 * L * t;
            s += "<polygon class=\"arrow\" fill=\"#1f77b4\" stroke=\"none\" points=\"" + xy(tip) + " " +
                 xy(a + L * perp) + " " + xy(a - L * perp) + "\"/>\n";
        }
        s += "</g>\n";
    }
    if (!d.boxes.empty()) {
        s += "<g id=\"boxes\" fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"" + f4(w) + "\">\n";
        for (const Box& b : d.boxes) s += rect(b);
        s += "</g>\n";
    }
    if (!d.points.empty()) {
        s += "<g id=\"fixed_points\" fill=\"#2ca02c\" stroke=\"none\">\n";
        for (const Point& p : d.points)
            s += "<circle class=\"fixed-point\" cx=\"" + f4(p.x) + "\" cy=\"" + f4(-p.y) + "\" r=\"" + f4(4.0 * w) +
                 "\"/>\n";
        s += "</g>\n";
    }
    s += "</svg>\n";
    return s;
}

}  // namespace planefix
