#include "planefix/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace planefix {

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json to_json(Point p) { return Json::array({num(p.x), num(p.y)}); }

Json to_json(const Box& b) { return Json::array({num(b.x0), num(b.y0), num(b.x1), num(b.y1)}); }

Json to_json(const TriState& t) {
    Json j;
    j["verdict"] = to_string(t.verdict);
    j["margin"] = num(t.margin);
    j["resolution"] = num(t.resolution);
    Json w = Json::array();
    for (const Point& p : t.witness) w.push_back(to_json(p));
    j["witness"] = w;
    j["note"] = t.note;
    return j;
}

Json to_json(const FixedPointCertificate& c) {
    Json j;
    j["box"] = to_json(c.box);
    j["boundary_degree"] = c.boundary_degree;
    j["approx"] = to_json(c.approx);
    j["residual"] = num(c.residual);
    return j;
}

namespace {

std::string scalar(const Json& v) {
    if (v.is_number_float()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
        std::string s = buf;
        if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
        return s;
    }
    if (v.is_array()) return "[]";
    if (v.is_object()) return "{}";
    return v.dump();
}

void flatten(const Json& v, const std::string& path, std::string& out) {
    if (v.is_object() && !v.empty()) {
        for (auto it = v.begin(); it != v.end(); ++it)
            flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
    } else if (v.is_array() && !v.empty()) {
        for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], path + "[" + std::to_string(i) + "]", out);
    } else {
        out += path + " = " + scalar(v) + "\n";
    }
}

}  // namespace

std::string to_flat_text(const Json& report) {
    std::string out;
    flatten(report, "", out);
    return out;
}

Json parse_flat_text(const std::string& text) {
    Json root = Json::object();
    std::istringstream in(text);
    std::string line;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        if (line.empty()) continue;
        const std::size_t eq = line.find(" = ");
        if (eq == std::string::npos) throw std::runtime_error("report line " + std::to_string(ln) + ": missing ' = '");
        const std::string path = line.substr(0, eq);
        const Json value = Json::parse(line.substr(eq + 3));
        Json* cur = &root;
        std::size_t i = 0;
        while (i < path.size()) {
            if (path[i] == '[') {
                const std::size_t close = path.find(']', i);
                const std::size_t idx = std::stoul(path.substr(i + 1, close - i - 1));
                if (cur->is_null()) *cur = Json::array();
                while (cur->size() <= idx) cur->push_back(nullptr);
                cur = &(*cur)[idx];
                i = close + 1;
            } else {
                if (path[i] == '.') ++i;
                const std::size_t stop = path.find_first_of(".[", i);
                const std::string key = path.substr(i, stop == std::string::npos ? std::string::npos : stop - i);
                if (cur->is_null()) *cur = Json::object();
                cur = &(*cur)[key];
                i = stop == std::string::npos ? path.size() : stop;
            }
        }
        *cur = value;
    }
    return root;
}

}  // namespace planefix
