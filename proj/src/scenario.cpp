#include "planefix/scenario.hpp"

#include <charconv>
#include <cstdio>
#include <set>
#include <sstream>

#include "planefix/builtins.hpp"

namespace planefix {

ScenarioError::ScenarioError(int line, int column, const std::string& msg)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

namespace {

const std::pair<Task, const char*> kTaskNames[] = {
    {Task::NONE, "none"},
    {Task::ANGLES, "angles"},
    {Task::CHECK_QIVT, "check_qivt"},
    {Task::OUTFLANK_VALIDATE, "outflank_validate"},
    {Task::OUTFLANK_CONSTRUCT, "outflank_construct"},
    {Task::CERTIFY, "certify"},
    {Task::RENDER, "render"},
};

struct Token {
    std::string text;
    int column = 1;
};

std::vector<Token> split(const std::string& s, std::size_t from, int col0) {
    std::vector<Token> out;
    std::size_t i = from;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        if (i >= s.size()) break;
        const std::size_t j = s.find_first_of(" \t", i);
        const std::size_t e = j == std::string::npos ? s.size() : j;
        out.push_back({s.substr(i, e - i), col0 + static_cast<int>(i)});
        i = e;
    }
    return out;
}

double number(const Token& t, int line) {
    double v = 0.0;
    const char* b = t.text.data();
    const char* e = b + t.text.size();
    if (!t.text.empty() && *b == '+') ++b;
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e || !std::isfinite(v))
        throw ScenarioError(line, t.column, "expected a finite decimal number, got '" + t.text + "'");
    return v;
}

long integer(const Token& t, int line) {
    long v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || p != t.text.data() + t.text.size())
        throw ScenarioError(line, t.column, "expected an integer, got '" + t.text + "'");
    return v;
}

struct Stanza {
    std::string section, name;
    int line = 0, column = 1;
    struct Entry {
        std::string key;
        std::vector<Token> values;
        int line = 0, column = 1;
    };
    std::vector<Entry> entries;
};

std::vector<Stanza> tokenize(const std::string& text) {
    std::vector<Stanza> out;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const std::size_t hash = raw.find('#');
        const std::string s = raw.substr(0, hash);
        const std::size_t first = s.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        const int col = static_cast<int>(first) + 1;
        if (s[first] == '[') {
            const std::size_t close = s.find(']', first);
            if (close == std::string::npos) throw ScenarioError(line, col, "unterminated section header");
            if (s.find_first_not_of(" \t", close + 1) != std::string::npos)
                throw ScenarioError(line, static_cast<int>(close) + 2, "text after section header");
            auto toks = split(s.substr(0, close), first + 1, 1);
            if (toks.empty()) throw ScenarioError(line, col, "empty section header");
            Stanza st;
            st.section = toks[0].text;
            st.line = line;
            st.column = col;
            std::size_t k = 1;
            if (k < toks.size() && toks[k].text.find('=') == std::string::npos) st.name = toks[k++].text;
            for (; k < toks.size(); ++k) {
                const std::size_t eq = toks[k].text.find('=');
                if (eq == std::string::npos || eq == 0)
                    throw ScenarioError(line, toks[k].column, "expected key=value in section header");
                Token v{toks[k].text.substr(eq + 1), toks[k].column + static_cast<int>(eq) + 1};
                st.entries.push_back({toks[k].text.substr(0, eq), {v}, line, toks[k].column});
            }
            out.push_back(std::move(st));
            continue;
        }
        if (out.empty()) throw ScenarioError(line, col, "key outside of any section");
        const std::size_t eq = s.find('=', first);
        if (eq == std::string::npos) throw ScenarioError(line, col, "expected 'key = value'");
        auto key = split(s.substr(0, eq), first, 1);
        if (key.size() != 1) throw ScenarioError(line, col, "malformed key");
        out.back().entries.push_back({key[0].text, split(s, eq + 1, 1), line, col});
    }
    return out;
}

void expect_count(const Stanza::Entry& e, std::size_t n) {
    if (e.values.size() != n)
        throw ScenarioError(e.line, e.column,
                            "'" + e.key + "' takes " + std::to_string(n) + " value(s), got " +
                                std::to_string(e.values.size()));
}

double num1(const Stanza::Entry& e) {
    expect_count(e, 1);
    return number(e.values[0], e.line);
}

Point point1(const Stanza::Entry& e) {
    expect_count(e, 2);
    return {number(e.values[0], e.line), number(e.values[1], e.line)};
}

Box box1(const Stanza::Entry& e) {
    expect_count(e, 4);
    Box b{number(e.values[0], e.line), number(e.values[1], e.line), number(e.values[2], e.line),
          number(e.values[3], e.line)};
    if (!(b.x0 < b.x1 && b.y0 < b.y1)) throw ScenarioError(e.line, e.column, "box needs x0 < x1 and y0 < y1");
    return b;
}

void append_points(const Stanza::Entry& e, std::vector<Point>& out) {
    if (e.values.size() % 2 != 0) throw ScenarioError(e.line, e.column, "'" + e.key + "' needs coordinate pairs");
    for (std::size_t i = 0; i < e.values.size(); i += 2)
        out.push_back({number(e.values[i], e.line), number(e.values[i + 1], e.line)});
}

std::string word1(const Stanza::Entry& e) {
    expect_count(e, 1);
    return e.values[0].text;
}

bool bool1(const Stanza::Entry& e) {
    const std::string w = word1(e);
    if (w == "true") return true;
    if (w == "false") return false;
    throw ScenarioError(e.line, e.values[0].column, "expected true or false");
}

[[noreturn]] void unknown_key(const Stanza::Entry& e, const std::string& section) {
    throw ScenarioError(e.line, e.column, "unknown key '" + e.key + "' in [" + section + "]");
}

MapDef parse_map(const Stanza& st) {
    MapDef m;
    m.name = st.name;
    bool has_kind = false;
    int kind_line = st.line, kind_col = st.column;
    for (const auto& e : st.entries) {
        if (e.key == "kind") {
            m.kind = word1(e);
            has_kind = true;
            kind_line = e.line;
            kind_col = e.values.at(0).column;
        } else if (e.key == "matrix") {
            expect_count(e, 4);
            m.m = {number(e.values[0], e.line), number(e.values[1], e.line), number(e.values[2], e.line),
                   number(e.values[3], e.line)};
        } else if (e.key == "offset") m.offset = point1(e);
        else if (e.key == "scale") m.scale = num1(e);
        else if (e.key == "angle") m.angle = num1(e);
        else if (e.key == "factors") {
            for (const auto& t : e.values) m.factors.push_back(t.text);
        } else if (e.key == "box") m.box = box1(e);
        else if (e.key == "nx") m.nx = integer(e.values.at(0), e.line);
        else if (e.key == "ny") m.ny = integer(e.values.at(0), e.line);
        else if (e.key == "disp") append_points(e, m.disp);
        else if (e.key == "n") m.n = static_cast<int>(num1(e));
        else if (e.key == "beta") m.beta = num1(e);
        else if (e.key == "domain") m.domain = box1(e);
        else unknown_key(e, "map");
    }
    static const std::set<std::string> kinds{"affine", "scale_rot", "translate", "compose",
                                             "grid_pl", "example_1_2", "example_4_5"};
    if (!has_kind) throw ScenarioError(st.line, st.column, "[map " + st.name + "] is missing 'kind'");
    if (!kinds.count(m.kind)) throw ScenarioError(kind_line, kind_col, "unknown map kind '" + m.kind + "'");
    if (m.kind == "grid_pl") {
        if (m.nx < 2 || m.ny < 2) throw ScenarioError(st.line, st.column, "grid_pl needs nx, ny >= 2");
        if (m.disp.size() != static_cast<std::size_t>(m.nx * m.ny))
            throw ScenarioError(st.line, st.column,
                                "grid_pl needs nx*ny = " + std::to_string(m.nx * m.ny) + " displacements, got " +
                                    std::to_string(m.disp.size()));
    }
    if (m.kind == "affine" && m.m.det() == 0.0) throw ScenarioError(st.line, st.column, "affine matrix is singular");
    if (m.kind == "compose" && m.factors.empty()) throw ScenarioError(st.line, st.column, "compose needs factors");
    return m;
}

CurveDef parse_curve(const Stanza& st, bool arc) {
    CurveDef c;
    c.name = st.name;
    for (const auto& e : st.entries) {
        if (e.key == "points") append_points(e, c.points);
        else if (e.key == "closed") c.closed = bool1(e);
        else if (e.key == "params" && arc) {
            for (const auto& t : e.values) c.params.push_back(number(t, e.line));
        } else unknown_key(e, st.section);
    }
    if (c.points.empty()) throw ScenarioError(st.line, st.column, "[" + st.section + "] needs points");
    if (arc && c.closed) throw ScenarioError(st.line, st.column, "an arc cannot be closed");
    try {
        Polyline p(c.points, c.closed);
        if (!is_simple(p)) throw ScenarioError(st.line, st.column, "curve '" + c.name + "' is not simple");
    } catch (const GeomError& e) {
        throw ScenarioError(st.line, st.column, e.what());
    }
    for (std::size_t i = 1; i < c.params.size(); ++i)
        if (!(c.params[i] > c.params[i - 1]))
            throw ScenarioError(st.line, st.column, "arc parameters must be strictly increasing");
    return c;
}

RegionDef parse_region(const Stanza& st) {
    RegionDef r;
    r.name = st.name;
    for (const auto& e : st.entries) {
        if (e.key == "kind") r.kind = word1(e);
        else if (e.key == "center") r.center = point1(e);
        else if (e.key == "radius") r.radius = num1(e);
        else if (e.key == "box") r.box = box1(e);
        else if (e.key == "curve") r.curve = word1(e);
        else unknown_key(e, "region");
    }
    if (r.kind != "circle" && r.kind != "box" && r.kind != "polygon")
        throw ScenarioError(st.line, st.column, "region kind must be circle, box or polygon");
    if (r.kind == "circle" && !(r.radius > 0)) throw ScenarioError(st.line, st.column, "circle needs radius > 0");
    return r;
}

BuiltinDef parse_builtin(const Stanza& st) {
    BuiltinDef b;
    b.name = st.name;
    if (b.name != "example_1_2" && b.name != "example_4_5")
        throw ScenarioError(st.line, st.column, "unknown builtin '" + b.name + "'");
    for (const auto& e : st.entries) {
        if (e.key == "n") b.n = static_cast<int>(integer(e.values.at(0), e.line));
        else if (e.key == "beta") b.beta = num1(e);
        else if (e.key == "dip") b.dip = num1(e);
        else if (e.key == "dtheta") b.dtheta = num1(e);
        else unknown_key(e, "builtin");
    }
    return b;
}

Tolerances parse_tolerances(const Stanza& st, Tolerances t) {
    for (const auto& e : st.entries) {
        if (e.key == "eps_sep") t.eps_sep = num1(e);
        else if (e.key == "h_sample") t.h_sample = num1(e);
        else if (e.key == "tol_fix") t.tol_fix = num1(e);
        else if (e.key == "tube_factor") t.tube_factor = num1(e);
        else if (e.key == "grid_pitch") t.grid_pitch = num1(e);
        else if (e.key == "seed_jitter") t.seed_jitter = static_cast<unsigned>(integer(e.values.at(0), e.line));
        else unknown_key(e, "tolerances");
    }
    try {
        t.validate();
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(st.line, st.column, e.what());
    }
    return t;
}

TaskDef parse_task(const Stanza& st) {
    TaskDef t;
    for (const auto& e : st.entries) {
        if (e.key == "kind") {
            try {
                t.kind = task_from_string(word1(e));
            } catch (const std::invalid_argument& ex) {
                throw ScenarioError(e.line, e.values[0].column, ex.what());
            }
        } else if (e.key == "map") t.map = word1(e);
        else if (e.key == "disc") t.disc = word1(e);
        else if (e.key == "arc") t.arc = word1(e);
        else if (e.key == "region") t.region = word1(e);
        else if (e.key == "curve") t.curve = word1(e);
        else if (e.key == "x") t.x = num1(e);
        else if (e.key == "y") t.y = num1(e);
        else if (e.key == "q") {
            for (const auto& v : e.values) t.q.push_back(number(v, e.line));
        } else if (e.key == "point") t.point = point1(e);
        else if (e.key == "periodic_point") t.periodic_point = point1(e);
        else if (e.key == "period") t.period = static_cast<int>(integer(e.values.at(0), e.line));
        else if (e.key == "u_radius") t.u_radius = num1(e);
        else unknown_key(e, "task");
    }
    return t;
}

std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string pt(Point p) { return g17(p.x) + " " + g17(p.y); }
std::string bx(const Box& b) { return g17(b.x0) + " " + g17(b.y0) + " " + g17(b.x1) + " " + g17(b.y1); }

/// Names each builtin contributes: maps, curves, regions.
struct Provided {
    std::vector<std::string> maps, curves, regions;
};
Provided provided_by(const BuiltinDef& b) {
    if (b.name == "example_4_5") return {{"f"}, {"A"}, {"E"}};
    return {{"f"}, {}, {"E"}};
}

}  // namespace

const char* to_string(Task t) {
    for (const auto& [k, s] : kTaskNames)
        if (k == t) return s;
    return "none";
}

Task task_from_string(const std::string& s) {
    for (const auto& [k, n] : kTaskNames)
        if (s == n) return k;
    throw std::invalid_argument("unknown task '" + s + "'");
}

Scenario parse_scenario(const std::string& text) {
    Scenario sc;
    std::set<std::string> map_names, curve_names, region_names;
    std::map<std::string, int> arc_lines, def_lines;
    int task_line = 0, task_col = 1;
    bool have_tol = false, have_task = false;
    auto claim = [](std::set<std::string>& names, const std::string& n, int line, int col) {
        if (n.empty()) throw ScenarioError(line, col, "section needs a name");
        if (!names.insert(n).second) throw ScenarioError(line, col, "duplicate name '" + n + "'");
    };
    std::vector<Stanza> stanzas = tokenize(text);
    for (const Stanza& st : stanzas) {
        if (st.section == "builtin") {
            sc.builtins.push_back(parse_builtin(st));
            const Provided p = provided_by(sc.builtins.back());
            for (const auto& n : p.maps) claim(map_names, n, st.line, st.column);
            for (const auto& n : p.curves) claim(curve_names, n, st.line, st.column);
            for (const auto& n : p.regions) claim(region_names, n, st.line, st.column);
        } else if (st.section == "map") {
            claim(map_names, st.name, st.line, st.column);
            sc.maps.push_back(parse_map(st));
            def_lines["map " + st.name] = st.line;
        } else if (st.section == "curve" || st.section == "arc") {
            claim(curve_names, st.name, st.line, st.column);
            sc.curves.push_back(parse_curve(st, st.section == "arc"));
            if (st.section == "arc") arc_lines[st.name] = st.line;
        } else if (st.section == "region") {
            claim(region_names, st.name, st.line, st.column);
            sc.regions.push_back(parse_region(st));
            def_lines["region " + st.name] = st.line;
        } else if (st.section == "tolerances") {
            if (have_tol) throw ScenarioError(st.line, st.column, "duplicate [tolerances]");
            have_tol = true;
            sc.tol = parse_tolerances(st, sc.tol);
        } else if (st.section == "task") {
            if (have_task) throw ScenarioError(st.line, st.column, "duplicate [task]");
            have_task = true;
            task_line = st.line;
            task_col = st.column;
            sc.task = parse_task(st);
        } else {
            throw ScenarioError(st.line, st.column, "unknown section '" + st.section + "'");
        }
    }
    for (std::size_t i = 0; i < sc.maps.size(); ++i)
        for (const auto& f : sc.maps[i].factors)
            if (!map_names.count(f))
                throw ScenarioError(def_lines["map " + sc.maps[i].name], 1, "map '" + sc.maps[i].name + "' references unknown map '" + f + "'");
    for (const auto& r : sc.regions)
        if (r.kind == "polygon" && !curve_names.count(r.curve))
            throw ScenarioError(def_lines["region " + r.name], 1, "region '" + r.name + "' references unknown curve '" + r.curve + "'");

    TaskDef& t = sc.task;
    const bool builtin = !sc.builtins.empty();
    if (t.map.empty()) {
        if (map_names.count("f")) t.map = "f";
        else if (map_names.size() == 1) t.map = *map_names.begin();
    }
    if (builtin && t.arc.empty() && t.disc.empty() && curve_names.count("A") && !t.periodic_point) t.arc = "A";
    if (builtin && t.region.empty() && region_names.count("E")) t.region = "E";

    auto need = [&](const std::string& name, const std::set<std::string>& pool, const char* what) {
        if (!name.empty() && !pool.count(name))
            throw ScenarioError(task_line, task_col, std::string("task references unknown ") + what + " '" + name + "'");
    };
    if (t.map.empty() && (have_task || builtin)) throw ScenarioError(task_line, task_col, "task is missing 'map'");
    need(t.map, map_names, "map");
    need(t.disc, curve_names, "curve");
    need(t.arc, curve_names, "arc");
    need(t.curve, curve_names, "curve");
    need(t.region, region_names, "region");
    if (!t.disc.empty() && (!t.x || !t.y)) throw ScenarioError(task_line, task_col, "a disc task needs x and y");
    if (!t.arc.empty() && arc_lines.count(t.arc)) {
        for (const auto& c : sc.curves)
            if (c.name == t.arc && c.params.size() < 2 && t.disc.empty())
                throw ScenarioError(arc_lines[t.arc], 1, "arc '" + t.arc + "' needs at least two params");
    }
    if (t.periodic_point && t.period < 1) throw ScenarioError(task_line, task_col, "periodic_point needs period >= 1");
    return sc;
}

std::string serialize_scenario(const Scenario& s) {
    std::ostringstream o;
    for (const auto& b : s.builtins) {
        o << "[builtin " << b.name << "]\n";
        o << "n = " << b.n << "\n";
        if (b.name == "example_4_5") {
            o << "beta = " << g17(b.beta) << "\n";
            if (b.dip) o << "dip = " << g17(*b.dip) << "\n";
            o << "dtheta = " << g17(b.dtheta) << "\n";
        }
        o << "\n";
    }
    for (const auto& m : s.maps) {
        o << "[map " << m.name << "]\nkind = " << m.kind << "\n";
        if (m.kind == "affine")
            o << "matrix = " << g17(m.m.a) << " " << g17(m.m.b) << " " << g17(m.m.c) << " " << g17(m.m.d)
              << "\noffset = " << pt(m.offset) << "\n";
        else if (m.kind == "scale_rot") o << "scale = " << g17(m.scale) << "\nangle = " << g17(m.angle) << "\n";
        else if (m.kind == "translate") o << "offset = " << pt(m.offset) << "\n";
        else if (m.kind == "compose") {
            o << "factors =";
            for (const auto& f : m.factors) o << " " << f;
            o << "\n";
        } else if (m.kind == "grid_pl") {
            o << "box = " << bx(m.box) << "\nnx = " << m.nx << "\nny = " << m.ny << "\n";
            for (long j = 0; j < m.ny; ++j) {
                o << "disp =";
                for (long i = 0; i < m.nx; ++i) o << " " << pt(m.disp[static_cast<std::size_t>(j * m.nx + i)]);
                o << "\n";
            }
        } else if (m.kind == "example_1_2") o << "n = " << m.n << "\n";
        else if (m.kind == "example_4_5") o << "n = " << m.n << "\nbeta = " << g17(m.beta) << "\n";
        if (m.domain) o << "domain = " << bx(*m.domain) << "\n";
        o << "\n";
    }
    for (const auto& c : s.curves) {
        const bool arc = !c.params.empty();
        o << (arc ? "[arc " : "[curve ") << c.name << "]\n";
        if (!arc) o << "closed = " << (c.closed ? "true" : "false") << "\n";
        for (const Point& p : c.points) o << "points = " << pt(p) << "\n";
        if (arc) {
            o << "params =";
            for (double t : c.params) o << " " << g17(t);
            o << "\n";
        }
        o << "\n";
    }
    for (const auto& r : s.regions) {
        o << "[region " << r.name << "]\nkind = " << r.kind << "\n";
        if (r.kind == "circle") o << "center = " << pt(r.center) << "\nradius = " << g17(r.radius) << "\n";
        else if (r.kind == "box") o << "box = " << bx(r.box) << "\n";
        else o << "curve = " << r.curve << "\n";
        o << "\n";
    }
    const Tolerances& t = s.tol;
    o << "[tolerances]\neps_sep = " << g17(t.eps_sep) << "\nh_sample = " << g17(t.h_sample)
      << "\ntol_fix = " << g17(t.tol_fix) << "\ntube_factor = " << g17(t.tube_factor)
      << "\ngrid_pitch = " << g17(t.grid_pitch) << "\nseed_jitter = " << t.seed_jitter << "\n\n";
    const TaskDef& k = s.task;
    o << "[task]\nkind = " << to_string(k.kind) << "\n";
    auto word = [&](const char* key, const std::string& v) {
        if (!v.empty()) o << key << " = " << v << "\n";
    };
    word("map", k.map);
    word("disc", k.disc);
    word("arc", k.arc);
    word("region", k.region);
    word("curve", k.curve);
    if (k.x) o << "x = " << g17(*k.x) << "\n";
    if (k.y) o << "y = " << g17(*k.y) << "\n";
    if (!k.q.empty()) {
        o << "q =";
        for (double q : k.q) o << " " << g17(q);
        o << "\n";
    }
    if (k.point) o << "point = " << pt(*k.point) << "\n";
    if (k.periodic_point) o << "periodic_point = " << pt(*k.periodic_point) << "\nperiod = " << k.period << "\n";
    if (k.u_radius > 0) o << "u_radius = " << g17(k.u_radius) << "\n";
    return o.str();
}

namespace {
bool same(Point a, Point b) { return a == b; }
bool same(const Box& a, const Box& b) { return a.x0 == b.x0 && a.y0 == b.y0 && a.x1 == b.x1 && a.y1 == b.y1; }
bool same(const std::vector<Point>& a, const std::vector<Point>& b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](Point p, Point q) { return p == q; });
}
}  // namespace

bool operator==(const Scenario& a, const Scenario& b) {
    auto maps_eq = [](const MapDef& x, const MapDef& y) {
        return x.name == y.name && x.kind == y.kind && x.m.a == y.m.a && x.m.b == y.m.b && x.m.c == y.m.c &&
               x.m.d == y.m.d && same(x.offset, y.offset) && x.scale == y.scale && x.angle == y.angle &&
               x.factors == y.factors && same(x.box, y.box) && x.nx == y.nx && x.ny == y.ny && same(x.disp, y.disp) &&
               x.n == y.n && x.beta == y.beta && x.domain.has_value() == y.domain.has_value() &&
               (!x.domain || same(*x.domain, *y.domain));
    };
    auto curves_eq = [](const CurveDef& x, const CurveDef& y) {
        return x.name == y.name && same(x.points, y.points) && x.closed == y.closed && x.params == y.params;
    };
    auto regions_eq = [](const RegionDef& x, const RegionDef& y) {
        return x.name == y.name && x.kind == y.kind && same(x.center, y.center) && x.radius == y.radius &&
               same(x.box, y.box) && x.curve == y.curve;
    };
    auto builtins_eq = [](const BuiltinDef& x, const BuiltinDef& y) {
        return x.name == y.name && x.n == y.n && x.beta == y.beta && x.dip == y.dip && x.dtheta == y.dtheta;
    };
    const Tolerances &s = a.tol, &t = b.tol;
    const TaskDef &p = a.task, &q = b.task;
    auto opt_pt = [](const std::optional<Point>& x, const std::optional<Point>& y) {
        return x.has_value() == y.has_value() && (!x || *x == *y);
    };
    return std::equal(a.maps.begin(), a.maps.end(), b.maps.begin(), b.maps.end(), maps_eq) &&
           std::equal(a.curves.begin(), a.curves.end(), b.curves.begin(), b.curves.end(), curves_eq) &&
           std::equal(a.regions.begin(), a.regions.end(), b.regions.begin(), b.regions.end(), regions_eq) &&
           std::equal(a.builtins.begin(), a.builtins.end(), b.builtins.begin(), b.builtins.end(), builtins_eq) &&
           s.eps_sep == t.eps_sep && s.h_sample == t.h_sample && s.tol_fix == t.tol_fix &&
           s.tube_factor == t.tube_factor && s.grid_pitch == t.grid_pitch && s.seed_jitter == t.seed_jitter &&
           p.kind == q.kind && p.map == q.map && p.disc == q.disc && p.arc == q.arc && p.region == q.region &&
           p.curve == q.curve && p.x == q.x && p.y == q.y && p.q == q.q && opt_pt(p.point, q.point) &&
           opt_pt(p.periodic_point, q.periodic_point) && p.period == q.period && p.u_radius == q.u_radius;
}

Scenario builtin_scenario(const std::string& which, const std::vector<std::string>& params) {
    std::string header = "[builtin example_" + which;
    for (const auto& p : params) header += " " + p;
    return parse_scenario(header + "]\n");
}

namespace {

MapExpr build_map(const std::string& name, const std::map<std::string, const MapDef*>& defs,
                  std::map<std::string, MapExpr>& done, std::set<std::string>& active) {
    if (auto it = done.find(name); it != done.end()) return it->second;
    if (!active.insert(name).second) throw ScenarioError(0, 1, "map '" + name + "' is defined in terms of itself");
    const MapDef& d = *defs.at(name);
    MapExpr f;
    if (d.kind == "affine") f = MapExpr::affine(d.m, d.offset);
    else if (d.kind == "scale_rot") f = MapExpr::complex_scale_rot(d.scale, d.angle);
    else if (d.kind == "translate") f = MapExpr::translate(d.offset);
    else if (d.kind == "compose") {
        std::vector<MapExpr> fs;
        for (const auto& n : d.factors) fs.push_back(build_map(n, defs, done, active));
        f = MapExpr::compose(std::move(fs));
    } else if (d.kind == "grid_pl") {
        GridPL g;
        g.box = d.box;
        g.nx = d.nx;
        g.ny = d.ny;
        g.disp = d.disp;
        f = MapExpr::grid_pl(std::move(g));
    } else if (d.kind == "example_1_2") f = MapExpr::period_n(d.n);
    else f = MapExpr::spiral(d.n, d.beta);
    if (d.domain) f = f.with_domain(*d.domain);
    active.erase(name);
    done[name] = f;
    return f;
}

}  // namespace

Resolved resolve(const Scenario& s) {
    Resolved r;
    r.tol = s.tol;
    r.task = s.task;
    for (const auto& b : s.builtins) {
        try {
            if (b.name == "example_4_5") {
                const SpiralExample ex = example_4_5(b.n, b.beta, b.dip, b.dtheta);
                r.maps["f"] = ex.f;
                r.curves["A"] = ex.arc.A;
                r.params["A"] = ex.arc.orbit_params;
                r.regions.emplace("E", ex.E);
            } else {
                const PeriodExample ex = example_1_2(b.n);
                r.maps["f"] = ex.f;
                r.regions.emplace("E", Region::box(ex.box));
            }
        } catch (const std::invalid_argument& e) {
            throw ScenarioError(0, 1, std::string("builtin ") + b.name + ": " + e.what());
        }
    }
    std::map<std::string, const MapDef*> defs;
    for (const auto& m : s.maps) defs[m.name] = &m;
    std::set<std::string> active;
    try {
        for (const auto& m : s.maps) build_map(m.name, defs, r.maps, active);
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(0, 1, e.what());
    }
    for (const auto& c : s.curves) {
        r.curves[c.name] = Polyline(c.points, c.closed);
        if (!c.params.empty()) r.params[c.name] = c.params;
    }
    for (const auto& g : s.regions) {
        if (g.kind == "circle") r.regions.emplace(g.name, Region::circle(g.center, g.radius));
        else if (g.kind == "box") r.regions.emplace(g.name, Region::box(g.box));
        else {
            const Polyline& p = r.curves.at(g.curve);
            if (!p.closed()) throw ScenarioError(0, 1, "region '" + g.name + "' needs a closed curve");
            r.regions.emplace(g.name, Region::polygon(p));
        }
    }
    return r;
}

}  // namespace planefix
