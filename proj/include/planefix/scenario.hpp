#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "planefix/maps.hpp"
#include "planefix/tolerances.hpp"

namespace planefix {

class ScenarioError : public std::runtime_error {
public:
    ScenarioError(int line, int column, const std::string& msg);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_, column_;
};

enum class Task { NONE, ANGLES, CHECK_QIVT, OUTFLANK_VALIDATE, OUTFLANK_CONSTRUCT, CERTIFY, RENDER };
const char* to_string(Task t);
Task task_from_string(const std::string& s);

struct MapDef {
    std::string name;
    std::string kind;  ///< affine, scale_rot, translate, compose, grid_pl, example_1_2, example_4_5
    Mat2 m{};
    Point offset{};
    double scale = 1.0, angle = 0.0;
    std::vector<std::string> factors;
    Box box{};
    long nx = 2, ny = 2;
    std::vector<Point> disp;
    int n = 3;
    double beta = 1.9;
    std::optional<Box> domain;
};

struct CurveDef {
    std::string name;
    std::vector<Point> points;
    bool closed = false;
    std::vector<double> params;  ///< marked parameters, for arcs
};

struct RegionDef {
    std::string name;
    std::string kind;  ///< circle, box, polygon
    Point center{};
    double radius = 0.0;
    Box box{};
    std::string curve;
};

struct BuiltinDef {
    std::string name;  ///< example_1_2 or example_4_5
    int n = 3;
    double beta = 1.9;
    std::optional<double> dip;
    double dtheta = 5e-4;
};

struct TaskDef {
    Task kind = Task::NONE;
    std::string map, disc, arc, region, curve;
    std::optional<double> x, y;
    std::vector<double> q;
    std::optional<Point> point;  ///< base point for angle queries
    std::optional<Point> periodic_point;
    int period = 0;
    double u_radius = 0.0;
};

struct Scenario {
    std::vector<BuiltinDef> builtins;
    std::vector<MapDef> maps;
    std::vector<CurveDef> curves;
    std::vector<RegionDef> regions;
    Tolerances tol;
    TaskDef task;
};

/// Parses the line-oriented stanza format; errors carry line and column.
Scenario parse_scenario(const std::string& text);
/// Canonical text; parse_scenario(serialize_scenario(s)) reproduces s.
std::string serialize_scenario(const Scenario& s);
bool operator==(const Scenario& a, const Scenario& b);

/// Builtin stanza for the CLI `example` command, e.g. {"n=3", "beta=1.9"}.
Scenario builtin_scenario(const std::string& which, const std::vector<std::string>& params);

/// Scenario with builtins expanded and every name resolved to geometry.
struct Resolved {
    std::map<std::string, MapExpr> maps;
    std::map<std::string, Polyline> curves;
    std::map<std::string, std::vector<double>> params;
    std::map<std::string, Region> regions;
    Tolerances tol;
    TaskDef task;
};

/// Throws ScenarioError (line 0) on dangling references or invalid tolerances.
Resolved resolve(const Scenario& s);

}  // namespace planefix
