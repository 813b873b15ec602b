#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "planefix/report.hpp"
#include "planefix/scenario.hpp"

namespace planefix {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes of the command-line contract.
enum ExitCode : int { EXIT_COMPLETE = 0, EXIT_VIOLATED = 2, EXIT_UNDECIDED = 3, EXIT_INPUT = 4, EXIT_INCONSISTENT = 5 };

/// An error raised inside a module, tagged with that module's name.
class RunError : public std::runtime_error {
public:
    RunError(std::string module, const std::string& msg)
        : std::runtime_error(module + ": " + msg), module_(std::move(module)) {}
    const std::string& module() const { return module_; }

private:
    std::string module_;
};

/// Geometry collected for rendering.
struct RenderData {
    std::vector<Polyline> domain;
    std::vector<Polyline> arcs;
    std::vector<Polyline> images;
    std::vector<Box> faces;  ///< cells of the shaded bounded face
    std::vector<Box> boxes;  ///< certified boxes
    std::vector<Point> points;
};

struct RunResult {
    Json report;
    int exit_code = EXIT_COMPLETE;
    RenderData render;
};

/// Dispatches the scenario's task; `task` overrides the scenario's own when not NONE.
RunResult run(const Scenario& s, Task task = Task::NONE);

}  // namespace planefix
