#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "planefix/run.hpp"
#include "planefix/svg.hpp"

using namespace planefix;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct Overrides {
    std::optional<double> eps_sep, tol_fix, grid_pitch;
    std::optional<unsigned> seed_jitter;

    void apply(Tolerances& t) const {
        if (eps_sep) t.eps_sep = *eps_sep;
        if (tol_fix) t.tol_fix = *tol_fix;
        if (grid_pitch) t.grid_pitch = *grid_pitch;
        if (seed_jitter) t.seed_jitter = *seed_jitter;
        t.validate();
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fixed-point certification for plane maps"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    Overrides ov;
    std::string json_path;
    app.add_option("--eps-sep", ov.eps_sep, "separation margin");
    app.add_option("--tol-fix", ov.tol_fix, "fixed-point box diameter");
    app.add_option("--grid-pitch", ov.grid_pitch, "decomposition grid pitch");
    app.add_option("--seed-jitter", ov.seed_jitter, "seed for the subdivision jitter");
    app.add_option("--json-report", json_path, "also write the report as JSON to this path ('-' for stdout)");

    std::string file, svg_out, which;
    std::vector<std::string> params;
    bool print_scenario = false;
    struct Cmd {
        const char* name;
        Task task;
        const char* help;
    };
    const Cmd cmds[] = {{"check-qivt", Task::CHECK_QIVT, "verify the quasi-intermediate-value hypotheses"},
                        {"outflank", Task::OUTFLANK_VALIDATE, "validate or construct an outflanking arc"},
                        {"certify", Task::CERTIFY, "run the full certification pipeline"},
                        {"angles", Task::ANGLES, "winding and orientation queries"}};
    std::map<CLI::App*, Task> tasks;
    for (const Cmd& c : cmds) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("file", file, "scenario file")->required();
        tasks[sub] = c.task;
    }
    CLI::App* render = app.add_subcommand("render", "run the scenario and draw it as SVG");
    render->add_option("file", file, "scenario file")->required();
    render->add_option("-o,--output", svg_out, "SVG output path")->required();
    CLI::App* example = app.add_subcommand("example", "run a builtin example");
    example->add_option("which", which, "1_2 or 4_5")->required()->check(CLI::IsMember({"1_2", "4_5"}));
    example->add_option("params", params, "key=value parameters such as n=3 beta=1.9");
    example->add_flag("--scenario", print_scenario, "print the scenario text instead of running it");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return EXIT_INPUT;
    }

    try {
        Scenario sc;
        Task task = Task::NONE;
        if (example->parsed()) {
            sc = builtin_scenario(which, params);
            task = Task::CERTIFY;
        } else {
            sc = parse_scenario(read_file(file));
            for (const auto& [sub, t] : tasks)
                if (sub->parsed()) task = t;
        }
        ov.apply(sc.tol);
        if (print_scenario) {
            std::cout << serialize_scenario(sc);
            return EXIT_COMPLETE;
        }
        const RunResult r = run(sc, task);
        std::cout << to_flat_text(r.report);
        if (!json_path.empty()) {
            if (json_path == "-") std::cout << r.report.dump(2) << "\n";
            else std::ofstream(json_path) << r.report.dump(2) << "\n";
        }
        if (render->parsed()) {
            std::ofstream out(svg_out);
            if (!out) throw std::runtime_error("cannot write '" + svg_out + "'");
            out << render_svg(r.render);
        }
        return r.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_INPUT;
    }
}
