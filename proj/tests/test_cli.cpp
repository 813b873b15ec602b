#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

#include "planefix/run.hpp"
#include "planefix/scenario.hpp"
#include "planefix/svg.hpp"

using namespace planefix;

namespace {

std::string fixture(const std::string& name) { return std::string(PLANEFIX_FIXTURE_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CliRun {
    int code = -1;
    std::string out;
};

CliRun cli(const std::string& args) {
    CliRun r;
    const std::string cmd = std::string(PLANEFIX_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    std::array<char, 4096> buf{};
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
    const int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string write_temp(const std::string& name, const std::string& text) {
    const std::string path = "/tmp/planefix_test_" + name;
    std::ofstream(path) << text;
    return path;
}

const char* kCircleAngles = R"(# unit circle seen from the origin
[map f]
kind = scale_rot
scale = 1.2
angle = 0.5

[curve c]
closed = true
points = 1 0
points = 0 1
points = -1 0
points = 0 -1

[task]
kind = angles
curve = c
point = 0 0
)";

std::size_t count(const std::string& s, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
    return n;
}

Json without_timing(Json j) {
    j.erase("timing");
    return j;
}

}  // namespace

TEST_CASE("scenario text round-trips through serialize") {
    for (const char* name : {"qivt_cond1.scn", "qivt_cond2.scn", "qivt_cond1_mutant.scn", "qivt_cond2_mutant.scn"}) {
        const Scenario s = parse_scenario(slurp(fixture(name)));
        const std::string text = serialize_scenario(s);
        const Scenario t = parse_scenario(text);
        CHECK(t == s);
        CHECK(serialize_scenario(t) == text);
    }
    const Scenario a = parse_scenario(kCircleAngles);
    CHECK(parse_scenario(serialize_scenario(a)) == a);
    const Scenario b = builtin_scenario("4_5", {"n=3", "beta=1.9"});
    CHECK(parse_scenario(serialize_scenario(b)) == b);
}

TEST_CASE("builtin stanzas expand to their maps and geometry") {
    const Resolved s = resolve(parse_scenario("[builtin example_4_5 n=3 beta=1.9]\n[task]\nkind = certify\n"));
    REQUIRE(s.maps.count("f"));
    const Point p = s.maps.at("f")({1, 0});
    CHECK(norm(p) == doctest::Approx(std::pow(2.0, 0.25)));
    REQUIRE(s.curves.count("A"));
    CHECK(s.params.at("A").size() == 4);
    CHECK(s.regions.count("E"));
    const Resolved t = resolve(parse_scenario("[builtin example_1_2 n=3]\n[task]\nkind = certify\n"));
    const Point q = t.maps.at("f")({1, 0});
    CHECK(q.x == 2.0);
    CHECK(q.y == 0.0);
    CHECK(t.regions.count("E"));
}

TEST_CASE("malformed scenarios report the offending line") {
    const std::string missing_map = "[map a]\nkind = translate\noffset = 1 0\n\n[map b]\nkind = translate\noffset = 0 1\n\n"
                                    "[task]\nkind = check_qivt\n";
    try {
        (void)parse_scenario(missing_map);
        FAIL("no error raised");
    } catch (const ScenarioError& e) {
        CHECK(e.line() == 9);
        CHECK(std::string(e.what()).find("map") != std::string::npos);
    }
    try {
        (void)parse_scenario("[map a]\nkind = spline\n");
        FAIL("no error raised");
    } catch (const ScenarioError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS((void)parse_scenario("[map a]\nkind = compose\nfactors = a b\n[task]\nkind = angles\n"),
                    ScenarioError);
}

TEST_CASE("flat reports round-trip") {
    const RunResult r = run(parse_scenario(kCircleAngles));
    const std::string flat = to_flat_text(r.report);
    CHECK(parse_flat_text(flat) == r.report);
    CHECK(to_flat_text(parse_flat_text(flat)) == flat);
}

TEST_CASE("angles task on the unit circle winds once") {
    const RunResult r = run(parse_scenario(kCircleAngles));
    CHECK(r.exit_code == EXIT_COMPLETE);
    const Json& a = r.report.at("angles");
    CHECK(a.at("winding") == 1);
    CHECK(a.at("winding_residual").get<double>() < 1e-6);
    CHECK(a.at("shoelace_sign") == 1);
    CHECK(a.at("image_orientation") == "PRESERVING");
}

TEST_CASE("runs are deterministic apart from timing") {
    const Scenario s = parse_scenario(slurp(fixture("qivt_cond1.scn")));
    const RunResult a = run(s), b = run(s);
    CHECK(to_flat_text(without_timing(a.report)) == to_flat_text(without_timing(b.report)));
    CHECK(a.report.contains("timing"));
}

TEST_CASE("builtin runs: spiral certificate near the origin, period-n map has none") {
    const RunResult s = run(builtin_scenario("4_5", {"n=3", "beta=1.9"}), Task::CERTIFY);
    CHECK(s.exit_code == EXIT_COMPLETE);
    REQUIRE(s.report.at("certificates").size() == 1);
    const Json& c = s.report.at("certificates")[0];
    CHECK(std::hypot(c.at("approx")[0].get<double>(), c.at("approx")[1].get<double>()) <= 1e-9);
    const RunResult p = run(builtin_scenario("1_2", {"n=3"}), Task::CERTIFY);
    CHECK(p.exit_code == EXIT_COMPLETE);
    CHECK(p.report.at("certificates").empty());
}

TEST_CASE("exit codes of the command line") {
    CHECK(cli("check-qivt " + fixture("qivt_cond1.scn")).code == 0);
    CHECK(cli("check-qivt " + fixture("qivt_cond1_mutant.scn")).code == 2);
    CHECK(cli("check-qivt " + fixture("qivt_cond2_mutant.scn")).code == 2);
    CHECK(cli("angles /nonexistent/file.scn").code == 4);
    const std::string bad = write_temp("bad.scn", "[map a]\nkind = nope\n");
    CHECK(cli("certify " + bad).code == 4);
    CHECK(cli("example 1_2 n=3").code == 0);
    CHECK(cli("--eps-sep -1 angles " + write_temp("circle.scn", kCircleAngles)).code == 4);
    // a demanding margin leaves the separation clauses undecided
    CHECK(cli("--eps-sep 0.4 check-qivt " + fixture("qivt_cond1.scn")).code == 3);
}

TEST_CASE("command line report formats") {
    const CliRun flat = cli("angles " + write_temp("circle2.scn", kCircleAngles));
    CHECK(flat.code == 0);
    CHECK(flat.out.find("angles.winding = 1") != std::string::npos);
    const CliRun js = cli("--json-report - angles " + write_temp("circle3.scn", kCircleAngles));
    const auto brace = js.out.find('{');
    REQUIRE(brace != std::string::npos);
    const Json j = Json::parse(js.out.substr(brace));
    CHECK(j.at("angles").at("winding") == 1);
    const CliRun sc = cli("example 4_5 n=3 beta=1.9 --scenario");
    CHECK(sc.code == 0);
    CHECK(parse_scenario(sc.out) == builtin_scenario("4_5", {"n=3", "beta=1.9"}));
}

TEST_CASE("svg rendering") {
    RenderData empty;
    empty.domain.push_back(Polyline({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, true));
    const std::string e = render_svg(empty);
    CHECK(e.find("<svg") != std::string::npos);
    CHECK(e.find("id=\"domain\"") != std::string::npos);
    CHECK(e.find("class=\"fixed-point\"") == std::string::npos);
    CHECK(e.find("id=\"arcs\"") == std::string::npos);
    CHECK(render_svg(empty) == e);
    const RunResult s = run(builtin_scenario("4_5", {"n=3", "beta=1.9"}), Task::CERTIFY);
    const std::string doc = render_svg(s.render);
    CHECK(count(doc, "class=\"fixed-point\"") == 1);
    CHECK(doc.find("id=\"arcs\"") != std::string::npos);
    // four decimals on every coordinate
    const std::regex coord(R"(\d\.\d{5,})");
    CHECK_FALSE(std::regex_search(doc, coord));
    const RunResult q = run(parse_scenario(slurp(fixture("qivt_cond1.scn"))));
    const std::string qd = render_svg(q.render);
    CHECK(qd.find("id=\"faces\"") != std::string::npos);
    CHECK(qd.find("id=\"images\"") != std::string::npos);
    CHECK(qd.find("id=\"boxes\"") != std::string::npos);
    const std::string out = "/tmp/planefix_test_render.svg";
    CHECK(cli("render " + fixture("qivt_cond1.scn") + " -o " + out).code == 0);
    CHECK(slurp(out) == qd);
}
