#include "planefix/run.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include "planefix/angles.hpp"
#include "planefix/outflank.hpp"
#include "planefix/qivt.hpp"

namespace planefix {

namespace {

Polyline region_outline(const Region& r) {
    switch (r.kind()) {
        case Region::Kind::CIRCLE: {
            std::vector<Point> v;
            for (int k = 0; k < 256; ++k) {
                const double a = 2.0 * std::numbers::pi * k / 256.0;
                v.push_back(r.center() + r.radius() * Point{std::cos(a), std::sin(a)});
            }
            return Polyline(v, true);
        }
        case Region::Kind::BOX: {
            const Box& b = r.box_value();
            return Polyline({{b.x0, b.y0}, {b.x1, b.y0}, {b.x1, b.y1}, {b.x0, b.y1}}, true);
        }
        default: return r.boundary();
    }
}

/// Cells of face `face`, merged into horizontal runs.
std::vector<Box> face_cells(const ComplementDecomposition& d, int face) {
    std::vector<Box> out;
    for (long j = 0; j < d.ny; ++j) {
        long i = 0;
        while (i < d.nx) {
            if (d.label[static_cast<std::size_t>(j * d.nx + i)] != face) {
                ++i;
                continue;
            }
            long e = i;
            while (e < d.nx && d.label[static_cast<std::size_t>(j * d.nx + e)] == face) ++e;
            out.push_back({d.origin.x + i * d.pitch, d.origin.y + j * d.pitch, d.origin.x + e * d.pitch,
                           d.origin.y + (j + 1) * d.pitch});
            i = e;
        }
    }
    return out;
}

Json tolerances_json(const Tolerances& t) {
    Json j;
    j["eps_sep"] = t.eps_sep;
    j["h_sample"] = t.h_sample;
    j["tol_fix"] = t.tol_fix;
    j["tube_factor"] = t.tube_factor;
    j["grid_pitch"] = t.grid_pitch;
    j["seed_jitter"] = t.seed_jitter;
    return j;
}

Json locate_json(const LocateResult& l) {
    Json j;
    j["boxes_processed"] = l.boxes_processed;
    Json u = Json::array();
    for (const Box& b : l.undecided) u.push_back(to_json(b));
    j["undecided"] = u;
    return j;
}

int exit_for(Verdict v) {
    switch (v) {
        case Verdict::SATISFIED: return EXIT_COMPLETE;
        case Verdict::VIOLATED: return EXIT_VIOLATED;
        default: return EXIT_UNDECIDED;
    }
}

const char* status_for(int code) {
    switch (code) {
        case EXIT_COMPLETE: return "COMPLETE";
        case EXIT_VIOLATED: return "VIOLATED";
        case EXIT_UNDECIDED: return "UNDECIDED";
        case EXIT_INCONSISTENT: return "INCONSISTENT";
        default: return "INPUT_ERROR";
    }
}

template <class F>
auto in_module(const char* module, F&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const RunError&) {
        throw;
    } catch (const ScenarioError&) {
        throw;
    } catch (const std::exception& e) {
        throw RunError(module, e.what());
    }
}

class Runner {
public:
    Runner(const Scenario& s, Task task) : r_(resolve(s)), task_(task == Task::NONE ? s.task.kind : task) {
        if (task_ == Task::NONE || task_ == Task::RENDER) task_ = Task::CERTIFY;
        if (task_ == Task::OUTFLANK_VALIDATE || task_ == Task::OUTFLANK_CONSTRUCT)
            task_ = r_.task.periodic_point ? Task::OUTFLANK_CONSTRUCT : Task::OUTFLANK_VALIDATE;
    }

    RunResult go() {
        const auto t0 = std::chrono::steady_clock::now();
        rep_["tool"] = {{"name", "planefix"}, {"version", kVersion}};
        rep_["task"] = to_string(task_);
        rep_["tolerances"] = tolerances_json(r_.tol);
        for (const auto& [name, reg] : r_.regions)
            if (name == r_.task.region) out_.render.domain.push_back(region_outline(reg));
        const TaskDef& t = r_.task;
        switch (task_) {
            case Task::ANGLES: angles(); break;
            case Task::CHECK_QIVT: qivt(); break;
            case Task::OUTFLANK_VALIDATE: validate(); break;
            case Task::OUTFLANK_CONSTRUCT: construct(false); break;
            default:
                if (!t.disc.empty()) qivt();
                else if (!t.arc.empty()) certify_arc();
                else if (t.periodic_point) construct(true);
                else locate_region();
                break;
        }
        rep_["status"] = status_.empty() ? status_for(code_) : status_;
        rep_["exit_code"] = code_;
        rep_["timing"] = {{"elapsed_s", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
        out_.report = rep_;
        out_.exit_code = code_;
        return out_;
    }

private:
    Resolved r_;
    Task task_;
    Json rep_;
    RunResult out_;
    int code_ = EXIT_COMPLETE;
    std::string status_;

    const MapExpr& map() const {
        auto it = r_.maps.find(r_.task.map);
        if (it == r_.maps.end()) throw RunError("cli", "the task names no map");
        return it->second;
    }
    const Polyline& curve(const std::string& name, const char* role) const {
        auto it = r_.curves.find(name);
        if (it == r_.curves.end()) throw RunError("cli", std::string("the task names no ") + role);
        return it->second;
    }
    const Region& region() const {
        auto it = r_.regions.find(r_.task.region);
        if (it == r_.regions.end()) throw RunError("cli", "the task names no region");
        return it->second;
    }

    void angles() {
        const Polyline& c = curve(r_.task.curve, "curve");
        const Point v = r_.task.point.value_or(Point{0.0, 0.0});
        Json j;
        j["point"] = to_json(v);
        in_module("angles", [&] {
            const double eps = 1e-12;
            const double rot = rotational_angle(c, v, eps);
            j["rotational_angle"] = rot;
            if (c.closed()) {
                const DirectedCircle dc{c, 0, +1};
                const int w = winding_number(dc, v, eps);
                j["winding"] = w;
                j["winding_residual"] = std::abs(rot / (2.0 * std::numbers::pi) - w);
                j["overall_orientation"] = overall_orientation(dc) > 0 ? "anticlockwise" : "clockwise";
                j["shoelace_sign"] = shoelace_sign(dc);
                j["side"] = to_string(side_of_directed_circle(dc, v));
                if (!r_.task.map.empty()) {
                    const MapExpr& f = map();
                    const ImagePolyline img = image_polyline(f, c, r_.tol.h_sample);
                    if (img.curve.closed() && is_simple(img.curve)) {
                        const Point in = interior_point(dc);
                        j["image_orientation"] =
                            to_string(orientation_of_embedding(dc, DirectedCircle{img.curve, 0, +1}, in, f(in)));
                    } else {
                        j["image_orientation"] = "UNDECIDED";
                    }
                    out_.render.images.push_back(img.curve);
                }
            }
        });
        out_.render.arcs.push_back(c);
        rep_["angles"] = j;
    }

    QivtInstance qivt_instance() const {
        QivtInstance in;
        in.f = map();
        in.X = curve(r_.task.disc, "disc");
        in.A = curve(r_.task.arc, "arc");
        in.x = *r_.task.x;
        in.y = *r_.task.y;
        in.tol = r_.tol;
        in.q_candidates = r_.task.q;
        return in;
    }

    void qivt() {
        if (r_.task.disc.empty()) throw RunError("cli", "check_qivt needs a disc");
        const QivtInstance in = qivt_instance();
        QivtDerived d;
        const HypothesisReport h = in_module("qivt", [&] { return certify_qivt(in, &d); });
        Json c;
        c["on_arc"] = to_json(h.on_arc);
        c["sign"] = to_json(h.sign);
        c["containment"] = to_json(h.containment);
        c["disjoint"] = to_json(h.disjoint);
        c["preimage"] = to_json(h.preimage);
        c["uq"] = to_json(h.uq);
        for (int k = 0; k < 5; ++k) c["condition_" + std::to_string(k + 1)] = to_json(h.conditions[k]);
        rep_["clauses"] = c;
        Json q;
        q["u"] = to_json(d.u);
        q["v"] = to_json(d.v);
        q["condition"] = h.condition;
        q["W_face"] = h.W.face;
        q["W_radius"] = num(h.W.radius);
        q["q_param"] = num(h.W.q);
        q["overall"] = to_string(h.overall);
        q["inconsistent"] = h.inconsistent;
        q["note"] = h.note;
        q["uq_caveat"] = "neighbourhood clause checked on sampled half discs, SATISFIED at resolution only";
        rep_["qivt"] = q;
        certificates(h.certificate);
        rep_["locate"] = locate_json(h.located);
        out_.render.domain.push_back(in.X);
        out_.render.arcs.push_back(in.A);
        if (!d.K.curve.empty()) out_.render.images.push_back(d.K.curve);
        if (d.dec && h.W.face >= 0) out_.render.faces = face_cells(*d.dec, h.W.face);
        code_ = h.inconsistent ? EXIT_INCONSISTENT : exit_for(h.overall);
    }

    void certificates(const std::optional<FixedPointCertificate>& c) {
        Json a = Json::array();
        if (c) {
            a.push_back(to_json(*c));
            out_.render.boxes.push_back(c->box);
            out_.render.points.push_back(c->approx);
        }
        rep_["certificates"] = a;
    }

    StepArc step_arc() const {
        StepArc sa;
        sa.A = curve(r_.task.arc, "arc");
        sa.f = map();
        auto it = r_.params.find(r_.task.arc);
        if (it == r_.params.end() || it->second.size() < 2) throw RunError("cli", "the arc has no orbit parameters");
        sa.orbit_params = it->second;
        return sa;
    }

    static Json certificate_json(const OutflankCertificate& c) {
        Json j;
        j["n"] = c.base.n();
        j["y"] = c.y;
        j["y_point"] = to_json(c.y_point);
        j["v"] = to_json(c.v);
        j["v_param"] = c.v_param;
        j["contact"] = num(c.contact);
        j["injectivity"] = to_json(c.injectivity);
        j["dodge"] = to_json(c.dodge);
        j["moving"] = to_json(c.moving);
        return j;
    }

    /// Returns the certificate when the search found one; sets the exit code otherwise.
    std::optional<OutflankCertificate> search(const StepArc& sa) {
        const OutflankSearch s = in_module("outflank", [&] { return find_outflanking_point(sa, r_.tol); });
        out_.render.arcs.push_back(sa.A);
        rep_["clauses"] = {{"step_arc", to_json(s.step_check)}};
        Json d = Json::array();
        for (const auto& m : s.diagnostics) d.push_back(m);
        rep_["diagnostics"] = d;
        if (!s.step_check.ok()) {
            code_ = exit_for(s.step_check.verdict);
            return std::nullopt;
        }
        if (!s.certificate) {
            status_ = "NOT_FOUND";
            return std::nullopt;
        }
        rep_["outflank"] = certificate_json(*s.certificate);
        return s.certificate;
    }

    void validate() {
        const auto c = search(step_arc());
        if (!c) return;
        const OutflankCertificate red = reduce_outflanked_origin(*c);
        rep_["reduced"] = {{"n", red.base.n()}, {"y", red.y}, {"v_param", red.v_param}};
    }

    void certify_with(const OutflankCertificate& c) {
        CertifyOptions opt;
        opt.u_radius = r_.task.u_radius;
        const Region& E = region();
        const OutflankReport t = in_module("outflank", [&] { return certify_outflank(c, E, r_.tol, opt); });
        Json& cl = rep_["clauses"];
        cl["injectivity_on_arc"] = to_json(c.injectivity);
        cl["dodge"] = to_json(c.dodge);
        cl["moving"] = to_json(c.moving);
        cl["containment"] = to_json(t.containment);
        cl["orientation"] = to_json(t.orientation);
        cl["local_injectivity"] = to_json(t.injectivity);
        cl["exclusive"] = to_json(t.exclusive);
        cl["w_select"] = to_json(t.w_select);
        Json j;
        j["u_center"] = to_json(t.u_center);
        j["u_radius"] = num(t.u_radius);
        j["u_radius_source"] = r_.task.u_radius > 0 ? "scenario" : "default";
        j["W_face"] = t.W;
        j["overall"] = to_string(t.overall);
        j["searched_whole_disc"] = t.searched_whole_disc;
        j["inconsistent"] = t.inconsistent;
        j["note"] = t.note;
        rep_["pipeline"] = j;
        certificates(t.certificate);
        rep_["locate"] = locate_json(t.located);
        if (!t.K.empty()) out_.render.images.push_back(t.K);
        if (t.dec && t.W >= 0) out_.render.faces = face_cells(*t.dec, t.W);
        code_ = t.inconsistent ? EXIT_INCONSISTENT : exit_for(t.overall);
    }

    void certify_arc() {
        if (const auto c = search(step_arc())) certify_with(*c);
    }

    void construct(bool certify) {
        const MapExpr& f = map();
        const Point x = *r_.task.periodic_point;
        const Construction c =
            in_module("outflank", [&] { return construct_from_periodic_orbit(f, x, r_.task.period, r_.tol); });
        Json j;
        j["ok"] = c.ok;
        j["failed_step"] = c.failed_step;
        j["diagnostic"] = c.diagnostic;
        Json w = Json::array();
        for (const Point& p : c.witness) w.push_back(to_json(p));
        j["witness"] = w;
        j["contact_t"] = num(c.contact_t);
        j["w"] = to_json(c.w);
        j["n"] = c.n;
        j["proof_case"] = c.proof_case;
        j["injectivity"] = to_json(c.injectivity);
        Json a = Json::array();
        for (const auto& m : c.attempts) a.push_back(m);
        j["attempts"] = a;
        rep_["construction"] = j;
        if (!c.ok) {
            status_ = "FAILURE";
            code_ = EXIT_UNDECIDED;
            return;
        }
        rep_["clauses"] = {{"step_arc", to_json(TriState::satisfied(r_.tol.eps_sep))}};
        rep_["outflank"] = certificate_json(*c.certificate);
        out_.render.arcs.push_back(c.certificate->base.A);
        if (certify) certify_with(*c.certificate);
    }

    void locate_region() {
        const MapExpr& f = map();
        const Box b = region().bounds();
        LocateOptions lo;
        lo.tol_fix = r_.tol.tol_fix;
        lo.eps_sep = r_.tol.eps_sep;
        lo.seed_jitter = r_.tol.seed_jitter;
        const LocateResult l = in_module("fixpoint", [&] { return locate(f, {b}, lo); });
        Json a = Json::array();
        for (const auto& c : l.certificates) {
            a.push_back(to_json(c));
            out_.render.boxes.push_back(c.box);
            out_.render.points.push_back(c.approx);
        }
        rep_["certificates"] = a;
        rep_["locate"] = locate_json(l);
        if (!l.undecided.empty()) code_ = EXIT_UNDECIDED;
    }
};

}  // namespace

RunResult run(const Scenario& s, Task task) { return Runner(s, task).go(); }

}  // namespace planefix
