// costgeo command line: MTW audits, sub-level tracing, rolling-ball verdicts,
// and the reflector paraboloid comparison. Reports are key-sorted JSON so that
// identical configs and seeds produce byte-identical payloads.

#include "costgeo/report.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>

namespace {

using namespace costgeo;

Vec parse_vec(const std::string& s) {
    std::vector<double> vals;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        auto comma = s.find(',', pos);
        std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos
                                                                   : comma - pos);
        if (!tok.empty()) vals.push_back(std::stod(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (vals.empty()) throw config_error("empty vector flag: " + s);
    Vec v(static_cast<int>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i) v[static_cast<int>(i)] = vals[i];
    return v;
}

// Shape descriptors for the roll subcommand, e.g.
//   circle:r=1,cx=0,cy=0
//   ellipse:a=1,b=1.5
//   perturbed:R=1,seed=3,amp=0.06
ImplicitSurface parse_shape(const std::string& s) {
    auto colon = s.find(':');
    std::string name = s.substr(0, colon);
    std::map<std::string, double> kv;
    if (colon != std::string::npos) {
        std::string rest = s.substr(colon + 1);
        std::size_t pos = 0;
        while (pos < rest.size()) {
            auto comma = rest.find(',', pos);
            std::string tok = rest.substr(pos, comma == std::string::npos
                                                   ? std::string::npos
                                                   : comma - pos);
            auto eq = tok.find('=');
            if (eq == std::string::npos) throw config_error("bad shape token: " + tok);
            kv[tok.substr(0, eq)] = std::stod(tok.substr(eq + 1));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    auto get = [&](const std::string& k, double dflt) {
        auto it = kv.find(k);
        return it == kv.end() ? dflt : it->second;
    };
    if (name == "circle") {
        Vec c(2);
        c << get("cx", 0.0), get("cy", 0.0);
        return circle_surface(c, get("r", 1.0));
    }
    if (name == "ellipse") {
        return ellipse_surface(get("a", 1.0), get("b", 1.0));
    }
    if (name == "perturbed") {
        Rng rng(static_cast<std::uint64_t>(get("seed", 1.0)));
        RadialCurve rc = random_convex_curve(rng, get("R", 1.0), get("amp", 0.06));
        return radial_curve_surface(rc);
    }
    throw config_error("unknown shape: " + name);
}

// --config file values override command-line flags; unknown keys are rejected.
void merge_config_file(const std::string& path, json& cfg) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    json file = json::parse(in);
    for (auto& [k, v] : file.items()) {
        if (!cfg.contains(k)) throw config_error("unknown config key: " + k);
        cfg[k] = v;
    }
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    long long ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    }
};

int run_mtw_audit(const json& cfg) {
    Timer timer;
    auto model = power_cost(cfg["p"], cfg["dim"]);
    MtwSamplerConfig ms;
    ms.domain = Box::cube(cfg["dim"], 2.0);
    MtwAuditReport rep = audit_grid(*model, ms, cfg["samples"], cfg["seed"], cfg["tol"]);
    json env = make_envelope("mtw-audit", cfg, to_json(rep), timer.ms());
    write_report(env, cfg["out"]);
    return rep.classification == MtwClass::Violated ? 2 : 0;
}

int run_sublevel(const json& cfg) {
    Timer timer;
    int dim = cfg["dim"];
    auto model = power_cost(cfg["p"], dim);
    SublevelSpec spec{model, parse_vec(cfg["y1"]), parse_vec(cfg["y2"]), cfg["a"]};
    json result;
    try {
        SublevelSurface built = build_sublevel_psi(spec);
        result["bounded"] = built.bounded;
        result["negated"] = built.negated;
        if (!built.bounded) {
            result["warning"] = "level set is unbounded in the domain box (affine or open)";
        }
        if (dim == 2 && built.bounded) {
            TraceOptions topt;
            topt.step = cfg["step"];
            Polyline2D curve =
                trace_level_curve_2d(built.surface, find_level_seed(built.surface), topt);
            ConvexityVerdict cv = polyline_convexity(curve);
            result["closed"] = curve.closed;
            result["convex"] = cv.convex;
            result["n_vertices"] = curve.points.size();
            double h_min = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < curve.points.size(); i += 5)
                h_min = std::min(h_min,
                                 tangential_hessian_min(built.surface, curve.points[i]));
            result["tangential_hessian_min"] = h_min;
            std::string csv = cfg["trace_csv"];
            if (!csv.empty()) {
                write_polyline_csv(curve, csv);
                result["trace_csv"] = csv;
            }
        }
    } catch (const empty_level_set_error& e) {
        result["error"] = e.what();
        json env = make_envelope("sublevel", cfg, result, timer.ms());
        write_report(env, cfg["out"]);
        return 1;
    }
    json env = make_envelope("sublevel", cfg, result, timer.ms());
    write_report(env, cfg["out"]);
    return 0;
}

int run_roll(const json& cfg) {
    Timer timer;
    std::string mode = cfg["mode"];
    json result;
    int findings = 0;
    if (mode == "blaschke") {
        ImplicitSurface inner = parse_shape(cfg["inner"]);
        ImplicitSurface outer = parse_shape(cfg["outer"]);
        Vec w = parse_vec(cfg["contact"]);
        w /= w.norm();
        InclusionVerdict v =
            blaschke_verdict(inner, outer, w, cfg["normals"], cfg["samples"], cfg["seed"]);
        if (!v.consistent_with_theorem1) ++findings;
        result = to_json(v);
    } else if (mode == "sweep") {
        int sweeps = cfg["sweeps"];
        double scale = cfg["scale"];
        std::uint64_t seed = cfg["seed"];
        json cases = json::array();
        for (int i = 0; i < sweeps; ++i) {
            Rng rng(seed + static_cast<std::uint64_t>(i));
            RadialCurve rc = random_convex_curve(rng);
            ImplicitSurface inner = radial_curve_surface(rc);
            ImplicitSurface outer = inner.scaled(scale);
            Vec w = rng.unit_vec(2);
            InclusionVerdict v = blaschke_verdict(inner, outer, w, cfg["normals"],
                                                  cfg["samples"], seed + i);
            if (!v.consistent_with_theorem1) ++findings;
            cases.push_back(to_json(v));
        }
        result["cases"] = cases;
        result["findings"] = findings;
    } else if (mode == "theorem2") {
        auto model = power_cost(cfg["p"], 2);
        Vec disk = parse_vec(cfg["disk"]);  // cx, cy, r
        if (disk.size() != 3) throw config_error("--disk expects cx,cy,r");
        ImplicitSurface u = circle_surface(disk.head(2), disk[2]);
        Vec w = parse_vec(cfg["contact"]);
        w /= w.norm();
        Theorem2Config tc;
        tc.n_normals = cfg["normals"];
        tc.n_samples = cfg["samples"];
        tc.seed = cfg["seed"];
        Theorem2Result r = theorem2_pipeline(model, u, parse_vec(cfg["y1"]),
                                             parse_vec(cfg["y2"]), w, tc);
        if (!r.verdict.consistent_with_theorem1) ++findings;
        result = to_json(r.verdict);
        result["audit_class"] = to_string(r.audit_class);
        result["chosen_a"] = r.chosen_a;
        result["sublevel_convex"] = r.sublevel_convex;
        result["contact_normal_mismatch"] = r.contact_normal_mismatch;
    } else {
        throw config_error("unknown roll mode: " + mode);
    }
    json env = make_envelope("roll", cfg, result, timer.ms());
    write_report(env, cfg["out"]);
    return findings > 0 ? 2 : 0;
}

int run_reflector(const json& cfg) {
    Timer timer;
    Vec focus2 = parse_vec(cfg["focus"]);  // z..., z_last
    Paraboloid p2;
    p2.z = focus2.head(focus2.size() - 1);
    p2.z_last = focus2[focus2.size() - 1];
    p2.sigma = cfg["sigma2"];
    Vec x_c = parse_vec(cfg["contact"]);
    Paraboloid p1 = align_paraboloid_tangency(cfg["sigma1"], p2, x_c);
    ReflectorVerdict v = reflector_inclusion(p1, p2, x_c);
    json result = to_json(v);
    result["p1"] = {{"sigma", p1.sigma}, {"z", to_json(p1.z)}, {"z_last", p1.z_last}};
    json env = make_envelope("reflector", cfg, result, timer.ms());
    write_report(env, cfg["out"]);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"costgeo: cost-geometry audits and rolling-ball verification"};
    app.require_subcommand(1);

    // mtw-audit
    auto* mtw = app.add_subcommand("mtw-audit", "classify a cost as A3 / weak-A3 / violated");
    json mc = {{"p", 2.0},     {"dim", 2},      {"samples", 1000}, {"seed", 7},
               {"tol", 1e-5},  {"out", ""}};
    std::string mtw_config;
    mtw->add_option("--p", mc["p"].get_ref<double&>(), "power-cost exponent");
    mtw->add_option("--dim", mc["dim"].get_ref<json::number_integer_t&>(), "ambient dimension");
    mtw->add_option("--samples", mc["samples"].get_ref<json::number_integer_t&>(), "sample count");
    mtw->add_option("--seed", mc["seed"].get_ref<json::number_integer_t&>(), "RNG seed");
    mtw->add_option("--tol", mc["tol"].get_ref<double&>(), "positivity tolerance");
    mtw->add_option("--out", mc["out"].get_ref<std::string&>(), "report path (default stdout)");
    mtw->add_option("--config", mtw_config, "JSON config file overriding flags");

    // sublevel
    auto* sub = app.add_subcommand("sublevel", "build, trace and classify a sub-level surface");
    json sc = {{"p", -2.0},    {"dim", 2},        {"y1", "0,0"},  {"y2", "1,0"},
               {"a", 0.0},     {"step", 0.01},    {"out", ""},    {"trace_csv", ""}};
    std::string sub_config;
    sub->add_option("--p", sc["p"].get_ref<double&>(), "power-cost exponent");
    sub->add_option("--dim", sc["dim"].get_ref<json::number_integer_t&>(), "ambient dimension");
    sub->add_option("--y1", sc["y1"].get_ref<std::string&>(), "first focus, comma-separated");
    sub->add_option("--y2", sc["y2"].get_ref<std::string&>(), "second focus, comma-separated");
    sub->add_option("--a", sc["a"].get_ref<double&>(), "offset a");
    sub->add_option("--step", sc["step"].get_ref<double&>(), "tracer step");
    sub->add_option("--out", sc["out"].get_ref<std::string&>(), "report path");
    sub->add_option("--trace-csv", sc["trace_csv"].get_ref<std::string&>(), "polyline CSV path");
    sub->add_option("--config", sub_config, "JSON config file overriding flags");

    // roll
    auto* roll = app.add_subcommand("roll", "Blaschke / Theorem-2 verdict pipelines");
    json rc = {{"mode", "blaschke"}, {"inner", "circle:r=1"}, {"outer", "circle:r=2"},
               {"contact", "1,0"},   {"normals", 100},        {"samples", 200},
               {"seed", 1},          {"sweeps", 20},          {"scale", 1.5},
               {"p", -2.0},          {"y1", "-0.001,0"},      {"y2", "-1,-0.01"},
               {"disk", "0,0,0.2"},  {"out", ""}};
    std::string roll_config;
    roll->add_option("--mode", rc["mode"].get_ref<std::string&>(), "blaschke | sweep | theorem2");
    roll->add_option("--inner", rc["inner"].get_ref<std::string&>(), "inner shape descriptor");
    roll->add_option("--outer", rc["outer"].get_ref<std::string&>(), "outer shape descriptor");
    roll->add_option("--contact", rc["contact"].get_ref<std::string&>(), "contact normal");
    roll->add_option("--normals", rc["normals"].get_ref<json::number_integer_t&>(), "matched normals");
    roll->add_option("--samples", rc["samples"].get_ref<json::number_integer_t&>(), "containment samples");
    roll->add_option("--seed", rc["seed"].get_ref<json::number_integer_t&>(), "RNG seed");
    roll->add_option("--sweeps", rc["sweeps"].get_ref<json::number_integer_t&>(), "sweep case count");
    roll->add_option("--scale", rc["scale"].get_ref<double&>(), "sweep outer scale");
    roll->add_option("--p", rc["p"].get_ref<double&>(), "theorem2 cost exponent");
    roll->add_option("--y1", rc["y1"].get_ref<std::string&>(), "theorem2 first focus");
    roll->add_option("--y2", rc["y2"].get_ref<std::string&>(), "theorem2 second focus");
    roll->add_option("--disk", rc["disk"].get_ref<std::string&>(), "theorem2 disk cx,cy,r");
    roll->add_option("--out", rc["out"].get_ref<std::string&>(), "report path");
    roll->add_option("--config", roll_config, "JSON config file overriding flags");

    // reflector
    auto* refl = app.add_subcommand("reflector", "tangent paraboloid inclusion comparison");
    json fc = {{"sigma1", 0.5}, {"sigma2", 1.0}, {"focus", "0,0,0"},
               {"contact", "1,0"}, {"out", ""}};
    std::string refl_config;
    refl->add_option("--sigma1", fc["sigma1"].get_ref<double&>(), "inner focal parameter");
    refl->add_option("--sigma2", fc["sigma2"].get_ref<double&>(), "outer focal parameter");
    refl->add_option("--focus", fc["focus"].get_ref<std::string&>(), "outer focus z...,z_last");
    refl->add_option("--contact", fc["contact"].get_ref<std::string&>(), "contact point");
    refl->add_option("--out", fc["out"].get_ref<std::string&>(), "report path");
    refl->add_option("--config", refl_config, "JSON config file overriding flags");

    CLI11_PARSE(app, argc, argv);

    try {
        if (mtw->parsed()) {
            merge_config_file(mtw_config, mc);
            return run_mtw_audit(mc);
        }
        if (sub->parsed()) {
            merge_config_file(sub_config, sc);
            return run_sublevel(sc);
        }
        if (roll->parsed()) {
            merge_config_file(roll_config, rc);
            return run_roll(rc);
        }
        if (refl->parsed()) {
            merge_config_file(refl_config, fc);
            return run_reflector(fc);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
