#pragma once

#include "costgeo/mtw.hpp"
#include "costgeo/reflector.hpp"
#include "costgeo/rolling.hpp"

#include <json.hpp>

#include <fstream>

namespace costgeo {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

using json = nlohmann::json;  // object keys are stored sorted

inline json to_json(const Vec& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

inline json to_json(const MtwAuditReport& r) {
    json j;
    j["classification"] = to_string(r.classification);
    j["min_value"] = r.min_value;
    j["c0_estimate"] = r.c0_estimate;
    j["samples"] = r.samples;
    j["errors"] = r.errors;
    j["seed"] = r.seed;
    j["pos_tol"] = r.pos_tol;
    j["witness"] = {{"index", r.witness_index},
                    {"x", to_json(r.witness.x)},
                    {"p", to_json(r.witness.p_vec)},
                    {"xi", to_json(r.witness.xi)},
                    {"eta", to_json(r.witness.eta)}};
    return j;
}

inline json to_json(const InclusionVerdict& v) {
    json j;
    j["dominance_holds"] = v.dominance_holds;
    j["dominance_margin"] = v.dominance_margin;
    j["inclusion_holds"] = v.inclusion_holds;
    j["max_violation"] = v.max_violation;
    j["n_normals"] = v.n_normals;
    j["n_containment_samples"] = v.n_containment_samples;
    j["consistent_with_theorem1"] = v.consistent_with_theorem1;
    j["translation"] = to_json(v.translation);
    j["contact_normal"] = to_json(v.contact_normal);
    return j;
}

inline json to_json(const ReflectorVerdict& v) {
    json j;
    j["sigma_dominance"] = v.sigma_dominance;
    j["pointwise_ordering"] = v.pointwise_ordering;
    j["max_excess"] = v.max_excess;
    j["contact_value_residual"] = v.contact_value_residual;
    j["contact_gradient_residual"] = v.contact_gradient_residual;
    j["consistent"] = v.consistent;
    return j;
}

inline json make_envelope(const std::string& subcommand, const json& config,
                          const json& result, long long timing_ms) {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["tool_version"] = kToolVersion;
    j["subcommand"] = subcommand;
    j["config"] = config;
    j["result"] = result;
    j["timing_ms"] = timing_ms;
    return j;
}

inline void write_report(const json& envelope, const std::string& path) {
    if (path.empty() || path == "-") {
        printf("%s\n", envelope.dump(2).c_str());
        return;
    }
    std::ofstream out(path);
    if (!out) throw config_error("cannot open output path: " + path);
    out << envelope.dump(2) << "\n";
}

inline void write_polyline_csv(const Polyline2D& poly, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot open CSV path: " + path);
    out.precision(17);
    for (const Vec& p : poly.points) out << p[0] << "," << p[1] << "\n";
}

inline Polyline2D read_polyline_csv(const std::string& path, bool closed) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open CSV path: " + path);
    Polyline2D poly;
    poly.closed = closed;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw config_error("malformed CSV row: " + line);
        Vec p(2);
        p << std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1));
        poly.points.push_back(p);
    }
    return poly;
}

}  // namespace costgeo
