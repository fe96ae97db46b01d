#pragma once

#include "costgeo/diff_geometry.hpp"
#include "costgeo/mtw.hpp"
#include "costgeo/sublevel.hpp"

namespace costgeo {

inline constexpr double kDominanceTol = 1e-9;
inline constexpr double kContainmentTol = 1e-7;

struct DominanceScan {
    bool holds = false;
    double margin = 0.0;  // min over matched samples of II_inner - II_outer
    Vec witness_normal;
    Vec witness_tangent;
};

struct InclusionCheck {
    bool holds = false;
    double max_violation = 0.0;  // max of psi_outer over sampled inner points
    Vec witness_point;
};

struct InclusionVerdict {
    bool dominance_holds = false;
    double dominance_margin = 0.0;
    bool inclusion_holds = false;
    double max_violation = 0.0;
    int n_normals = 0;
    int n_containment_samples = 0;
    bool consistent_with_theorem1 = false;  // !dominance || inclusion
    Vec translation;
    Vec contact_normal;
};

// Translation making `inner` internally tangent to `outer` at the outer point
// with outward normal w.
inline Vec align_internal_tangency(const ImplicitSurface& inner,
                                   const ImplicitSurface& outer, const Vec& w) {
    return gauss_inverse(outer, w) - gauss_inverse(inner, w);
}

inline DominanceScan curvature_dominance_scan(const ImplicitSurface& inner,
                                              const ImplicitSurface& outer,
                                              int n_normals, std::uint64_t seed) {
    Rng rng(seed);
    const int d = inner.dim();
    DominanceScan scan;
    scan.margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_normals; ++i) {
        Vec w = rng.unit_vec(d);
        Vec x_in = gauss_inverse(inner, w);
        Vec x_out = gauss_inverse(outer, w);
        TangentFrame f_in{x_in, w, tangent_basis(w)};
        TangentFrame f_out{x_out, w, f_in.tangents};
        std::vector<Vec> dirs = f_in.tangents;
        for (int k = 0; k < 8; ++k) {
            Vec v = Vec::Zero(d);
            for (const Vec& t : f_in.tangents) v += rng.gaussian() * t;
            double nv = v.norm();
            if (nv > 1e-12) dirs.push_back(v / nv);
        }
        for (const Vec& v : dirs) {
            double diff = second_fundamental_form(inner, f_in, v) -
                          second_fundamental_form(outer, f_out, v);
            if (diff < scan.margin) {
                scan.margin = diff;
                scan.witness_normal = w;
                scan.witness_tangent = v;
            }
        }
    }
    scan.holds = scan.margin >= -kDominanceTol;
    return scan;
}

inline InclusionCheck inclusion_oracle(const ImplicitSurface& inner, const Vec& translation,
                                       const ImplicitSurface& outer, int n_samples,
                                       std::uint64_t seed) {
    Rng rng(seed);
    const int d = inner.dim();
    InclusionCheck chk;
    chk.max_violation = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_samples; ++i) {
        Vec w = rng.unit_vec(d);
        Vec x = gauss_inverse(inner, w) + translation;
        double v = outer.psi(x);
        if (v > chk.max_violation) {
            chk.max_violation = v;
            chk.witness_point = x;
        }
    }
    chk.holds = chk.max_violation <= kContainmentTol;
    return chk;
}

// Theorem-1 verification: align at the contact normal, scan curvature
// dominance over Gauss-matched normals, and check containment independently.
// Only the implication dominance => inclusion is asserted.
inline InclusionVerdict blaschke_verdict(const ImplicitSurface& inner,
                                         const ImplicitSurface& outer, const Vec& w_contact,
                                         int n_normals, int n_samples, std::uint64_t seed) {
    InclusionVerdict v;
    v.contact_normal = w_contact;
    v.translation = align_internal_tangency(inner, outer, w_contact);
    DominanceScan scan = curvature_dominance_scan(inner, outer, n_normals, seed);
    v.dominance_holds = scan.holds;
    v.dominance_margin = scan.margin;
    InclusionCheck chk = inclusion_oracle(inner, v.translation, outer, n_samples, seed + 1);
    v.inclusion_holds = chk.holds;
    v.max_violation = chk.max_violation;
    v.n_normals = n_normals;
    v.n_containment_samples = n_samples;
    v.consistent_with_theorem1 = !v.dominance_holds || v.inclusion_holds;
    return v;
}

// ---------------------------------------------------------------------------
// Theorem-2 pipeline: U rolling inside the cost sub-level surface N(y1,y2,a)

struct Theorem2Config {
    int n_normals = 100;
    int n_samples = 200;
    std::uint64_t seed = 1;
    int audit_samples = 200;
    double pos_tol = 1e-5;
    double trace_step = 0.01;
    Box box = Box();  // defaults to the sub-level builder's box
};

struct Theorem2Result {
    InclusionVerdict verdict;
    MtwClass audit_class = MtwClass::WeakA3;
    double chosen_a = 0.0;
    bool sublevel_convex = false;
    double contact_normal_mismatch = 0.0;  // angle between requested and achieved normal
    Vec contact_point;
};

inline Theorem2Result theorem2_pipeline(std::shared_ptr<CostModel> model,
                                        const ImplicitSurface& u_boundary, const Vec& y1,
                                        const Vec& y2, const Vec& w_contact,
                                        const Theorem2Config& cfg = {}) {
    Theorem2Result res;

    // gate 1: the cost must satisfy at least weak A3
    MtwSamplerConfig ms;
    MtwAuditReport audit = audit_grid(*model, ms, cfg.audit_samples, cfg.seed, cfg.pos_tol);
    res.audit_class = audit.classification;
    if (audit.classification == MtwClass::Violated)
        throw geometry_error("theorem2_pipeline: cost fails the weak A3 audit");

    // choose a so that N(y1, y2, a) passes through z0 on the boundary of U
    Vec z0 = gauss_inverse(u_boundary, w_contact);
    res.contact_point = z0;
    SublevelSpec spec{model, y1, y2, 0.0};
    detail::SublevelField probe;
    probe.spec = spec;
    probe.inv_quad = detail::is_inv_quad(spec);
    spec.a = probe(z0);  // zero offset field value at z0
    res.chosen_a = spec.a;

    SublevelSurface n_surf = build_sublevel_psi(spec, cfg.box);
    if (!n_surf.bounded)
        throw geometry_error("theorem2_pipeline: sub-level surface is not a bounded convex body");

    // gate 2: convexity of the traced sub-level boundary
    TraceOptions topt;
    topt.step = cfg.trace_step;
    Polyline2D curve = trace_level_curve_2d(n_surf.surface, find_level_seed(n_surf.surface), topt);
    if (!curve.closed || !polyline_convexity(curve).convex)
        throw geometry_error("theorem2_pipeline: sub-level surface is not convex");
    res.sublevel_convex = true;

    // the requested contact normal may differ from N's own normal at z0;
    // report the mismatch and proceed with the achieved normal
    Vec n_at_z0 = outward_normal(n_surf.surface, project_to_surface(n_surf.surface, z0));
    res.contact_normal_mismatch =
        std::acos(std::clamp(n_at_z0.dot(w_contact), -1.0, 1.0));

    res.verdict = blaschke_verdict(u_boundary, n_surf.surface, n_at_z0, cfg.n_normals,
                                   cfg.n_samples, cfg.seed);
    return res;
}

}  // namespace costgeo
