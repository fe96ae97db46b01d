#pragma once

#include "costgeo/cost_model.hpp"

#include <optional>

namespace costgeo {

struct MtwSample {
    Vec x;
    Vec p_vec;
    Vec xi;   // unit
    Vec eta;  // unit, xi . eta = 0
};

enum class MtwClass { A3Positive, WeakA3, Violated };

inline const char* to_string(MtwClass c) {
    switch (c) {
        case MtwClass::A3Positive: return "A3-positive";
        case MtwClass::WeakA3: return "weak-A3";
        case MtwClass::Violated: return "violated";
    }
    return "?";
}

struct MtwAuditReport {
    MtwClass classification = MtwClass::WeakA3;
    double min_value = 0.0;
    double c0_estimate = 0.0;  // min of value / (|xi|^2 |eta|^2); unit vectors here
    MtwSample witness;
    int witness_index = -1;
    int samples = 0;
    int errors = 0;
    std::uint64_t seed = 0;
    double pos_tol = 0.0;
};

// A(x, p) = c_xx(x, y(x, p)).
inline Mat a_matrix(const CostModel& model, const Vec& x, const Vec& p_vec) {
    Vec y = solve_y_from_p(model, x, p_vec);
    return model.hess_xx(x, y);
}

namespace detail {
template <class Q>
double second_diff_in_p(Q&& q, const Vec& p_vec, const Vec& dir, double h) {
    return (q(p_vec + h * dir) - 2.0 * q(p_vec) + q(p_vec - h * dir)) / (h * h);
}
}  // namespace detail

// The MTW contraction A_{ij,kl} xi_i xi_j eta_k eta_l realized as the second
// central difference in p along eta of q(p) = xi^T A(x,p) xi. Richardson
// fallback when the base step is unstable under doubling.
inline double mtw_contraction(const CostModel& model, const MtwSample& sample,
                              double h = 0.0) {
    if (h <= 0.0) h = 1e-3 * (1.0 + sample.p_vec.norm());
    auto q = [&](const Vec& p) {
        return sample.xi.dot(a_matrix(model, sample.x, p) * sample.xi);
    };
    double q0 = q(sample.p_vec);
    double scale = std::abs(q0) + 1.0;
    double v_h = detail::second_diff_in_p(q, sample.p_vec, sample.eta, h);
    double v_2h = detail::second_diff_in_p(q, sample.p_vec, sample.eta, 2.0 * h);
    if (std::abs(v_h - v_2h) <= 0.1 * std::abs(v_h) + 1e-9 * scale) {
        // stable already; one Richardson level sharpens the truncation error
        return (4.0 * v_h - v_2h) / 3.0;
    }
    double v_h2 = detail::second_diff_in_p(q, sample.p_vec, sample.eta, 0.5 * h);
    double rich = (4.0 * v_h2 - v_h) / 3.0;
    if (std::abs(rich - v_h2) > 0.1 * std::abs(rich) + 1e-7 * scale)
        throw unstable_step_error("mtw_contraction: finite difference unstable");
    return rich;
}

// Eq.-(9)-style quantity: d^2/dt^2 of xi^T c_xx(x, y(x, p_t)) xi along the
// momentum segment p_t = (1-t) p0 + t p1.
inline double segment_second_derivative(const CostModel& model, const Vec& x,
                                        const Vec& p0, const Vec& p1, const Vec& xi,
                                        double t, double h = 1e-3) {
    auto q = [&](double tt) {
        Vec y = c_star_segment(model, x, p0, p1, tt);
        return xi.dot(model.hess_xx(x, y) * xi);
    };
    return (q(t + h) - 2.0 * q(t) + q(t - h)) / (h * h);
}

struct MtwSamplerConfig {
    Box domain = Box::cube(2, 2.0);  // x box; resized to the model dimension
    double p_min = 0.2;
    double p_max = 5.0;
};

inline MtwSample draw_mtw_sample(Rng& rng, const MtwSamplerConfig& cfg, int dim) {
    MtwSample s;
    Box box = cfg.domain;
    if (box.lo.size() != dim) box = Box::cube(dim, 2.0);
    s.x = rng.uniform_in_box(box);
    s.p_vec = rng.unit_vec(dim) * rng.uniform(cfg.p_min, cfg.p_max);
    auto [xi, eta] = orthonormal_pair(rng, dim);
    s.xi = xi;
    s.eta = eta;
    return s;
}

inline MtwAuditReport audit_grid(const CostModel& model, const MtwSamplerConfig& cfg,
                                 int n, std::uint64_t seed, double pos_tol = 1e-5) {
    Rng rng(seed);
    MtwAuditReport rep;
    rep.samples = n;
    rep.seed = seed;
    rep.pos_tol = pos_tol;
    rep.min_value = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        MtwSample s = draw_mtw_sample(rng, cfg, model.dim());
        double v;
        try {
            v = mtw_contraction(model, s);
        } catch (const geometry_error&) {
            ++rep.errors;
            continue;
        }
        if (v < rep.min_value) {
            rep.min_value = v;
            rep.witness = s;
            rep.witness_index = i;
        }
    }
    if (rep.errors > n / 100)
        throw no_convergence_error("audit_grid: more than 1% of samples failed");
    rep.c0_estimate = rep.min_value;
    if (rep.min_value > pos_tol) rep.classification = MtwClass::A3Positive;
    else if (rep.min_value < -pos_tol) rep.classification = MtwClass::Violated;
    else rep.classification = MtwClass::WeakA3;
    return rep;
}

}  // namespace costgeo
