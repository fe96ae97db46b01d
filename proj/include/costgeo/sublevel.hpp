#pragma once

#include "costgeo/cost_model.hpp"
#include "costgeo/diff_geometry.hpp"

#include <memory>

namespace costgeo {

struct SublevelSpec {
    std::shared_ptr<CostModel> model;
    Vec y1;
    Vec y2;
    double a = 0.0;
};

struct SublevelSurface {
    ImplicitSurface surface;
    bool bounded = false;   // the component {psi < 0} is bounded
    bool negated = false;   // the raw field was negated by the orientation pass
    Vec interior;           // probe point with psi < 0
};

namespace detail {

// Raw level-set field before orientation. For p = -2 this is the inverse
// quadratic form psi = |x-y2|^-2 - |x-y1|^-2 - a; for general costs
// c(x,y1) - c(x,y2) - a.
struct SublevelField {
    SublevelSpec spec;
    bool inv_quad = false;
    double sign = 1.0;

    double operator()(const Vec& x) const {
        if (inv_quad) {
            double r1 = (x - spec.y1).squaredNorm();
            double r2 = (x - spec.y2).squaredNorm();
            if (r1 < kSingularEps * kSingularEps || r2 < kSingularEps * kSingularEps)
                throw singular_point_error("sublevel field evaluated at a focus");
            return sign * (1.0 / r2 - 1.0 / r1 - spec.a);
        }
        return sign * (spec.model->eval(x, spec.y1) - spec.model->eval(x, spec.y2) - spec.a);
    }

    Vec grad(const Vec& x) const {
        if (inv_quad) {
            Vec d1 = x - spec.y1, d2 = x - spec.y2;
            double r1 = d1.squaredNorm(), r2 = d2.squaredNorm();
            return sign * Vec(-2.0 * d2 / (r2 * r2) + 2.0 * d1 / (r1 * r1));
        }
        return sign * Vec(spec.model->grad_x(x, spec.y1) - spec.model->grad_x(x, spec.y2));
    }

    Mat hess(const Vec& x) const {
        if (inv_quad) {
            auto h_inv_sq = [](const Vec& d) {
                double r = d.squaredNorm();
                int n = static_cast<int>(d.size());
                return Mat(-2.0 * Mat::Identity(n, n) / (r * r) +
                           8.0 * d * d.transpose() / (r * r * r));
            };
            return sign * Mat(h_inv_sq(x - spec.y2) - h_inv_sq(x - spec.y1));
        }
        return sign * Mat(spec.model->hess_xx(x, spec.y1) - spec.model->hess_xx(x, spec.y2));
    }
};

inline bool is_inv_quad(const SublevelSpec& spec) {
    const auto* pc = dynamic_cast<const PowerCost*>(spec.model.get());
    return pc && pc->exponent() == -2.0;
}

}  // namespace detail

// Builds the boundary surface of N(y1, y2, a), oriented so that {psi < 0} is
// the bounded component when one exists. `bounded` is false for level sets
// that leave the domain box (e.g. the affine p = 2 case).
inline SublevelSurface build_sublevel_psi(const SublevelSpec& spec,
                                          Box box = Box(), int scan = 61) {
    if ((spec.y1 - spec.y2).norm() < 1e-12)
        throw config_error("sublevel spec: coincident foci");
    const int d = static_cast<int>(spec.y1.size());
    if (box.lo.size() == 0) box = Box::cube(d, 2.0);

    detail::SublevelField field;
    field.spec = spec;
    field.inv_quad = detail::is_inv_quad(spec);

    // far-field probe decides which side is bounded
    double far = 100.0 * (box.diameter() + spec.y1.norm() + spec.y2.norm() + 1.0);
    Vec centroid = 0.5 * (spec.y1 + spec.y2);
    int far_pos = 0, far_neg = 0;
    for (int i = 0; i < 2 * d; ++i) {
        Vec dir = Vec::Zero(d);
        dir[i / 2] = (i % 2 == 0) ? 1.0 : -1.0;
        double v = field(centroid + far * dir);
        (v > 0.0 ? far_pos : far_neg)++;
    }
    SublevelSurface out;
    out.bounded = (far_neg == 0 || far_pos == 0);
    if (out.bounded && far_pos == 0) {
        field.sign = -1.0;  // bounded component was {psi > 0}; flip
        out.negated = true;
    }

    // interior probe: midpoint of the foci, else grid scan of the box
    // (excluding balls around the singular foci)
    auto admissible = [&](const Vec& x) {
        return (x - spec.y1).norm() > kSamplerExclusionRadius &&
               (x - spec.y2).norm() > kSamplerExclusionRadius;
    };
    std::optional<Vec> interior;
    bool saw_positive = false;
    Vec mid = centroid;
    if (admissible(mid) && field(mid) < 0.0) interior = mid;
    if (d == 2) {
        for (int i = 0; i < scan && (!interior || !saw_positive); ++i) {
            for (int j = 0; j < scan; ++j) {
                Vec x(2);
                x << box.lo[0] + (box.hi[0] - box.lo[0]) * i / (scan - 1.0),
                    box.lo[1] + (box.hi[1] - box.lo[1]) * j / (scan - 1.0);
                if (!admissible(x)) continue;
                double v = field(x);
                if (v < 0.0 && !interior) interior = x;
                if (v > 0.0) saw_positive = true;
            }
        }
    } else {
        Rng rng(12345);
        for (int i = 0; i < scan * scan && (!interior || !saw_positive); ++i) {
            Vec x = rng.uniform_in_box(box);
            if (!admissible(x)) continue;
            double v = field(x);
            if (v < 0.0 && !interior) interior = x;
            if (v > 0.0) saw_positive = true;
        }
    }
    if (!interior || !saw_positive)
        throw empty_level_set_error("sublevel set has no boundary inside the domain box");
    out.interior = *interior;

    auto psi = [field](const Vec& x) { return field(x); };
    auto grad = [field](const Vec& x) { return field.grad(x); };
    auto hess = [field](const Vec& x) { return field.hess(x); };
    out.surface = ImplicitSurface(d, psi, grad, hess, box, out.interior);
    return out;
}

// Minimum over unit tangents of tau^T (hess psi) tau: the Eq.-style convexity
// quantity, smallest eigenvalue of the tangent-projected Hessian.
inline double tangential_hessian_min(const ImplicitSurface& s, const Vec& x) {
    TangentFrame f = tangent_frame(s, x);
    const int k = static_cast<int>(f.tangents.size());
    Mat t(s.dim(), k);
    for (int i = 0; i < k; ++i) t.col(i) = f.tangents[i];
    Mat proj = t.transpose() * s.hess(x) * t;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (proj + proj.transpose()));
    return es.eigenvalues()[0];
}

// Closed form for the tangential Hessian of the inverse-quadratic field
// psi = |x-y2|^-2 - |x-y1|^-2 - a at an on-set point with unit tangent tau:
//   2/|x-y1|^4 - 2 (1/|x-y1|^2 + a)^2
//   - 8 ((x-y1).tau)^2 / |x-y1|^6 * a / (1/|x-y1|^2 + a)
// Nonpositive when a >= 0; for a < 0 evaluate with y1, y2 swapped and a
// negated (the same set), which flips the sign of psi.
inline double closed_form_tangential_hessian_invquad(const Vec& y1, const Vec& y2,
                                                     double a, const Vec& x,
                                                     const Vec& tau) {
    double r1sq = (x - y1).squaredNorm();
    double r2sq = (x - y2).squaredNorm();
    double psi = 1.0 / r2sq - 1.0 / r1sq - a;
    if (std::abs(psi) > 1e-8)
        throw off_surface_error("closed form requires an on-set point");
    Vec grad = -2.0 * (x - y2) / (r2sq * r2sq) + 2.0 * (x - y1) / (r1sq * r1sq);
    if (std::abs(tau.norm() - 1.0) > 1e-8 || std::abs(grad.dot(tau)) > 1e-8 * (1.0 + grad.norm()))
        throw non_tangent_error("closed form requires a unit tangent direction");
    double u = 1.0 / r1sq + a;  // equals 1/|x-y2|^2 on the set
    if (u <= 0.0) throw geometry_error("closed form: 1/|x-y1|^2 + a must be positive");
    double dt = (x - y1).dot(tau);
    return 2.0 / (r1sq * r1sq) - 2.0 * u * u - 8.0 * dt * dt / (r1sq * r1sq * r1sq) * (a / u);
}

// ---------------------------------------------------------------------------
// 2D predictor-corrector tracing of {psi = 0}

struct TraceOptions {
    double step = 0.01;
    double on_tol = 1e-10;
    int max_points = 200000;
};

inline Polyline2D trace_level_curve_2d(const ImplicitSurface& s, const Vec& seed,
                                       TraceOptions opt = {}) {
    if (s.dim() != 2) throw config_error("trace_level_curve_2d: d = 2 only");

    auto correct = [&](Vec x, double step_now) -> std::optional<Vec> {
        for (int i = 0; i < 25; ++i) {
            double v = s.psi(x);
            if (std::abs(v) <= opt.on_tol) return x;
            Vec g = s.grad(x);
            double gn = g.squaredNorm();
            if (gn < kGradientFloor * kGradientFloor) return std::nullopt;
            Vec dx = -v * g / gn;
            if (i >= 5 && dx.norm() > step_now) return std::nullopt;  // needs halving
            x += dx;
        }
        return std::abs(s.psi(x)) <= 1e-8 ? std::optional<Vec>(x) : std::nullopt;
    };

    auto tangent_dir = [&](const Vec& x) {
        Vec g = s.grad(x);
        double gn = g.norm();
        if (gn < kGradientFloor)
            throw degenerate_gradient_error("trace: degenerate gradient");
        Vec t(2);
        t << -g[1], g[0];  // counterclockwise around {psi < 0}
        return Vec(t / gn);
    };

    auto start = correct(seed, 0.1);
    if (!start) throw lost_curve_error("trace: seed does not project onto the curve");

    Polyline2D poly;
    Vec x = *start;
    poly.points.push_back(x);
    Vec t0 = tangent_dir(x);
    double step = opt.step;

    for (int i = 0; i < opt.max_points; ++i) {
        Vec t = tangent_dir(x);
        std::optional<Vec> next;
        double step_now = step;
        for (int halve = 0; halve < 20 && !next; ++halve) {
            next = correct(x + step_now * t, step_now);
            if (!next) step_now *= 0.5;
        }
        if (!next) throw lost_curve_error("trace: corrector diverged");
        x = *next;
        // closure: back near the start, moving in a consistent direction
        if (poly.points.size() > 3 && (x - poly.points.front()).norm() < 0.5 * opt.step &&
            tangent_dir(x).dot(t0) > 0.9) {
            poly.closed = true;
            return poly;
        }
        if (!s.domain_hint().contains(x)) return poly;  // open curve, box exited
        poly.points.push_back(x);
        step = std::min(step_now * 2.0, opt.step);
    }
    throw lost_curve_error("trace: exceeded maximum point budget without closing");
}

// Seed on the level set: ray from the interior point along +x, bisected.
inline Vec find_level_seed(const ImplicitSurface& s, Vec dir = Vec()) {
    const int d = s.dim();
    if (dir.size() == 0) dir = Vec::Unit(d, 0);
    Vec x0 = s.interior_hint();
    double t_lo = 0.0, t_hi = 1e-3;
    double lim = 4.0 * (s.domain_hint().diameter() + 1.0);
    while (s.psi(x0 + t_hi * dir) < 0.0) {
        t_lo = t_hi;
        t_hi *= 2.0;
        if (t_hi > lim) throw empty_level_set_error("find_level_seed: ray never crosses");
    }
    for (int i = 0; i < 80; ++i) {
        double tm = 0.5 * (t_lo + t_hi);
        (s.psi(x0 + tm * dir) < 0.0 ? t_lo : t_hi) = tm;
    }
    return x0 + 0.5 * (t_lo + t_hi) * dir;
}

// ---------------------------------------------------------------------------
// c-convexity of a domain via its boundary image under x -> c_y(x, y0)

struct CImageVerdict {
    ConvexityVerdict image;
    ConvexityVerdict mu_image;
    bool agree = false;
};

inline CImageVerdict c_image_convexity(const CostModel& model, const Polyline2D& boundary,
                                       const Vec& y0) {
    if (!boundary.closed) throw geometry_error("c_image_convexity: boundary must be closed");
    Polyline2D image;
    image.closed = true;
    for (const Vec& x : boundary.points) image.points.push_back(model.grad_y(x, y0));

    // mu fixed at the first boundary vertex (constant matrix in the Step-1 sense)
    Mat mu = mixed_hessian(model, boundary.points.front(), y0).mu;
    Polyline2D mu_image;
    mu_image.closed = true;
    for (const Vec& q : image.points) mu_image.points.push_back(mu * q);

    CImageVerdict v;
    v.image = polyline_convexity(image);
    v.mu_image = polyline_convexity(mu_image);
    v.agree = (v.image.convex == v.mu_image.convex);
    return v;
}

}  // namespace costgeo
