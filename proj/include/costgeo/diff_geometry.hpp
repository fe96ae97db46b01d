#pragma once

#include "costgeo/implicit_surface.hpp"

#include <optional>

namespace costgeo {

inline constexpr double kOnSurfaceTol = 1e-6;
inline constexpr double kGradientFloor = 1e-10;

namespace detail {
inline Vec checked_gradient(const ImplicitSurface& s, const Vec& x) {
    Vec g = s.grad(x);
    if (g.norm() < kGradientFloor)
        throw degenerate_gradient_error("implicit surface has degenerate gradient");
    return g;
}
}  // namespace detail

// One Newton projection step along the gradient, applied to near-surface
// queries carrying discretization error.
inline Vec project_to_surface(const ImplicitSurface& s, Vec x, double tol = 1e-12,
                              int max_iters = 30) {
    for (int i = 0; i < max_iters; ++i) {
        double v = s.psi(x);
        if (std::abs(v) <= tol) return x;
        Vec g = detail::checked_gradient(s, x);
        x -= v * g / g.squaredNorm();
    }
    if (std::abs(s.psi(x)) > 1e-8)
        throw no_convergence_error("project_to_surface: Newton projection diverged");
    return x;
}

inline void require_on_surface(const ImplicitSurface& s, const Vec& x) {
    if (std::abs(s.psi(x)) > kOnSurfaceTol)
        throw off_surface_error("point is not on the surface");
}

inline Vec outward_normal(const ImplicitSurface& s, const Vec& x) {
    require_on_surface(s, x);
    Vec g = detail::checked_gradient(s, x);
    return g / g.norm();
}

struct TangentFrame {
    Vec point;
    Vec normal;
    std::vector<Vec> tangents;  // (d-1) orthonormal vectors perpendicular to normal
};

// Orthonormal tangent basis perpendicular to n, by Gram-Schmidt over the
// identity columns.
inline std::vector<Vec> tangent_basis(const Vec& n) {
    const int d = static_cast<int>(n.size());
    std::vector<Vec> basis;
    for (int i = 0; i < d && static_cast<int>(basis.size()) < d - 1; ++i) {
        Vec v = Vec::Unit(d, i);
        v -= n.dot(v) * n;
        for (const Vec& t : basis) v -= t.dot(v) * t;
        double nv = v.norm();
        if (nv > 1e-6) basis.push_back(v / nv);
    }
    return basis;
}

inline TangentFrame tangent_frame(const ImplicitSurface& s, const Vec& x) {
    TangentFrame f;
    f.point = x;
    f.normal = outward_normal(s, x);
    f.tangents = tangent_basis(f.normal);
    return f;
}

// II(v) = v^T (hess psi) v / |grad psi| for unit tangent v; equals the
// parametric -d^2_v r . n and is positive on outward-oriented convex surfaces.
inline double second_fundamental_form(const ImplicitSurface& s, const TangentFrame& frame,
                                      const Vec& v) {
    if (std::abs(v.norm() - 1.0) > 1e-8)
        throw non_tangent_error("second_fundamental_form: v must be a unit vector");
    if (std::abs(v.dot(frame.normal)) > 1e-8)
        throw non_tangent_error("second_fundamental_form: v is not tangent");
    Vec g = detail::checked_gradient(s, frame.point);
    return v.dot(s.hess(frame.point) * v) / g.norm();
}

// Principal curvatures: eigenvalues (ascending) of the tangent-projected shape
// operator T^T (hess psi / |grad psi|) T.
inline std::vector<double> weingarten_spectrum(const ImplicitSurface& s, const Vec& x) {
    TangentFrame f = tangent_frame(s, x);
    const int k = static_cast<int>(f.tangents.size());
    Mat t(s.dim(), k);
    for (int i = 0; i < k; ++i) t.col(i) = f.tangents[i];
    Vec g = detail::checked_gradient(s, x);
    Mat shape = t.transpose() * s.hess(x) * t / g.norm();
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (shape + shape.transpose()));
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + k);
    return ev;
}

// Gauss-map inversion: the point on a strictly convex surface whose outward
// normal is w, via support maximization of w.x followed by a Newton polish on
// grad psi(x) = lambda w, psi(x) = 0.
inline Vec gauss_inverse(const ImplicitSurface& s, const Vec& w, int max_iters = 200) {
    const int d = s.dim();
    // surface point along the ray interior + t w (single crossing for convex bodies)
    Vec x0 = s.interior_hint();
    double diam = s.domain_hint().diameter() + 1.0;
    double t_lo = 0.0, t_hi = 1e-3;
    while (s.psi(x0 + t_hi * w) < 0.0) {
        t_lo = t_hi;
        t_hi *= 2.0;
        if (t_hi > 4.0 * diam)
            throw no_convergence_error("gauss_inverse: ray never leaves the body");
    }
    for (int i = 0; i < 80; ++i) {
        double tm = 0.5 * (t_lo + t_hi);
        (s.psi(x0 + tm * w) < 0.0 ? t_lo : t_hi) = tm;
    }
    Vec x = project_to_surface(s, x0 + 0.5 * (t_lo + t_hi) * w);

    // projected support ascent: move along the tangential part of w
    double step = 0.2 * diam;
    for (int it = 0; it < max_iters; ++it) {
        Vec g = detail::checked_gradient(s, x);
        Vec n = g / g.norm();
        Vec tv = w - w.dot(n) * n;
        if (tv.norm() < 1e-10) break;
        bool moved = false;
        while (step > 1e-14) {
            try {
                Vec x_try = project_to_surface(s, x + step * tv);
                if (w.dot(x_try) > w.dot(x)) {
                    x = x_try;
                    moved = true;
                    break;
                }
            } catch (const geometry_error&) {
            }
            step *= 0.5;
        }
        if (!moved) break;
        step = std::min(step * 2.0, 0.2 * diam);
    }

    // Newton polish on F(x, lambda) = (grad psi - lambda w, psi)
    double lambda = detail::checked_gradient(s, x).norm();
    for (int it = 0; it < 60; ++it) {
        Vec g = s.grad(x);
        Vec f(d + 1);
        f.head(d) = g - lambda * w;
        f[d] = s.psi(x);
        if (f.norm() < 1e-13 * (1.0 + lambda)) break;
        Mat jac = Mat::Zero(d + 1, d + 1);
        jac.topLeftCorner(d, d) = s.hess(x);
        jac.topRightCorner(d, 1) = -w;
        jac.bottomLeftCorner(1, d) = g.transpose();
        Vec delta = jac.fullPivLu().solve(-f);
        x += delta.head(d);
        lambda += delta[d];
        if (delta.norm() < 1e-14 * (1.0 + x.norm())) break;
    }

    Vec n_res = outward_normal(s, x) - w;
    if (n_res.norm() > 1e-8)
        throw no_convergence_error(
            "gauss_inverse: no point with the requested normal (non-convexity witness?)");
    return x;
}

// ---------------------------------------------------------------------------
// Polylines

struct Polyline2D {
    std::vector<Vec> points;
    bool closed = false;
};

struct ConvexityVerdict {
    bool convex = false;
    int witness_index = -1;  // first vertex violating the turning-sign pattern
};

inline ConvexityVerdict polyline_convexity(const Polyline2D& curve) {
    if (!curve.closed) throw geometry_error("polyline_convexity: curve must be closed");
    const int n = static_cast<int>(curve.points.size());
    if (n < 4) throw geometry_error("polyline_convexity: need at least 4 points");

    auto cross_at = [&](int i) {
        const Vec& a = curve.points[i % n];
        const Vec& b = curve.points[(i + 1) % n];
        const Vec& c = curve.points[(i + 2) % n];
        Vec e1 = b - a, e2 = c - b;
        double cr = e1[0] * e2[1] - e1[1] * e2[0];
        double tol = 1e-9 * e1.norm() * e2.norm();
        return std::pair<double, double>{cr, tol};
    };

    int pos = 0, neg = 0;
    for (int i = 0; i < n; ++i) {
        auto [cr, tol] = cross_at(i);
        if (cr > tol) ++pos;
        else if (cr < -tol) ++neg;
    }
    ConvexityVerdict v;
    if (pos == 0 || neg == 0) {
        v.convex = true;
        return v;
    }
    double minority = (pos < neg) ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) {
        auto [cr, tol] = cross_at(i);
        if (cr * minority > tol) {
            v.witness_index = i;
            break;
        }
    }
    return v;
}

}  // namespace costgeo
