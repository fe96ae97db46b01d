#pragma once

#include "costgeo/common.hpp"

#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace costgeo {

// Oriented hypersurface {psi = 0} bounding the region {psi < 0}.
// Constructors arrange the sign of psi so that grad psi / |grad psi| is the
// outward normal of the bounded region; `orientation` asserts that convention.
class ImplicitSurface {
  public:
    using ScalarField = std::function<double(const Vec&)>;
    using VecField = std::function<Vec(const Vec&)>;
    using MatField = std::function<Mat(const Vec&)>;

    ImplicitSurface() = default;

    ImplicitSurface(int dim, ScalarField psi, VecField grad, MatField hess, Box domain_hint,
                    Vec interior_hint)
        : dim_(dim),
          psi_(std::move(psi)),
          grad_(std::move(grad)),
          hess_(std::move(hess)),
          domain_hint_(std::move(domain_hint)),
          interior_hint_(std::move(interior_hint)) {}

    // Derivatives filled in by central differences of psi.
    static ImplicitSurface from_field(int dim, ScalarField psi, Box domain_hint,
                                      Vec interior_hint, double h = 1e-5,
                                      double h_hess = 1e-4) {
        ScalarField p = psi;
        VecField g = [p, h](const Vec& x) { return fd_gradient(p, x, h); };
        MatField hs = [p, h_hess](const Vec& x) { return fd_hessian(p, x, h_hess); };
        return ImplicitSurface(dim, std::move(psi), std::move(g), std::move(hs),
                               std::move(domain_hint), std::move(interior_hint));
    }

    // Analytic gradient, Hessian by central differences of the gradient.
    static ImplicitSurface from_gradient(int dim, ScalarField psi, VecField grad,
                                         Box domain_hint, Vec interior_hint,
                                         double h = 1e-6) {
        VecField g = grad;
        MatField hs = [g, h, dim](const Vec& x) {
            Mat m(dim, dim);
            Vec e = x;
            for (int i = 0; i < dim; ++i) {
                e[i] = x[i] + h;
                Vec gp = g(e);
                e[i] = x[i] - h;
                Vec gm = g(e);
                e[i] = x[i];
                m.col(i) = (gp - gm) / (2.0 * h);
            }
            return Mat(0.5 * (m + m.transpose()));
        };
        return ImplicitSurface(dim, std::move(psi), std::move(grad), std::move(hs),
                               std::move(domain_hint), std::move(interior_hint));
    }

    int dim() const { return dim_; }
    bool orientation() const { return orientation_; }
    const Box& domain_hint() const { return domain_hint_; }
    const Vec& interior_hint() const { return interior_hint_; }

    double psi(const Vec& x) const { return psi_(x); }
    Vec grad(const Vec& x) const { return grad_(x); }
    Mat hess(const Vec& x) const { return hess_(x); }

    // Surface translated by t: {x : psi(x - t) = 0}.
    ImplicitSurface translated(const Vec& t) const {
        ImplicitSurface s = *this;
        ScalarField p = psi_;
        VecField g = grad_;
        MatField h = hess_;
        s.psi_ = [p, t](const Vec& x) { return p(x - t); };
        s.grad_ = [g, t](const Vec& x) { return g(x - t); };
        s.hess_ = [h, t](const Vec& x) { return h(x - t); };
        s.interior_hint_ = interior_hint_ + t;
        s.domain_hint_.lo = domain_hint_.lo + t;
        s.domain_hint_.hi = domain_hint_.hi + t;
        return s;
    }

    // Surface scaled by s > 0 about the origin.
    ImplicitSurface scaled(double sc) const {
        ImplicitSurface s = *this;
        ScalarField p = psi_;
        VecField g = grad_;
        MatField h = hess_;
        s.psi_ = [p, sc](const Vec& x) { return p(x / sc); };
        s.grad_ = [g, sc](const Vec& x) { return Vec(g(x / sc) / sc); };
        s.hess_ = [h, sc](const Vec& x) { return Mat(h(x / sc) / (sc * sc)); };
        s.interior_hint_ = sc * interior_hint_;
        s.domain_hint_.lo = sc * domain_hint_.lo;
        s.domain_hint_.hi = sc * domain_hint_.hi;
        return s;
    }

  private:
    int dim_ = 0;
    bool orientation_ = true;
    ScalarField psi_;
    VecField grad_;
    MatField hess_;
    Box domain_hint_;
    Vec interior_hint_;
};

// ---------------------------------------------------------------------------
// Stock surfaces

inline ImplicitSurface sphere_surface(const Vec& center, double radius) {
    const int d = static_cast<int>(center.size());
    auto psi = [center, radius](const Vec& x) { return (x - center).squaredNorm() - radius * radius; };
    auto grad = [center](const Vec& x) { return Vec(2.0 * (x - center)); };
    auto hess = [d](const Vec&) { return Mat(2.0 * Mat::Identity(d, d)); };
    Box box;
    box.lo = center - Vec::Constant(d, 1.5 * radius);
    box.hi = center + Vec::Constant(d, 1.5 * radius);
    return ImplicitSurface(d, psi, grad, hess, box, center);
}

inline ImplicitSurface circle_surface(const Vec& center, double radius) {
    return sphere_surface(center, radius);
}

// Axis-aligned ellipse x^2/a^2 + y^2/b^2 = 1 (2D) centered at the origin.
inline ImplicitSurface ellipse_surface(double a, double b) {
    auto psi = [a, b](const Vec& x) {
        return x[0] * x[0] / (a * a) + x[1] * x[1] / (b * b) - 1.0;
    };
    auto grad = [a, b](const Vec& x) {
        Vec g(2);
        g << 2.0 * x[0] / (a * a), 2.0 * x[1] / (b * b);
        return g;
    };
    auto hess = [a, b](const Vec&) {
        Mat h = Mat::Zero(2, 2);
        h(0, 0) = 2.0 / (a * a);
        h(1, 1) = 2.0 / (b * b);
        return h;
    };
    double m = 1.5 * std::max(a, b);
    return ImplicitSurface(2, psi, grad, hess, Box::cube(2, m), Vec::Zero(2));
}

// Radially perturbed circle r(theta) = R (1 + sum_k eps_k cos(k theta + phi_k)),
// psi = |x - c| - r(theta). Convex for small enough eps (checked by callers).
struct RadialCurve {
    double R = 1.0;
    Vec center = Vec::Zero(2);
    std::vector<double> eps;  // eps[k-1] multiplies cos(k theta + phi_k)
    std::vector<double> phi;

    double radius(double theta) const {
        double r = 1.0;
        for (std::size_t k = 0; k < eps.size(); ++k)
            r += eps[k] * std::cos(double(k + 1) * theta + phi[k]);
        return R * r;
    }
    double radius_d1(double theta) const {
        double r = 0.0;
        for (std::size_t k = 0; k < eps.size(); ++k)
            r -= eps[k] * double(k + 1) * std::sin(double(k + 1) * theta + phi[k]);
        return R * r;
    }
    double radius_d2(double theta) const {
        double r = 0.0;
        for (std::size_t k = 0; k < eps.size(); ++k)
            r -= eps[k] * double(k + 1) * double(k + 1) *
                 std::cos(double(k + 1) * theta + phi[k]);
        return R * r;
    }

    // Polar curvature; positive everywhere iff the curve is convex.
    double curvature(double theta) const {
        double r = radius(theta), r1 = radius_d1(theta), r2 = radius_d2(theta);
        return (r * r + 2.0 * r1 * r1 - r * r2) / std::pow(r * r + r1 * r1, 1.5);
    }
    double min_curvature(int n = 720) const {
        double m = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) m = std::min(m, curvature(2.0 * M_PI * i / n));
        return m;
    }
};

inline ImplicitSurface radial_curve_surface(const RadialCurve& rc) {
    auto psi = [rc](const Vec& x) {
        Vec d = x - rc.center;
        double rho = d.norm();
        double theta = std::atan2(d[1], d[0]);
        return rho - rc.radius(theta);
    };
    auto grad = [rc](const Vec& x) {
        Vec d = x - rc.center;
        double rho = d.norm();
        double theta = std::atan2(d[1], d[0]);
        Vec u = d / rho;
        Vec tdir(2);
        tdir << -d[1], d[0];
        return Vec(u - rc.radius_d1(theta) * tdir / (rho * rho));
    };
    double m = rc.R * 2.0;
    Box box;
    box.lo = rc.center - Vec::Constant(2, m);
    box.hi = rc.center + Vec::Constant(2, m);
    return ImplicitSurface::from_gradient(2, psi, grad, box, rc.center);
}

inline RadialCurve random_convex_curve(Rng& rng, double R = 1.0, double amp = 0.06,
                                       int max_tries = 100) {
    for (int t = 0; t < max_tries; ++t) {
        RadialCurve rc;
        rc.R = R;
        for (int k = 1; k <= 4; ++k) {
            rc.eps.push_back(rng.uniform(-amp, amp));
            rc.phi.push_back(rng.uniform(0.0, 2.0 * M_PI));
        }
        if (rc.min_curvature() > 0.1 / R) return rc;
    }
    throw no_convergence_error("random_convex_curve: could not sample a convex curve");
}

}  // namespace costgeo
