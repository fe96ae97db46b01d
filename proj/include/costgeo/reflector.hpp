#pragma once

#include "costgeo/diff_geometry.hpp"

namespace costgeo {

// Downward-opening paraboloid of revolution with focal parameter sigma and
// focus Z = (z, z_last):  P(x) = sigma/2 + z_last - |x - z|^2 / (2 sigma).
struct Paraboloid {
    double sigma = 1.0;
    Vec z;          // horizontal focus coordinates
    double z_last = 0.0;

    int base_dim() const { return static_cast<int>(z.size()); }
};

inline double paraboloid_value(const Paraboloid& p, const Vec& x) {
    return 0.5 * p.sigma + p.z_last - (x - p.z).squaredNorm() / (2.0 * p.sigma);
}

inline Vec paraboloid_gradient(const Paraboloid& p, const Vec& x) {
    return -(x - p.z) / p.sigma;
}

// Second fundamental form in graph coordinates:
// delta_ij / (sigma sqrt(1 + |DP|^2)).
inline Mat paraboloid_sff(const Paraboloid& p, const Vec& x) {
    double g2 = paraboloid_gradient(p, x).squaredNorm();
    int n = p.base_dim();
    return Mat::Identity(n, n) / (p.sigma * std::sqrt(1.0 + g2));
}

// The hypograph {x_{n+1} < P(x)} as an oriented implicit surface in R^{n+1}.
inline ImplicitSurface paraboloid_graph_surface(const Paraboloid& p, double box_half = 6.0) {
    const int n = p.base_dim();
    auto psi = [p, n](const Vec& xz) {
        return xz[n] - paraboloid_value(p, xz.head(n));
    };
    auto grad = [p, n](const Vec& xz) {
        Vec g(n + 1);
        g.head(n) = -paraboloid_gradient(p, xz.head(n));
        g[n] = 1.0;
        return g;
    };
    auto hess = [p, n](const Vec&) {
        Mat h = Mat::Zero(n + 1, n + 1);
        h.topLeftCorner(n, n) = Mat::Identity(n, n) / p.sigma;
        return h;
    };
    Box box = Box::cube(n + 1, box_half);
    Vec interior(n + 1);
    interior.head(n) = p.z;
    interior[n] = paraboloid_value(p, p.z) - 1.0;
    return ImplicitSurface(n + 1, psi, grad, hess, box, interior);
}

// Paraboloid with parameter sigma1 internally tangent to par2 at contact x_c:
// gradient match fixes the horizontal focus, value match fixes z_last.
inline Paraboloid align_paraboloid_tangency(double sigma1, const Paraboloid& par2,
                                            const Vec& x_c) {
    if (sigma1 <= 0.0) throw config_error("align_paraboloid_tangency: sigma1 must be positive");
    Paraboloid p1;
    p1.sigma = sigma1;
    p1.z = x_c - (sigma1 / par2.sigma) * (x_c - par2.z);
    p1.z_last = paraboloid_value(par2, x_c) - 0.5 * sigma1 +
                (x_c - p1.z).squaredNorm() / (2.0 * sigma1);
    return p1;
}

struct ReflectorVerdict {
    bool sigma_dominance = false;      // 1/sigma1 >= 1/sigma2
    bool pointwise_ordering = false;   // P1 <= P2 + tol over the grid
    double max_excess = 0.0;           // max of P1 - P2 over the grid
    double contact_value_residual = 0.0;
    double contact_gradient_residual = 0.0;
    bool consistent = false;           // dominance => ordering
};

inline ReflectorVerdict reflector_inclusion(const Paraboloid& p1, const Paraboloid& p2,
                                            const Vec& x_c, double grid_half = 5.0,
                                            int grid_n = 101) {
    ReflectorVerdict v;
    v.contact_value_residual = std::abs(paraboloid_value(p1, x_c) - paraboloid_value(p2, x_c));
    v.contact_gradient_residual =
        (paraboloid_gradient(p1, x_c) - paraboloid_gradient(p2, x_c)).norm();
    if (v.contact_value_residual > 1e-9 || v.contact_gradient_residual > 1e-9)
        throw non_tangent_error("reflector_inclusion: paraboloids are not tangent at x_c");

    v.sigma_dominance = (1.0 / p1.sigma >= 1.0 / p2.sigma - 1e-12);

    const int n = p1.base_dim();
    if (n != 2 && n != 1)
        throw config_error("reflector_inclusion: grid check supports base dim 1 or 2");
    v.max_excess = -std::numeric_limits<double>::infinity();
    auto probe = [&](const Vec& x) {
        double e = paraboloid_value(p1, x) - paraboloid_value(p2, x);
        v.max_excess = std::max(v.max_excess, e);
    };
    if (n == 1) {
        for (int i = 0; i < grid_n; ++i) {
            Vec x(1);
            x << -grid_half + 2.0 * grid_half * i / (grid_n - 1.0);
            probe(x);
        }
    } else {
        for (int i = 0; i < grid_n; ++i) {
            for (int j = 0; j < grid_n; ++j) {
                Vec x(2);
                x << -grid_half + 2.0 * grid_half * i / (grid_n - 1.0),
                    -grid_half + 2.0 * grid_half * j / (grid_n - 1.0);
                probe(x);
            }
        }
    }
    v.pointwise_ordering = v.max_excess <= 1e-9;
    v.consistent = !v.sigma_dominance || v.pointwise_ordering;
    return v;
}

}  // namespace costgeo
