#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace costgeo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Box {
    Vec lo;
    Vec hi;

    Vec center() const { return 0.5 * (lo + hi); }
    double diameter() const { return (hi - lo).norm(); }
    bool contains(const Vec& x) const {
        for (int i = 0; i < x.size(); ++i)
            if (x[i] < lo[i] || x[i] > hi[i]) return false;
        return true;
    }
    static Box cube(int dim, double half) {
        Box b;
        b.lo = Vec::Constant(dim, -half);
        b.hi = Vec::Constant(dim, half);
        return b;
    }
};

// ---------------------------------------------------------------------------
// Errors

struct geometry_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct singular_point_error : geometry_error {
    using geometry_error::geometry_error;
};
struct zero_momentum_error : geometry_error {
    using geometry_error::geometry_error;
};
struct no_convergence_error : geometry_error {
    using geometry_error::geometry_error;
};
struct singular_matrix_error : geometry_error {
    using geometry_error::geometry_error;
};
struct off_surface_error : geometry_error {
    using geometry_error::geometry_error;
};
struct degenerate_gradient_error : geometry_error {
    using geometry_error::geometry_error;
};
struct non_tangent_error : geometry_error {
    using geometry_error::geometry_error;
};
struct empty_level_set_error : geometry_error {
    using geometry_error::geometry_error;
};
struct lost_curve_error : geometry_error {
    using geometry_error::geometry_error;
};
struct unstable_step_error : geometry_error {
    using geometry_error::geometry_error;
};
struct config_error : geometry_error {
    using geometry_error::geometry_error;
};

// ---------------------------------------------------------------------------
// Deterministic RNG. Distribution transforms are written out by hand so that
// streams are bit-identical across standard libraries.

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next_u64() {
        // splitmix64
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Box-Muller; one value per call, cache discarded for stream simplicity
    double gaussian() {
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    Vec gaussian_vec(int dim) {
        Vec v(dim);
        for (int i = 0; i < dim; ++i) v[i] = gaussian();
        return v;
    }

    Vec unit_vec(int dim) {
        Vec v = gaussian_vec(dim);
        double n = v.norm();
        while (n < 1e-12) {
            v = gaussian_vec(dim);
            n = v.norm();
        }
        return v / n;
    }

    Vec uniform_in_box(const Box& box) {
        Vec v(box.lo.size());
        for (int i = 0; i < v.size(); ++i) v[i] = uniform(box.lo[i], box.hi[i]);
        return v;
    }

  private:
    std::uint64_t state_;
};

// Random orthonormal pair (xi, eta): Gram-Schmidt on two Gaussian draws.
inline std::pair<Vec, Vec> orthonormal_pair(Rng& rng, int dim) {
    for (;;) {
        Vec a = rng.gaussian_vec(dim);
        Vec b = rng.gaussian_vec(dim);
        double na = a.norm();
        if (na < 1e-10) continue;
        a /= na;
        b -= a.dot(b) * a;
        double nb = b.norm();
        if (nb < 1e-10) continue;
        b /= nb;
        return {a, b};
    }
}

// ---------------------------------------------------------------------------
// Finite differences

template <class F>
double fd_second_directional(F&& f, const Vec& x, const Vec& dir, double h) {
    return (f(x + h * dir) - 2.0 * f(x) + f(x - h * dir)) / (h * h);
}

// One Richardson level on the central second difference: O(h^4).
template <class F>
double fd_second_directional_rich(F&& f, const Vec& x, const Vec& dir, double h) {
    double d_h = fd_second_directional(f, x, dir, h);
    double d_2h = fd_second_directional(f, x, dir, 2.0 * h);
    return (4.0 * d_h - d_2h) / 3.0;
}

template <class F>
Vec fd_gradient(F&& f, const Vec& x, double h) {
    Vec g(x.size());
    Vec e = x;
    for (int i = 0; i < x.size(); ++i) {
        double xi = x[i];
        e[i] = xi + h;
        double fp = f(e);
        e[i] = xi - h;
        double fm = f(e);
        e[i] = xi;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

template <class F>
Mat fd_hessian(F&& f, const Vec& x, double h) {
    const int d = static_cast<int>(x.size());
    Mat hes(d, d);
    double f0 = f(x);
    Vec e = x;
    for (int i = 0; i < d; ++i) {
        e[i] = x[i] + h;
        double fp = f(e);
        e[i] = x[i] - h;
        double fm = f(e);
        e[i] = x[i];
        hes(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
    }
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            e[i] = x[i] + h;
            e[j] = x[j] + h;
            double fpp = f(e);
            e[j] = x[j] - h;
            double fpm = f(e);
            e[i] = x[i] - h;
            double fmm = f(e);
            e[j] = x[j] + h;
            double fmp = f(e);
            e[i] = x[i];
            e[j] = x[j];
            hes(i, j) = hes(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
        }
    }
    return hes;
}

}  // namespace costgeo
