#pragma once

#include "costgeo/common.hpp"

#include <memory>
#include <vector>

namespace costgeo {

// Distance guard around the cost singularity x = y.
inline constexpr double kSingularEps = 1e-8;
// Samplers stay outside this ball around singular loci.
inline constexpr double kSamplerExclusionRadius = 0.05;

// c_yxx tensor, indexed by the y-derivative first: t[m](i,j) = c_{y_m, x_i x_j}.
using Tensor3 = std::vector<Mat>;

struct DerivativeBundle {
    double c = 0.0;
    Vec c_x;
    Vec c_y;
    Mat c_xx;
    Mat c_xy;  // (c_xy)_{ij} = d2c / dx_i dy_j
    Tensor3 c_yxx;
};

// Cost function c(x, y) with derivative access up to third order.
class CostModel {
  public:
    virtual ~CostModel() = default;

    virtual int dim() const = 0;
    virtual double eval(const Vec& x, const Vec& y) const = 0;
    virtual Vec grad_x(const Vec& x, const Vec& y) const = 0;
    virtual Vec grad_y(const Vec& x, const Vec& y) const = 0;
    virtual Mat hess_xx(const Vec& x, const Vec& y) const = 0;
    virtual Mat hess_xy(const Vec& x, const Vec& y) const = 0;
    virtual Tensor3 third_yxx(const Vec& x, const Vec& y) const = 0;
};

// Power-law cost c(x, y) = |x - y|^p / p, singular at x = y.
class PowerCost final : public CostModel {
  public:
    PowerCost(double p, int dim) : p_(p), dim_(dim) {
        if (p == 0.0) throw config_error("power cost: p = 0 is undefined");
        if (dim < 2) throw config_error("power cost: dim must be >= 2");
    }

    double exponent() const { return p_; }
    int dim() const override { return dim_; }

    double eval(const Vec& x, const Vec& y) const override {
        return std::pow(dist(x, y), p_) / p_;
    }

    // c_x = s^{p-2} (x - y)
    Vec grad_x(const Vec& x, const Vec& y) const override {
        Vec r = x - y;
        double s = dist(x, y);
        return std::pow(s, p_ - 2.0) * r;
    }

    Vec grad_y(const Vec& x, const Vec& y) const override { return -grad_x(x, y); }

    // c_xx = s^{p-2} I + (p-2) s^{p-4} r r^T
    Mat hess_xx(const Vec& x, const Vec& y) const override {
        Vec r = x - y;
        double s = dist(x, y);
        Mat h = std::pow(s, p_ - 2.0) * Mat::Identity(dim_, dim_);
        h += (p_ - 2.0) * std::pow(s, p_ - 4.0) * (r * r.transpose());
        return h;
    }

    Mat hess_xy(const Vec& x, const Vec& y) const override { return -hess_xx(x, y); }

    // Default: central finite differences of c_xx in y. Analytic form for
    // p = +-2, validated against the FD path in tests.
    Tensor3 third_yxx(const Vec& x, const Vec& y) const override {
        if (p_ == 2.0 || p_ == -2.0) return third_yxx_analytic(x, y);
        return third_yxx_fd(x, y);
    }

    Tensor3 third_yxx_analytic(const Vec& x, const Vec& y) const {
        Vec r = x - y;
        double s = dist(x, y);
        double a = std::pow(s, p_ - 4.0) * (p_ - 2.0);
        double b = std::pow(s, p_ - 6.0) * (p_ - 2.0) * (p_ - 4.0);
        Tensor3 t(dim_, Mat::Zero(dim_, dim_));
        // c_{y_m, x_i x_j} = -d/dx_m [ s^{p-2} d_ij + (p-2) s^{p-4} r_i r_j ]
        for (int m = 0; m < dim_; ++m) {
            for (int i = 0; i < dim_; ++i) {
                for (int j = 0; j < dim_; ++j) {
                    double v = a * r[m] * (i == j ? 1.0 : 0.0);
                    v += b * r[m] * r[i] * r[j];
                    v += a * ((i == m ? 1.0 : 0.0) * r[j] + (j == m ? 1.0 : 0.0) * r[i]);
                    t[m](i, j) = -v;
                }
            }
        }
        return t;
    }

    Tensor3 third_yxx_fd(const Vec& x, const Vec& y) const {
        double h = 1e-4 * (1.0 + x.norm());
        Tensor3 t(dim_, Mat(dim_, dim_));
        Vec yp = y;
        for (int m = 0; m < dim_; ++m) {
            yp[m] = y[m] + h;
            Mat hp = hess_xx(x, yp);
            yp[m] = y[m] - h;
            Mat hm = hess_xx(x, yp);
            yp[m] = y[m];
            t[m] = (hp - hm) / (2.0 * h);
        }
        return t;
    }

  private:
    double dist(const Vec& x, const Vec& y) const {
        double s = (x - y).norm();
        if (s < kSingularEps)
            throw singular_point_error("power cost evaluated too close to x = y");
        return s;
    }

    double p_;
    int dim_;
};

inline std::shared_ptr<CostModel> power_cost(double p, int dim) {
    return std::make_shared<PowerCost>(p, dim);
}

inline DerivativeBundle derivatives(const CostModel& model, const Vec& x, const Vec& y) {
    DerivativeBundle b;
    b.c = model.eval(x, y);
    b.c_x = model.grad_x(x, y);
    b.c_y = model.grad_y(x, y);
    b.c_xx = model.hess_xx(x, y);
    b.c_xy = model.hess_xy(x, y);
    b.c_yxx = model.third_yxx(x, y);
    return b;
}

// A1 inversion: the unique y with c_x(x, y) = p_vec.
inline Vec solve_y_from_p(const CostModel& model, const Vec& x, const Vec& p_vec,
                          int max_iters = 50) {
    double pn = p_vec.norm();
    if (pn < 1e-10) throw zero_momentum_error("solve_y_from_p: p_vec = 0 has no preimage");

    Vec y;
    if (const auto* pc = dynamic_cast<const PowerCost*>(&model);
        pc && std::abs(pc->exponent() - 1.0) > 1e-12) {
        // closed form: |x - y| = |p|^{1/(p-1)} along p_vec
        double e = (2.0 - pc->exponent()) / (pc->exponent() - 1.0);
        y = x - p_vec * std::pow(pn, e);
    } else {
        y = x - p_vec;
    }

    double tol = 1e-10 * (1.0 + pn);
    Vec res = model.grad_x(x, y) - p_vec;
    double rn = res.norm();
    for (int it = 0; it < max_iters && rn > tol; ++it) {
        Mat jac = model.hess_xy(x, y);  // d(c_x)/dy
        Vec dy = jac.fullPivLu().solve(-res);
        double alpha = 1.0;
        for (int k = 0; k < 30; ++k) {
            Vec y_try = y + alpha * dy;
            try {
                Vec res_try = model.grad_x(x, y_try) - p_vec;
                if (res_try.norm() < rn) {
                    y = y_try;
                    res = res_try;
                    rn = res.norm();
                    break;
                }
            } catch (const singular_point_error&) {
                // step overshot the diagonal; damp
            }
            alpha *= 0.5;
            if (k == 29) throw no_convergence_error("solve_y_from_p: damping stalled");
        }
    }
    if (rn > tol) throw no_convergence_error("solve_y_from_p: Newton did not converge");
    return y;
}

// A2 check: det c_xy plus the inverse of c_{y,x} (the mu matrix).
struct MixedHessian {
    double det = 0.0;
    Mat c_xy;
    Mat mu;  // [c_{y_m, x_i}]^{-1}
};

inline MixedHessian mixed_hessian(const CostModel& model, const Vec& x, const Vec& y) {
    MixedHessian m;
    m.c_xy = model.hess_xy(x, y);
    Mat c_yx = m.c_xy.transpose();
    m.det = c_yx.determinant();
    if (std::abs(m.det) < 1e-12)
        throw singular_matrix_error("mixed hessian is singular (A2 violation)");
    m.mu = c_yx.inverse();
    return m;
}

inline double mixed_hessian_det(const CostModel& model, const Vec& x, const Vec& y) {
    return mixed_hessian(model, x, y).det;
}

// Point on the c*-segment through x0: y_t with c_x(x0, y_t) = (1-t) p0 + t p1.
inline Vec c_star_segment(const CostModel& model, const Vec& x0, const Vec& p0,
                          const Vec& p1, double t) {
    // distance from the origin to the full segment [p0, p1]
    Vec d = p1 - p0;
    double dd = d.squaredNorm();
    double s = dd > 0 ? std::clamp(-p0.dot(d) / dd, 0.0, 1.0) : 0.0;
    if ((p0 + s * d).norm() < 1e-10)
        throw zero_momentum_error("c_star_segment: momentum segment crosses 0");
    Vec p_t = (1.0 - t) * p0 + t * p1;
    return solve_y_from_p(model, x0, p_t);
}

}  // namespace costgeo
