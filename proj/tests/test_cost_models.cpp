#include "costgeo/cost_model.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace costgeo;

namespace {
Vec v2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

// Sample x, y with |x - y| in [0.5, 2], away from the singularity.
std::pair<Vec, Vec> sample_pair(Rng& rng, int dim) {
    Vec x = rng.gaussian_vec(dim);
    Vec y = x + rng.unit_vec(dim) * rng.uniform(0.5, 2.0);
    return {x, y};
}
}  // namespace

TEST_CASE("power cost point values") {
    CHECK(power_cost(2, 2)->eval(v2(0, 0), v2(1, 0)) == Catch::Approx(0.5));
    CHECK(power_cost(-2, 2)->eval(v2(0, 0), v2(1, 0)) == Catch::Approx(-0.5));
    CHECK(power_cost(-1, 2)->eval(v2(0, 0), v2(2, 0)) == Catch::Approx(-0.5));
    CHECK_THROWS_AS(power_cost(0, 2), config_error);
    CHECK_THROWS_AS(power_cost(2, 1), config_error);
}

TEST_CASE("quadratic cost derivative bundle") {
    auto m = power_cost(2, 2);
    DerivativeBundle b = derivatives(*m, v2(0, 0), v2(1, 0));
    CHECK(b.c_x.isApprox(v2(-1, 0), 1e-14));
    CHECK(b.c_xx.isApprox(Mat::Identity(2, 2), 1e-14));
    CHECK(b.c_xy.isApprox(-Mat::Identity(2, 2), 1e-14));
    // c_xy = -I anywhere
    Rng rng(3);
    auto [x, y] = sample_pair(rng, 2);
    CHECK(m->hess_xy(x, y).isApprox(-Mat::Identity(2, 2), 1e-12));
    // third derivatives vanish
    for (const Mat& t : m->third_yxx(x, y)) CHECK(t.norm() < 1e-12);
}

TEST_CASE("singular point guard") {
    auto m = power_cost(-2, 2);
    CHECK_THROWS_AS(m->eval(v2(0.3, 0.3), v2(0.3, 0.3)), singular_point_error);
}

TEST_CASE("analytic derivatives match finite differences") {
    for (double p : {-2.0, -1.0, 0.5, 2.0}) {
        auto m = power_cost(p, 2);
        Rng rng(42);
        for (int i = 0; i < 100; ++i) {
            auto [x, y] = sample_pair(rng, 2);
            double h = 1e-5 * (1.0 + x.norm());
            auto c_of_x = [&](const Vec& xx) { return m->eval(xx, y); };
            auto c_of_y = [&](const Vec& yy) { return m->eval(x, yy); };

            Vec gx = fd_gradient(c_of_x, x, h);
            CHECK((m->grad_x(x, y) - gx).norm() <= 1e-5 * (1.0 + gx.norm()));
            Vec gy = fd_gradient(c_of_y, y, h);
            CHECK((m->grad_y(x, y) - gy).norm() <= 1e-5 * (1.0 + gy.norm()));

            Mat hxx = fd_hessian(c_of_x, x, 1e-4 * (1.0 + x.norm()));
            CHECK((m->hess_xx(x, y) - hxx).norm() <= 1e-5 * (1.0 + hxx.norm()));
        }
    }
}

TEST_CASE("p=-2 c_x matches central finite difference to 1e-6 relative") {
    auto m = power_cost(-2, 2);
    Vec x = v2(0, 0), y = v2(1, 0);
    auto c_of_x = [&](const Vec& xx) { return m->eval(xx, y); };
    Vec fd = fd_gradient(c_of_x, x, 1e-6);
    CHECK((m->grad_x(x, y) - fd).norm() <= 1e-6 * fd.norm());
}

TEST_CASE("analytic third derivatives agree with the FD path") {
    PowerCost m(-2, 3);
    Rng rng(7);
    for (int i = 0; i < 20; ++i) {
        auto [x, y] = sample_pair(rng, 3);
        Tensor3 a = m.third_yxx_analytic(x, y);
        Tensor3 f = m.third_yxx_fd(x, y);
        for (int k = 0; k < 3; ++k)
            CHECK((a[k] - f[k]).norm() <= 1e-5 * (1.0 + f[k].norm()));
    }
}

TEST_CASE("A1 inversion") {
    SECTION("quadratic closed form") {
        auto m = power_cost(2, 2);
        Vec y = solve_y_from_p(*m, v2(0, 0), v2(1, 0));
        CHECK((y - v2(-1, 0)).norm() < 1e-12);
    }
    SECTION("p=-2 residual") {
        auto m = power_cost(-2, 2);
        Vec x = v2(0, 0), p = v2(1, 0);
        Vec y = solve_y_from_p(*m, x, p);
        CHECK((m->grad_x(x, y) - p).norm() <= 1e-10 * (1.0 + p.norm()));
    }
    SECTION("zero momentum rejected") {
        auto m = power_cost(-2, 2);
        CHECK_THROWS_AS(solve_y_from_p(*m, v2(0, 0), v2(0, 0)), zero_momentum_error);
    }
    SECTION("round trip for all exponents") {
        for (double p : {-2.0, -1.0, 0.5, 2.0}) {
            auto m = power_cost(p, 2);
            Rng rng(11);
            for (int i = 0; i < 100; ++i) {
                auto [x, y0] = sample_pair(rng, 2);
                Vec pv = m->grad_x(x, y0);
                Vec y = solve_y_from_p(*m, x, pv);
                CHECK((y - y0).norm() < 1e-8);
            }
        }
    }
}

TEST_CASE("cost symmetry") {
    for (double p : {-2.0, -1.0, 0.5, 2.0}) {
        auto m = power_cost(p, 2);
        Rng rng(5);
        for (int i = 0; i < 50; ++i) {
            auto [x, y] = sample_pair(rng, 2);
            CHECK(m->eval(x, y) == Catch::Approx(m->eval(y, x)).epsilon(1e-12));
            CHECK(m->hess_xx(x, y).isApprox(m->hess_xx(y, x).transpose().eval(), 1e-10));
        }
    }
}

TEST_CASE("mixed hessian determinant and mu") {
    SECTION("quadratic: det(-I) = 1 in even dimension") {
        auto m = power_cost(2, 2);
        CHECK(mixed_hessian_det(*m, v2(0.2, 0.1), v2(1, 1)) == Catch::Approx(1.0));
    }
    SECTION("p=-2 against finite differences") {
        auto m = power_cost(-2, 2);
        Vec x = v2(0, 0), y = v2(1, 0);
        Mat fd(2, 2);
        double h = 1e-4;
        for (int j = 0; j < 2; ++j) {
            Vec yp = y, ym = y;
            yp[j] += h;
            ym[j] -= h;
            fd.col(j) = (m->grad_x(x, yp) - m->grad_x(x, ym)) / (2.0 * h);
        }
        double det_fd = fd.transpose().determinant();
        double det = mixed_hessian_det(*m, x, y);
        CHECK(det != 0.0);
        CHECK(std::abs(det - det_fd) <= 1e-5 * std::abs(det_fd));
    }
    SECTION("mu inverts c_yx") {
        auto m = power_cost(-2, 2);
        Rng rng(9);
        for (int i = 0; i < 20; ++i) {
            auto [x, y] = sample_pair(rng, 2);
            MixedHessian mh = mixed_hessian(*m, x, y);
            CHECK((mh.mu * mh.c_xy.transpose() - Mat::Identity(2, 2)).norm() < 1e-10);
        }
    }
}

TEST_CASE("c*-segment") {
    auto m = power_cost(2, 2);
    Vec x0 = v2(0.5, -0.3), p0 = v2(1, 0.2), p1 = v2(0.4, 1);
    SECTION("endpoints") {
        CHECK((c_star_segment(*m, x0, p0, p1, 0.0) - solve_y_from_p(*m, x0, p0)).norm() < 1e-12);
        CHECK((c_star_segment(*m, x0, p0, p1, 1.0) - solve_y_from_p(*m, x0, p1)).norm() < 1e-12);
    }
    SECTION("quadratic cost gives a straight segment") {
        for (double t : {0.1, 0.25, 0.5, 0.9}) {
            Vec pt = (1.0 - t) * p0 + t * p1;
            CHECK((c_star_segment(*m, x0, p0, p1, t) - (x0 - pt)).norm() < 1e-12);
        }
    }
    SECTION("segment through zero momentum is rejected") {
        CHECK_THROWS_AS(c_star_segment(*m, x0, v2(1, 0), v2(-1, 0), 0.5),
                        zero_momentum_error);
    }
}
