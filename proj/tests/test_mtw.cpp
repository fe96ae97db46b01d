#include "costgeo/mtw.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace costgeo;

namespace {
Vec v2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}
}  // namespace

TEST_CASE("A matrix") {
    SECTION("identity for the quadratic cost") {
        auto m = power_cost(2, 2);
        Rng rng(1);
        for (int i = 0; i < 20; ++i) {
            Vec x = rng.gaussian_vec(2);
            Vec p = rng.unit_vec(2) * rng.uniform(0.2, 5.0);
            CHECK(a_matrix(*m, x, p).isApprox(Mat::Identity(2, 2), 1e-10));
        }
    }
    SECTION("p=-2 against finite-difference c_xx") {
        auto m = power_cost(-2, 2);
        Vec x = v2(0, 0), p = v2(2, 0);
        Vec y = solve_y_from_p(*m, x, p);
        auto c_of_x = [&](const Vec& xx) { return m->eval(xx, y); };
        Mat fd = fd_hessian(c_of_x, x, 1e-4);
        CHECK((a_matrix(*m, x, p) - fd).norm() <= 1e-5 * (1.0 + fd.norm()));
    }
    SECTION("symmetry on seeded samples") {
        auto m = power_cost(-1, 2);
        Rng rng(2);
        MtwSamplerConfig cfg;
        for (int i = 0; i < 100; ++i) {
            MtwSample s = draw_mtw_sample(rng, cfg, 2);
            Mat a = a_matrix(*m, s.x, s.p_vec);
            CHECK((a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
        }
    }
}

TEST_CASE("mtw contraction") {
    SECTION("zero tensor for the quadratic cost") {
        auto m = power_cost(2, 2);
        Rng rng(3);
        MtwSamplerConfig cfg;
        for (int i = 0; i < 100; ++i) {
            MtwSample s = draw_mtw_sample(rng, cfg, 2);
            CHECK(std::abs(mtw_contraction(*m, s)) <= 1e-8);
        }
    }
    SECTION("p=-2 axis sample is nonnegative (weak A3)") {
        auto m = power_cost(-2, 2);
        MtwSample s{v2(0, 0), v2(1, 0), v2(0, 1), v2(1, 0)};
        CHECK(mtw_contraction(*m, s) >= -1e-6);
    }
    SECTION("p=-1 samples are strictly positive (A3)") {
        auto m = power_cost(-1, 2);
        Rng rng(4);
        MtwSamplerConfig cfg;
        for (int i = 0; i < 100; ++i) {
            MtwSample s = draw_mtw_sample(rng, cfg, 2);
            CHECK(mtw_contraction(*m, s) > 0.0);
        }
    }
}

TEST_CASE("segment second derivative") {
    SECTION("vanishes for the quadratic cost") {
        auto m = power_cost(2, 2);
        CHECK(std::abs(segment_second_derivative(*m, v2(0.3, 0.1), v2(1, 0), v2(1, 1),
                                                 v2(0, 1), 0.5)) < 1e-8);
    }
    SECTION("equivalence with the contraction form") {
        // eta = (p1 - p0)/|p1 - p0| with p1 - p0 perpendicular to xi:
        // d^2/dt^2 at p_t scales the contraction by |p1 - p0|^2
        for (double p : {-2.0, -1.0}) {
            auto m = power_cost(p, 2);
            Rng rng(5);
            int checked = 0;
            while (checked < 50) {
                Vec x = rng.uniform_in_box(Box::cube(2, 2.0));
                Vec p0 = rng.unit_vec(2) * rng.uniform(0.5, 3.0);
                Vec xi = rng.unit_vec(2);
                Vec eta(2);
                eta << -xi[1], xi[0];
                double len = rng.uniform(0.1, 0.5);
                Vec p1 = p0 + len * eta;
                double t = 0.5;
                Vec p_t = (1.0 - t) * p0 + t * p1;
                double seg, con;
                try {
                    seg = segment_second_derivative(*m, x, p0, p1, xi, t);
                    con = mtw_contraction(*m, {x, p_t, xi, eta}) * len * len;
                } catch (const geometry_error&) {
                    continue;
                }
                CHECK(std::abs(seg - con) <= 1e-3 * (std::abs(con) + 1e-6));
                ++checked;
            }
        }
    }
    SECTION("p=-2 weak A3 along a seeded segment") {
        auto m = power_cost(-2, 2);
        Vec x = v2(0.2, -0.4);
        Vec p0 = v2(1.5, 0.3), p1 = v2(1.1, 1.2);
        Vec d = p1 - p0;
        Vec xi(2);
        xi << -d[1], d[0];  // the weak A3 bound quantifies over xi perpendicular to p1-p0
        xi /= xi.norm();
        double v = segment_second_derivative(*m, x, p0, p1, xi, 0.5);
        CHECK(v >= -1e-6 * d.squaredNorm());
    }
}

TEST_CASE("audit grid") {
    MtwSamplerConfig cfg;
    SECTION("quadratic cost is weak-A3 with a tiny minimum") {
        auto m = power_cost(2, 2);
        MtwAuditReport r = audit_grid(*m, cfg, 1000, 7);
        CHECK(r.classification == MtwClass::WeakA3);
        CHECK(std::abs(r.min_value) <= 1e-8);
    }
    SECTION("p=-1 classifies A3-positive") {
        auto m = power_cost(-1, 2);
        MtwAuditReport r = audit_grid(*m, cfg, 1000, 42);
        CHECK(r.classification == MtwClass::A3Positive);
        CHECK(r.min_value > 1e-5);
    }
    SECTION("p=-2 classifies weak-A3") {
        auto m = power_cost(-2, 2);
        MtwAuditReport r = audit_grid(*m, cfg, 1000, 7);
        CHECK(r.classification == MtwClass::WeakA3);
        CHECK(std::abs(r.min_value) <= 1e-5);
    }
    SECTION("determinism and witness consistency") {
        auto m = power_cost(-1, 2);
        MtwAuditReport a = audit_grid(*m, cfg, 300, 11);
        MtwAuditReport b = audit_grid(*m, cfg, 300, 11);
        CHECK(a.min_value == b.min_value);
        CHECK(a.witness_index == b.witness_index);
        CHECK((a.witness.x - b.witness.x).norm() == 0.0);
        CHECK(mtw_contraction(*m, a.witness) == a.min_value);
    }
    SECTION("classification monotone in pos_tol") {
        auto m = power_cost(-2, 2);
        MtwAuditReport tight = audit_grid(*m, cfg, 300, 7, 1e-12);
        MtwAuditReport loose = audit_grid(*m, cfg, 300, 7, 1e-3);
        // enlarging pos_tol never moves weak-A3 to violated
        if (tight.classification != MtwClass::Violated)
            CHECK(loose.classification != MtwClass::Violated);
    }
}
