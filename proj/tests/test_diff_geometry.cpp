#include "costgeo/diff_geometry.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace costgeo;

namespace {
Vec v2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}
Vec v3(double a, double b, double c) {
    Vec v(3);
    v << a, b, c;
    return v;
}
}  // namespace

TEST_CASE("outward normal") {
    ImplicitSurface circle = circle_surface(Vec::Zero(2), 1.0);
    CHECK((outward_normal(circle, v2(1, 0)) - v2(1, 0)).norm() < 1e-12);

    ImplicitSurface sphere = sphere_surface(Vec::Zero(3), 2.0);
    CHECK((outward_normal(sphere, v3(0, 0, 2)) - v3(0, 0, 1)).norm() < 1e-12);

    CHECK_THROWS_AS(outward_normal(circle, v2(1.5, 0)), off_surface_error);
}

TEST_CASE("tangent frame orthonormality") {
    ImplicitSurface sphere = sphere_surface(Vec::Zero(3), 2.0);
    Rng rng(1);
    for (int i = 0; i < 20; ++i) {
        Vec x = 2.0 * rng.unit_vec(3);
        TangentFrame f = tangent_frame(sphere, x);
        REQUIRE(f.tangents.size() == 2);
        CHECK(std::abs(f.tangents[0].dot(f.tangents[1])) < 1e-10);
        for (const Vec& t : f.tangents) {
            CHECK(std::abs(t.norm() - 1.0) < 1e-10);
            CHECK(std::abs(t.dot(f.normal)) < 1e-10);
        }
    }
}

TEST_CASE("second fundamental form of spheres") {
    ImplicitSurface circle = circle_surface(Vec::Zero(2), 2.0);
    TangentFrame f = tangent_frame(circle, v2(2, 0));
    CHECK(second_fundamental_form(circle, f, f.tangents[0]) == Catch::Approx(0.5));

    ImplicitSurface sphere = sphere_surface(Vec::Zero(3), 3.0);
    Rng rng(2);
    for (int i = 0; i < 10; ++i) {
        Vec x = 3.0 * rng.unit_vec(3);
        TangentFrame fr = tangent_frame(sphere, x);
        for (const Vec& t : fr.tangents)
            CHECK(second_fundamental_form(sphere, fr, t) == Catch::Approx(1.0 / 3.0));
    }

    CHECK_THROWS_AS(second_fundamental_form(circle, f, f.normal), non_tangent_error);
}

TEST_CASE("second fundamental form matches the curve-tracing oracle") {
    ImplicitSurface ell = ellipse_surface(2.0, 1.0);
    auto psi = [&](const Vec& x) { return ell.psi(x); };
    Rng rng(3);
    for (int i = 0; i < 25; ++i) {
        double th = rng.uniform(0.0, 2.0 * M_PI);
        Vec x = v2(2.0 * std::cos(th), std::sin(th));
        TangentFrame f = tangent_frame(ell, x);
        double ii = second_fundamental_form(ell, f, f.tangents[0]);
        double oracle = oracles::curve_trace_sff(psi, x, f.normal, f.tangents[0]);
        CHECK(std::abs(ii - oracle) < 1e-4 * (1.0 + std::abs(oracle)));
    }
}

TEST_CASE("weingarten spectrum") {
    SECTION("circle and sphere") {
        ImplicitSurface circle = circle_surface(Vec::Zero(2), 2.0);
        auto ev = weingarten_spectrum(circle, v2(0, 2));
        REQUIRE(ev.size() == 1);
        CHECK(ev[0] == Catch::Approx(0.5).margin(1e-10));

        ImplicitSurface sphere = sphere_surface(Vec::Zero(3), 4.0);
        Rng rng(4);
        for (int i = 0; i < 50; ++i) {
            auto s = weingarten_spectrum(sphere, 4.0 * rng.unit_vec(3));
            REQUIRE(s.size() == 2);
            CHECK(std::abs(s[0] - 0.25) < 1e-10);
            CHECK(std::abs(s[1] - 0.25) < 1e-10);
        }
    }
    SECTION("ellipse endpoint curvature against discrete polyline oracle") {
        ImplicitSurface ell = ellipse_surface(2.0, 1.0);
        auto ev = weingarten_spectrum(ell, v2(2, 0));
        REQUIRE(ev.size() == 1);
        // dense parametric sampling near the vertex
        double h = 1e-3;
        Vec a = v2(2.0 * std::cos(-h), std::sin(-h));
        Vec b = v2(2.0, 0.0);
        Vec c = v2(2.0 * std::cos(h), std::sin(h));
        double kappa = std::abs(oracles::discrete_curvature(a, b, c));
        CHECK(kappa == Catch::Approx(2.0).margin(1e-4));
        CHECK(ev[0] == Catch::Approx(kappa).margin(1e-4));
    }
    SECTION("spectrum equals II along eigen-directions") {
        ImplicitSurface ell = ellipse_surface(2.0, 1.0);
        Vec x = v2(2.0 * std::cos(0.7), std::sin(0.7));
        TangentFrame f = tangent_frame(ell, x);
        auto ev = weingarten_spectrum(ell, x);
        CHECK(std::abs(second_fundamental_form(ell, f, f.tangents[0]) - ev[0]) < 1e-10);
    }
}

TEST_CASE("gauss inverse") {
    SECTION("circle closed form") {
        Vec c = v2(0.5, -0.25);
        ImplicitSurface circle = circle_surface(c, 2.0);
        Rng rng(5);
        for (int i = 0; i < 20; ++i) {
            Vec w = rng.unit_vec(2);
            CHECK((gauss_inverse(circle, w) - (c + 2.0 * w)).norm() < 1e-8);
        }
    }
    SECTION("sphere closed form") {
        ImplicitSurface sphere = sphere_surface(v3(1, 1, 1), 3.0);
        CHECK((gauss_inverse(sphere, v3(0, 0, 1)) - v3(1, 1, 4)).norm() < 1e-8);
    }
    SECTION("round trip on the ellipse") {
        ImplicitSurface ell = ellipse_surface(2.0, 1.0);
        Rng rng(6);
        for (int i = 0; i < 100; ++i) {
            Vec w = rng.unit_vec(2);
            Vec x = gauss_inverse(ell, w);
            CHECK((outward_normal(ell, x) - w).norm() < 1e-8);
        }
    }
    SECTION("round trip on a perturbed convex curve") {
        Rng gen(17);
        RadialCurve rc = random_convex_curve(gen);
        ImplicitSurface s = radial_curve_surface(rc);
        Rng rng(7);
        for (int i = 0; i < 50; ++i) {
            Vec w = rng.unit_vec(2);
            Vec x = gauss_inverse(s, w);
            CHECK((outward_normal(s, x) - w).norm() < 1e-8);
        }
    }
}

TEST_CASE("concentric circle curvature dominance") {
    ImplicitSurface inner = circle_surface(Vec::Zero(2), 1.0);
    ImplicitSurface outer = circle_surface(Vec::Zero(2), 2.0);
    Rng rng(8);
    for (int i = 0; i < 20; ++i) {
        Vec w = rng.unit_vec(2);
        TangentFrame fi = tangent_frame(inner, gauss_inverse(inner, w));
        TangentFrame fo = tangent_frame(outer, gauss_inverse(outer, w));
        double ii = second_fundamental_form(inner, fi, fi.tangents[0]);
        double io = second_fundamental_form(outer, fo, fo.tangents[0]);
        CHECK(ii > io);
    }
}

TEST_CASE("polyline convexity") {
    SECTION("regular 64-gon") {
        Polyline2D poly;
        poly.closed = true;
        for (int i = 0; i < 64; ++i) {
            double th = 2.0 * M_PI * i / 64;
            poly.points.push_back(v2(std::cos(th), std::sin(th)));
        }
        CHECK(polyline_convexity(poly).convex);
    }
    SECTION("dart with a reflex vertex") {
        Polyline2D poly;
        poly.closed = true;
        poly.points = {v2(0, 0), v2(2, 0), v2(1, 0.2), v2(1, 1)};
        ConvexityVerdict v = polyline_convexity(poly);
        CHECK_FALSE(v.convex);
        CHECK(v.witness_index >= 0);
    }
    SECTION("open or short curves rejected") {
        Polyline2D open_poly;
        open_poly.points = {v2(0, 0), v2(1, 0), v2(1, 1), v2(0, 1)};
        CHECK_THROWS_AS(polyline_convexity(open_poly), geometry_error);
        Polyline2D tri;
        tri.closed = true;
        tri.points = {v2(0, 0), v2(1, 0), v2(0, 1)};
        CHECK_THROWS_AS(polyline_convexity(tri), geometry_error);
    }
}
