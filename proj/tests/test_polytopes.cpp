#include <cmath>

#include <doctest.h>

#include "depthlab/polytopes.hpp"
#include "depthlab/rng.hpp"
#include "helpers.hpp"

using namespace depthlab;

namespace {

RandomPolytope unit_square() {
    Matrix v(4, 2);
    double pts[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 2; ++j) v.at(i, j) = pts[i][j];
    return RandomPolytope(std::move(v));
}

RandomPolytope cube_corners3() {
    Matrix v(8, 3);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 3; ++j) v.at(i, j) = (i >> j) & 1 ? 1.0 : -1.0;
    return RandomPolytope(std::move(v));
}

}  // namespace

TEST_CASE("membership: squares, separators, convex-combination certificates") {
    RandomPolytope sq = unit_square();
    Vec inside{0.25, 0.75};
    CHECK(membership(sq, inside).inside);
    Vec origin{0.0, 0.0};
    CHECK(membership(sq, origin).inside);  // vertex counts as inside

    Vec out{2.0, 0.5};
    MembershipResult r = membership(sq, out);
    REQUIRE_FALSE(r.inside);
    CHECK(r.separator[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::fabs(r.separator[1]) < 1e-9);
    CHECK(r.separation > 0.9);

    // 20 gaussian points in R^3; the average of four of them is inside
    PointCloud c = testhelp::random_cloud(3, 20, 99);
    RandomPolytope P(c.points);
    Vec avg(3, 0.0);
    for (int i = 0; i < 4; ++i) avg = add(avg, c.points.row_span(i));
    for (double& v : avg) v /= 4.0;
    CHECK(membership(P, avg).inside);
    CHECK(membership_lp(P, avg).inside);
}

TEST_CASE("membership LP path agrees with the planar hull path") {
    RngStream rng = RngStream::derive(31, 0);
    for (int rep = 0; rep < 10; ++rep) {
        PointCloud c = testhelp::random_cloud(2, 40, 500 + rep);
        RandomPolytope P(c.points);
        for (int q = 0; q < 20; ++q) {
            Vec x{rng.uniform(-2.5, 2.5), rng.uniform(-2.5, 2.5)};
            CHECK(membership(P, x).inside == membership_lp(P, x).inside);
        }
    }
}

TEST_CASE("every generator is inside; poking past a touching vertex exits") {
    PointCloud c = testhelp::random_cloud(3, 30, 7);
    RandomPolytope P(c.points);
    for (std::size_t i = 0; i < P.generator_count(); ++i)
        CHECK(membership(P, P.vertices.row_span(i)).inside);

    RngStream rng = RngStream::derive(8, 1);
    Vec u(3);
    double scale = 0.0;
    for (std::size_t i = 0; i < P.generator_count(); ++i)
        scale = std::max(scale, norm(P.vertices.row_span(i)));
    for (int rep = 0; rep < 20; ++rep) {
        rng.unit_sphere(u);
        std::size_t best = 0;
        for (std::size_t i = 1; i < P.generator_count(); ++i)
            if (dot(P.vertices.row_span(i), u) > dot(P.vertices.row_span(best), u)) best = i;
        Vec probe = add(P.vertices.row_span(best), scaled(u, 1e-3 * scale));
        CHECK_FALSE(membership(P, probe).inside);
    }
}

TEST_CASE("separator offsets match the support function (LP dual consistency)") {
    PointCloud c = testhelp::random_cloud(3, 25, 17);
    RandomPolytope P(c.points);
    RngStream rng = RngStream::derive(18, 2);
    Vec u(3);
    for (int rep = 0; rep < 200; ++rep) {
        rng.unit_sphere(u);
        double h = P.support(u);
        Vec x(3);
        for (std::size_t j = 0; j < 3; ++j) x[j] = u[j] * (h + 0.05);
        MembershipResult r = membership_lp(P, x);
        REQUIRE_FALSE(r.inside);
        // the dual certificate level equals the support value in its direction
        CHECK(r.dual_offset == doctest::Approx(P.support(r.separator)).epsilon(1e-8));
    }
}

TEST_CASE("symmetric polytopes: h(u) == h(-u) exactly") {
    PointCloud c = testhelp::random_cloud(3, 40, 23);
    RandomPolytope S(c.points, /*symmetric=*/true);
    RngStream rng = RngStream::derive(11, 3);
    Vec u(3);
    for (int rep = 0; rep < 50; ++rep) {
        rng.unit_sphere(u);
        Vec nu = scaled(u, -1.0);
        CHECK(S.support(u) == S.support(nu));
    }
    for (int rep = 0; rep < 20; ++rep) {
        Vec x{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        Vec nx = scaled(x, -1.0);
        CHECK(membership(S, x).inside == membership(S, nx).inside);
    }
}

TEST_CASE("hull and area in the plane") {
    RandomPolytope sq = unit_square();
    CHECK(area_2d(sq) == doctest::Approx(1.0).epsilon(1e-14));
    Matrix hull = hull_2d(sq);
    CHECK(hull.rows == 4);

    Matrix tri(3, 2);
    double pts[3][2] = {{0, 0}, {1, 0}, {0, 1}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) tri.at(i, j) = pts[i][j];
    CHECK(area_2d(RandomPolytope(std::move(tri))) == doctest::Approx(0.5).epsilon(1e-14));

    Matrix line(5, 2);
    for (int i = 0; i < 5; ++i) {
        line.at(i, 0) = i;
        line.at(i, 1) = 2.0 * i;
    }
    bool degenerate = false;
    CHECK(area_2d(RandomPolytope(std::move(line)), &degenerate) == 0.0);
    CHECK(degenerate);

    // 1000 uniform points in the unit disk: hull area within 5% of pi
    RngStream rng = RngStream::derive(5, 4);
    Matrix disk(1000, 2);
    for (int i = 0; i < 1000; ++i) {
        double r = std::sqrt(rng.uniform01());
        double a = rng.uniform(0.0, 6.283185307179586);
        disk.at(i, 0) = r * std::cos(a);
        disk.at(i, 1) = r * std::sin(a);
    }
    CHECK(area_2d(RandomPolytope(std::move(disk))) ==
          doctest::Approx(3.141592653589793).epsilon(0.05));
}

TEST_CASE("MC volume: cube, cross-polytope, degenerate slab") {
    RandomPolytope cube = cube_corners3();
    auto v = volume_mc(cube, 40000, 3);
    CHECK(std::fabs(v.value - 8.0) <= 3.0 * std::max(v.std_error, 1e-12));

    Matrix cross(6, 3, 0.0);
    for (int j = 0; j < 3; ++j) {
        cross.at(2 * j, j) = 1.0;
        cross.at(2 * j + 1, j) = -1.0;
    }
    RandomPolytope cp(std::move(cross));
    auto vc = volume_mc(cp, 60000, 4);
    CHECK(std::fabs(vc.value - 4.0 / 3.0) <= 3.0 * vc.std_error);

    Matrix flat(3, 3, 0.0);
    flat.at(1, 0) = 1.0;
    flat.at(2, 1) = 1.0;
    auto vf = volume_mc(RandomPolytope(std::move(flat)), 20000, 5);
    CHECK(vf.value <= 1e-3);
}

TEST_CASE("2D MC volume agrees with the exact shoelace area") {
    for (int rep = 0; rep < 50; ++rep) {
        PointCloud c = testhelp::random_cloud(2, 30, 900 + rep);
        RandomPolytope P(c.points);
        double exact = area_2d(P);
        auto mc = volume_mc(P, 4000, 1000 + rep);
        CHECK(std::fabs(mc.value - exact) <= 3.0 * std::max(mc.std_error, 1e-12));
    }
}

TEST_CASE("w_q: sphere cloud, cube corners, power-mean monotonicity") {
    RngStream rng = RngStream::derive(44, 6);
    Matrix dirs(10000, 2);
    Vec u(2);
    for (int i = 0; i < 10000; ++i) {
        rng.unit_sphere(u);
        dirs.at(i, 0) = u[0];
        dirs.at(i, 1) = u[1];
    }
    RandomPolytope ball_like(std::move(dirs));
    CHECK(w_q(ball_like, 1.0, 20000, 7) == doctest::Approx(1.0).epsilon(0.02));

    Matrix sq(4, 2);
    double pts[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 2; ++j) sq.at(i, j) = pts[i][j];
    RandomPolytope cube2(std::move(sq));
    // (1/2pi) int (|cos| + |sin|) = 4/pi
    CHECK(w_q(cube2, 1.0, 200000, 8) == doctest::Approx(1.2732395447351628).epsilon(0.01));
    CHECK(w_q(cube2, 1.0, 50000, 9) <= w_q(cube2, 2.0, 50000, 9) + 1e-12);

    Matrix off(3, 2);
    double pts2[3][2] = {{1, 0}, {2, 0}, {1.5, 1}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) off.at(i, j) = pts2[i][j];
    RandomPolytope shifted(std::move(off));
    CHECK_THROWS_AS(w_q(shifted, -1.0, 5000, 10), DegenerateInput);
}

TEST_CASE("volume_mc seed determinism") {
    Matrix cross(6, 3, 0.0);
    for (int j = 0; j < 3; ++j) {
        cross.at(2 * j, j) = 1.0;
        cross.at(2 * j + 1, j) = -1.0;
    }
    RandomPolytope cp(std::move(cross));
    auto a = volume_mc(cp, 10000, 42);
    auto b = volume_mc(cp, 10000, 42);
    CHECK(a.value == b.value);
    auto c = volume_mc(cp, 10000, 43);
    CHECK(a.value != c.value);
}
