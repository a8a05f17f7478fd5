#include <cmath>

#include <doctest.h>

#include "depthlab/depth.hpp"
#include "depthlab/grids.hpp"
#include "depthlab/numerics.hpp"
#include "depthlab/rng.hpp"
#include "helpers.hpp"

using namespace depthlab;

namespace {

PointCloud plus_cloud() {
    PointCloud c;
    c.points = Matrix(4, 2);
    double pts[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 2; ++j) c.points.at(i, j) = pts[i][j];
    return c;
}

PointCloud triangle_cloud() {
    PointCloud c;
    c.points = Matrix(3, 2);
    double pts[3][2] = {{0, 0}, {1, 0}, {0, 1}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) c.points.at(i, j) = pts[i][j];
    return c;
}

}  // namespace

TEST_CASE("planar sweep: symmetric four-point cloud") {
    PointCloud c = plus_cloud();
    Vec origin{0.0, 0.0};
    DepthEstimate d = depth_empirical_2d(c, origin);
    CHECK(d.method == DepthMethod::exact_2d);
    CHECK(d.lower == d.upper);
    CHECK(d.upper == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("planar sweep: hull vertex has depth 1/N, barycenter of a triangle 1/3") {
    PointCloud c = testhelp::random_cloud(2, 25, 4711);
    // find the point with the largest x-coordinate: a hull vertex in general position
    std::size_t best = 0;
    for (std::size_t i = 1; i < c.count(); ++i)
        if (c.points.at(i, 0) > c.points.at(best, 0)) best = i;
    Vec v = c.points.row_vec(best);
    CHECK(depth_empirical_2d(c, v).upper == doctest::Approx(1.0 / 25.0).epsilon(1e-15));

    PointCloud tri = triangle_cloud();
    Vec bary{1.0 / 3.0, 1.0 / 3.0};
    CHECK(depth_empirical_2d(tri, bary).upper == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("planar sweep equals the O(N^2) brute force on random clouds") {
    RngStream rng = RngStream::derive(2024, 0);
    for (int rep = 0; rep < 25; ++rep) {
        std::size_t N = 5 + (std::size_t)(rng.uniform01() * 35);
        PointCloud c = testhelp::random_cloud(2, N, 1000 + rep);
        for (int xq = 0; xq < 3; ++xq) {
            Vec x(2);
            if (xq == 0) {
                x = {0.0, 0.0};
            } else if (xq == 1) {
                x = c.points.row_vec(rep % N);  // depth at a data point
            } else {
                x = {rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
            }
            double sweep = depth_empirical_2d(c, x).upper;
            double brute = testhelp::brute_force_depth_2d(c, x);
            CHECK(sweep == brute);  // exact equality, same predicate family
        }
    }
}

TEST_CASE("coincident points count toward every half-plane") {
    PointCloud c;
    c.points = Matrix(4, 2);
    double pts[4][2] = {{0, 0}, {0, 0}, {1, 0}, {2, 0}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 2; ++j) c.points.at(i, j) = pts[i][j];
    Vec x{0.0, 0.0};
    // the two coincident points always count; the halfplane x <= 0 excludes the rest
    CHECK(depth_empirical_2d(c, x).upper == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("analytic depth: gaussian closed form") {
    MeasureSpec g3 = MeasureSpec::gaussian(3);
    Vec zero{0.0, 0.0, 0.0};
    DepthEstimate d0 = depth_analytic(g3, zero);
    CHECK(d0.upper == 0.5);
    CHECK(d0.lower == 0.5);

    MeasureSpec g2 = MeasureSpec::gaussian(2);
    Vec x{0.6, 0.8};  // |x| = 1
    DepthEstimate d1 = depth_analytic(g2, x);
    CHECK(d1.upper == doctest::Approx(0.15865525393145707).epsilon(1e-12));
    CHECK(d1.lower == d1.upper);
}

TEST_CASE("analytic depth: cube worst direction is axis-aligned at (0.5, 0)") {
    MeasureSpec cube2 = MeasureSpec::cube(2);
    Vec x{0.5, 0.0};
    DirectionBudget budget;
    budget.grid = 512;
    DepthEstimate d = depth_analytic(cube2, x, budget);
    CHECK(d.upper == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(d.method == DepthMethod::direction_grid);
    CHECK(d.lower <= d.upper);
    CHECK(d.lower > 0.1);  // modulus slack stays sane on a 512 grid
    CHECK(depth_lower_certified(cube2, x, 512) == d.lower);

    // brute-force fine grid oracle with the exact marginal masses
    Matrix dirs = direction_grid(2, 10000, 0);
    double best = 1.0;
    for (std::size_t i = 0; i < dirs.rows; ++i) {
        auto u = dirs.row_span(i);
        best = std::min(best, halfspace_mass(cube2, u, dot(x, u)).value);
    }
    CHECK(d.upper == doctest::Approx(best).epsilon(1e-6));
}

TEST_CASE("analytic depth: heavy-tail families use dual-norm reductions") {
    MeasureSpec cauchy2 = MeasureSpec::cauchy(2);
    Vec x{1.0, 0.25};
    DepthEstimate d = depth_analytic(cauchy2, x);
    CHECK(d.upper == doctest::Approx(0.5 - std::atan(1.0) / 3.141592653589793).epsilon(1e-12));
    // grid search over exact cauchy masses agrees
    Matrix dirs = direction_grid(2, 4000, 0);
    double best = 1.0;
    for (std::size_t i = 0; i < dirs.rows; ++i) {
        auto u = dirs.row_span(i);
        best = std::min(best, halfspace_mass(cauchy2, u, dot(x, u)).value);
    }
    CHECK(d.upper == doctest::Approx(best).epsilon(1e-5));

    MeasureSpec pareto3 = MeasureSpec::pareto(3, 2.5);
    Vec y{0.3, -0.4, 1.2};
    DepthEstimate dp = depth_analytic(pareto3, y);
    CHECK(dp.upper == doctest::Approx(radial_marginal_tail(pareto3, norm(y))).epsilon(1e-12));
    CHECK(dp.lower == dp.upper);
}

TEST_CASE("affine equivariance of analytic depth") {
    MeasureSpec base = MeasureSpec::gaussian(2);
    MeasureSpec aff = base;
    AffineMap map;
    map.A = Matrix(2, 2);
    map.A.at(0, 0) = 2.0;
    map.A.at(0, 1) = 0.5;
    map.A.at(1, 0) = 0.0;
    map.A.at(1, 1) = 1.0;
    map.b = {1.0, -2.0};
    aff.affine = map;
    RngStream rng = RngStream::derive(5, 5);
    for (int rep = 0; rep < 10; ++rep) {
        Vec z{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        Vec gz = add(mat_vec(map.A, z), map.b);
        CHECK(depth_analytic(aff, gz).upper ==
              doctest::Approx(depth_analytic(base, z).upper).epsilon(1e-12));
    }
}

TEST_CASE("max depth and the Rado bound") {
    auto g3 = max_depth(MeasureSpec::gaussian(3));
    CHECK(g3.point == Vec{0.0, 0.0, 0.0});
    CHECK(g3.p_mu == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    auto tri = max_depth(MeasureSpec::empirical_cloud(triangle_cloud()));
    CHECK(tri.depth == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(tri.p_mu == doctest::Approx(std::log(3.0)).epsilon(1e-9));

    // Rado: max depth >= 1/(n+1) - tol for every family, n <= 4
    for (int n : {2, 3, 4}) {
        std::vector<MeasureSpec> specs = {MeasureSpec::gaussian(n), MeasureSpec::cube(n),
                                          MeasureSpec::cauchy(n), MeasureSpec::pareto(n, 2.5),
                                          MeasureSpec::qstable(n, 1.5),
                                          MeasureSpec::body(n, BodyShape::ball, 1.0)};
        for (const auto& spec : specs) {
            auto md = max_depth(spec);
            CHECK(md.depth >= 1.0 / (n + 1.0) - 0.02);
        }
    }
    auto tri2 = max_depth(MeasureSpec::empirical_cloud(triangle_cloud()));
    CHECK(tri2.depth >= 1.0 / 3.0 - 1e-12);
}

TEST_CASE("U_p membership") {
    MeasureSpec g2 = MeasureSpec::gaussian(2);
    Vec zero{0.0, 0.0};
    CHECK(up_membership(g2, 1.0, zero));

    // around the boundary mass({x >= 2}) = Phi(-2): definite on both sides,
    // and the exact boundary passes the non-strict test whenever the strict
    // one does (strict implies non-strict)
    MeasureSpec g1 = MeasureSpec::gaussian(1);
    Vec y{0.5};  // tests the half-space { x >= 2 }
    double p_below = -std::log(num::normal_sf(1.99));  // e^{-p} slightly above the mass
    CHECK(up_membership(g1, p_below, y));
    CHECK(up_membership(g1, p_below, y, /*strict=*/true));
    double p_above = -std::log(num::normal_sf(2.01));  // e^{-p} slightly below the mass
    CHECK_FALSE(up_membership(g1, p_above, y));
    CHECK_FALSE(up_membership(g1, p_above, y, /*strict=*/true));
    double p_exact = -std::log(num::normal_sf(2.0));
    if (up_membership(g1, p_exact, y, /*strict=*/true)) CHECK(up_membership(g1, p_exact, y));

    MeasureSpec cube1 = MeasureSpec::cube(1);
    Vec y2{2.0};
    CHECK_FALSE(up_membership(cube1, 10.0, y2));  // mass({x >= 1/2}) = 1/4 > e^{-10}
}

TEST_CASE("tukey region: gaussian degenerates at p = ln 2 and is a ball at p = 1") {
    MeasureSpec g2 = MeasureSpec::gaussian(2);
    RegionParams params;
    params.grid = 64;
    ConvexBodyApprox degenerate = tukey_region(g2, std::log(2.0), params);
    CHECK(degenerate.outer_radius() <= 1e-6);

    double p = -std::log(num::normal_sf(1.0));  // T_p radius is exactly 1
    ConvexBodyApprox ball = tukey_region(g2, p, params);
    for (std::size_t i = 0; i < ball.boundary_points.rows; ++i) {
        double r = norm(sub(ball.boundary_points.row_span(i), ball.center));
        CHECK(r == doctest::Approx(1.0).epsilon(0.01));
    }
    CHECK_THROWS_AS(tukey_region(g2, 0.5 * std::log(2.0), params), EmptyLevelSet);
}

TEST_CASE("tukey region of the triangle cloud recovers the triangle") {
    MeasureSpec emp = MeasureSpec::empirical_cloud(triangle_cloud());
    RegionParams params;
    params.grid = 256;
    ConvexBodyApprox body = tukey_region(emp, std::log(3.0), params);
    // centered at the lowest-index max-depth vertex (0,0)
    CHECK(body.center == Vec{0.0, 0.0});
    // the ray through (1,0) reaches the far vertex; grid direction 0 is e_1
    double r_e1 = norm(sub(body.boundary_points.row_span(0), body.center));
    CHECK(r_e1 == doctest::Approx(1.0).epsilon(2e-3));
    // no boundary point escapes the triangle by more than the bisection slack
    for (std::size_t i = 0; i < body.boundary_points.rows; ++i) {
        double x = body.boundary_points.at(i, 0), y = body.boundary_points.at(i, 1);
        CHECK(x >= -1e-9);
        CHECK(y >= -1e-9);
        CHECK(x + y <= 1.0 + 2e-3);
    }
}

TEST_CASE("level sets are nested across p") {
    MeasureSpec g2 = MeasureSpec::gaussian(2);
    RegionParams params;
    params.grid = 64;
    ConvexBodyApprox small = tukey_region(g2, 1.0, params);
    ConvexBodyApprox large = tukey_region(g2, 2.0, params);
    for (std::size_t i = 0; i < small.boundary_points.rows; ++i)
        CHECK(large.inside_outer(small.boundary_points.row_span(i), 1e-9));
}

TEST_CASE("affine equivariance of tukey regions on matched grids") {
    MeasureSpec base = MeasureSpec::gaussian(2);
    MeasureSpec aff = base;
    AffineMap map;
    map.A = Matrix(2, 2);
    map.A.at(0, 0) = 1.5;
    map.A.at(0, 1) = 0.4;
    map.A.at(1, 0) = -0.3;
    map.A.at(1, 1) = 1.0;
    map.b = {0.7, 0.2};
    aff.affine = map;

    const double p = 2.0;
    RegionParams params;
    params.grid = 48;
    ConvexBodyApprox base_body = tukey_region(base, p, params);
    // matched grid: images of the base directions
    Matrix pushed_dirs(base_body.grid.rows, 2);
    for (std::size_t i = 0; i < base_body.grid.rows; ++i) {
        Vec v = mat_vec(map.A, base_body.grid.row_span(i));
        Vec nv = normalized(v);
        pushed_dirs.at(i, 0) = nv[0];
        pushed_dirs.at(i, 1) = nv[1];
    }
    ConvexBodyApprox pushed = tukey_region(aff, p, pushed_dirs, params);
    for (std::size_t i = 0; i < base_body.boundary_points.rows; ++i) {
        Vec want = add(mat_vec(map.A, base_body.boundary_points.row_span(i)), map.b);
        Vec got = pushed.boundary_points.row_vec(i);
        CHECK(norm(sub(got, want)) <= 0.02 * (1.0 + norm(want)));
    }
}

TEST_CASE("strict U_p members stay in the polar of the level set") {
    // T_p = (V_p)^polar: every y with mu({<z,y> >= 1}) < e^{-p} must satisfy
    // <x, y> <= 1 for all points of T_p.
    for (int n : {2, 3}) {
        std::vector<MeasureSpec> specs = {MeasureSpec::gaussian(n), MeasureSpec::cube(n)};
        for (const auto& spec : specs) {
            for (double p : {1.0, 2.0, 3.0}) {
                RegionParams params;
                params.grid = n == 2 ? 64 : 128;
                ConvexBodyApprox body = tukey_region(spec, p, params);
                RngStream rng = RngStream::derive(77, (std::uint64_t)(n * 10 + (int)p));
                Vec u((std::size_t)n);
                for (int rep = 0; rep < 40; ++rep) {
                    rng.unit_sphere(u);
                    // find the critical radius where the halfspace mass is e^{-p}
                    double lo = 1e-3, hi = 1e3;
                    for (int it = 0; it < 60; ++it) {
                        double mid = 0.5 * (lo + hi);
                        if (halfspace_mass(spec, u, mid).value > std::exp(-p)) lo = mid;
                        else hi = mid;
                    }
                    for (double slack : {1.02, 1.2, 2.0}) {
                        double t = hi * slack;  // mass at t strictly below e^{-p}
                        Vec y = scaled(u, 1.0 / t);
                        if (!up_membership(spec, p, y, /*strict=*/true)) continue;
                        for (std::size_t i = 0; i < body.boundary_points.rows; ++i)
                            CHECK(dot(body.boundary_points.row_span(i), y) <= 1.0 + 0.02);
                    }
                }
            }
        }
    }
}

TEST_CASE("ConvexBodyApprox JSON round trip and internal consistency") {
    MeasureSpec g2 = MeasureSpec::gaussian(2);
    RegionParams params;
    params.grid = 32;
    ConvexBodyApprox body = tukey_region(g2, 1.5, params);
    // support dominates its own boundary dots
    for (std::size_t i = 0; i < body.grid.rows; ++i)
        CHECK(dot(body.boundary_points.row_span(i), body.grid.row_span(i)) <=
              body.support_values[i] + 1e-12);
    nlohmann::json j = body.to_json();
    ConvexBodyApprox back = ConvexBodyApprox::from_json(j);
    CHECK(back.grid.data == body.grid.data);
    CHECK(back.boundary_points.data == body.boundary_points.data);
    CHECK(back.support_values == body.support_values);
    CHECK(back.p == body.p);
}
