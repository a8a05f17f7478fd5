#include <algorithm>
#include <cmath>

#include "depthlab/bodies.hpp"
#include "depthlab/grids.hpp"
#include "depthlab/kernels.hpp"
#include "depthlab/numerics.hpp"
#include "depthlab/rng.hpp"
#include "depthlab/simplex.hpp"

namespace depthlab {

namespace {
constexpr double kPi = 3.14159265358979323846;

// E max(g,0)^p for standard normal g.
double gaussian_pos_moment(double p) {
    return std::exp((0.5 * p - 1.0) * std::log(2.0) + std::lgamma(0.5 * (p + 1.0)) -
                    0.5 * std::log(kPi));
}

// E max(theta_1,0)^p for a uniform direction on S^{n-1}.
double sphere_pos_moment(int n, double p) {
    if (n == 1) return 0.5;
    return 0.5 * std::exp(num::log_beta(0.5 * (p + 1.0), 0.5 * (n - 1)) -
                          num::log_beta(0.5, 0.5 * (n - 1)));
}

// E max(x_1,0)^p for a uniform point in the unit n-ball.
double ball_pos_moment(int n, double p) {
    return 0.5 * std::exp(num::log_beta(0.5 * (p + 1.0), 0.5 * (n + 1)) -
                          num::log_beta(0.5, 0.5 * (n + 1)));
}

double zp_support_base(const MeasureSpec& spec, double p, std::span<const double> unit_y,
                       std::size_t mc_budget, std::uint64_t seed) {
    const int n = spec.dim;
    switch (spec.family) {
        case Family::gaussian_std:
            return std::pow(gaussian_pos_moment(p), 1.0 / p);
        case Family::uniform_cube: {
            double W = 0.0;
            for (double v : unit_y) W += std::fabs(v);
            if (W == 0.0) return 0.0;
            auto integrand = [&](double t) {
                auto tail = num::uniform_sum_tail(unit_y, t);
                return p * std::pow(t, p - 1.0) * (tail ? *tail : 0.0);
            };
            auto q = num::integrate(integrand, 0.0, W, 1e-13, 1e-9);
            return std::pow(std::max(q.value, 0.0), 1.0 / p);
        }
        case Family::uniform_body: {
            const double r = spec.body_radius;
            if (spec.body_shape == BodyShape::ball)
                return r * std::pow(ball_pos_moment(n, p), 1.0 / p);
            MeasureSpec cube = MeasureSpec::cube(n);
            return r * zp_support_base(cube, p, unit_y, mc_budget, seed);
        }
        case Family::sconcave_pareto: {
            if (p >= spec.kappa)
                throw UnsupportedOperation("zp_plus_support: infinite moment, p >= kappa");
            double radial = std::exp(num::log_beta(n + p, spec.kappa - p) -
                                     num::log_beta((double)n, spec.kappa));
            return std::pow(radial * sphere_pos_moment(n, p), 1.0 / p);
        }
        case Family::product_cauchy:
            throw UnsupportedOperation("zp_plus_support: infinite moment, p >= q = 1");
        case Family::product_qstable: {
            if (p >= spec.q)
                throw UnsupportedOperation("zp_plus_support: infinite moment, p >= q");
            double scale = 0.0;
            for (double v : unit_y) scale += std::pow(std::fabs(v), spec.q);
            scale = std::pow(scale, 1.0 / spec.q);
            RngStream rng = RngStream::derive(seed ^ 0x2b0dULL, 5);
            double acc = 0.0;
            for (std::size_t i = 0; i < mc_budget; ++i) {
                double s = rng.stable_symmetric(spec.q);
                if (s > 0.0) acc += std::pow(s, p);
            }
            return scale * std::pow(acc / (double)mc_budget, 1.0 / p);
        }
        case Family::empirical: {
            const PointCloud& c = *spec.cloud;
            std::vector<double> dots(c.count());
            kernels::dot_batch(c.points.data.data(), c.count(), c.n(), unit_y.data(),
                               dots.data());
            double s = kernels::sum_pos_pow(dots.data(), dots.size(), p);
            return std::pow(s / (double)c.count(), 1.0 / p);
        }
    }
    throw ConfigError("zp_plus_support: unknown family");
}

double zp_support_mc(const MeasureSpec& spec, double p, std::span<const double> y,
                     std::size_t mc_budget, std::uint64_t seed) {
    PointCloud cloud = sample(spec, mc_budget, splitmix64(seed ^ 0x9177ULL));
    std::vector<double> dots(cloud.count());
    kernels::dot_batch(cloud.points.data.data(), cloud.count(), cloud.n(), y.data(), dots.data());
    double s = kernels::sum_pos_pow(dots.data(), dots.size(), p);
    return std::pow(s / (double)cloud.count(), 1.0 / p);
}

}  // namespace

double zp_plus_support(const MeasureSpec& spec, double p, std::span<const double> y,
                       std::size_t mc_budget, std::uint64_t seed) {
    if (p < 1.0) throw ConfigError("zp_plus_support requires p >= 1");
    if ((int)y.size() != spec.dim) throw ConfigError("zp_plus_support: dimension mismatch");
    double ny = norm(y);
    if (ny == 0.0) return 0.0;
    Vec u = scaled(y, 1.0 / ny);
    if (spec.affine) {
        // <A X + b, y>_+ = (<X, A^T y> + <b, y>)_+
        if (spec.heavy_tailed()) {
            // moment preconditions still apply
            if ((spec.family == Family::product_qstable && p >= spec.q) ||
                (spec.family == Family::sconcave_pareto && p >= spec.kappa) ||
                spec.family == Family::product_cauchy)
                throw UnsupportedOperation("zp_plus_support: infinite moment");
        }
        bool shifted = false;
        for (double v : spec.affine->b)
            if (v != 0.0) shifted = true;
        if (!shifted) {
            Vec v = mat_tvec(spec.affine->A, u);
            MeasureSpec base = spec;
            base.affine.reset();
            return ny * zp_plus_support(base, p, v, mc_budget, seed);
        }
        return ny * zp_support_mc(spec, p, u, mc_budget, seed);
    }
    return ny * zp_support_base(spec, p, u, mc_budget, seed);
}

double zp_plus_support(const PointCloud& cloud, double p, std::span<const double> y) {
    return zp_plus_support(MeasureSpec::empirical_cloud(cloud), p, y);
}

ConvexBodyApprox zp_plus_body(const MeasureSpec& spec, double p, const Matrix& directions,
                              std::size_t mc_budget, std::uint64_t seed) {
    const int n = spec.dim;
    const std::size_t M = directions.rows;
    ConvexBodyApprox body;
    body.grid = directions;
    body.center.assign((std::size_t)n, 0.0);
    body.p = p;
    body.boundary_points = Matrix(M, (std::size_t)n);
    body.support_values.assign(M, 0.0);

    auto h = [&](std::span<const double> u) {
        return zp_plus_support(spec, p, u, mc_budget, seed);
    };

    // Full-dimensionality guard (Claim 4.1 hypothesis): the width
    // h(u) + h(-u) must be positive in every probed direction.
    double min_width = std::numeric_limits<double>::infinity();

    std::vector<double> hs(M);
    parallel_for(M, [&](std::size_t i) { hs[i] = h(directions.row_span(i)); });
    for (std::size_t i = 0; i < M; ++i) {
        Vec nu = scaled(directions.row_span(i), -1.0);
        double hneg = h(nu);
        min_width = std::min(min_width, hs[i] + hneg);
        if (min_width <= 1e-12)
            throw DegenerateInput("zp_plus_body: source concentrates on a hyperplane");
        body.support_values[i] = hs[i];
    }

    const bool radial_contacts = spec.spherically_symmetric();
    const double delta = 1e-5;
    parallel_for(M, [&](std::size_t i) {
        auto u = directions.row_span(i);
        if (radial_contacts) {
            for (int j = 0; j < n; ++j) body.boundary_points.at(i, j) = hs[i] * u[j];
            return;
        }
        // Contact point = gradient of the 1-homogeneous support function:
        // h(u) u plus the tangential derivative along an orthonormal frame.
        Vec contact((std::size_t)n, 0.0);
        for (int j = 0; j < n; ++j) contact[j] = hs[i] * u[j];
        std::vector<Vec> frame;
        for (int axis = 0; axis < n && (int)frame.size() < n - 1; ++axis) {
            Vec t((std::size_t)n, 0.0);
            t[axis] = 1.0;
            double proj = dot(t, u);
            for (int j = 0; j < n; ++j) t[j] -= proj * u[j];
            for (const Vec& f : frame) {
                double pr = dot(t, f);
                for (int j = 0; j < n; ++j) t[j] -= pr * f[j];
            }
            double nt = norm(t);
            if (nt < 1e-8) continue;
            for (double& v : t) v /= nt;
            frame.push_back(std::move(t));
        }
        for (const Vec& t : frame) {
            Vec up((std::size_t)n), dn((std::size_t)n);
            for (int j = 0; j < n; ++j) {
                up[j] = std::cos(delta) * u[j] + std::sin(delta) * t[j];
                dn[j] = std::cos(delta) * u[j] - std::sin(delta) * t[j];
            }
            double dh = (h(up) - h(dn)) / (2.0 * std::sin(delta));
            for (int j = 0; j < n; ++j) contact[j] += dh * t[j];
        }
        for (int j = 0; j < n; ++j) body.boundary_points.at(i, j) = contact[j];
    });
    return body;
}

ConvexBodyApprox zp_plus_body(const MeasureSpec& spec, double p, std::size_t grid,
                              std::uint64_t grid_seed) {
    std::size_t M = grid ? grid : default_grid_size(spec.dim);
    return zp_plus_body(spec, p, direction_grid(spec.dim, M, grid_seed));
}

// ---------------------------------------------------------------------------
// Cramer transform
// ---------------------------------------------------------------------------

namespace {

// Lambda* is finite exactly on the closed convex hull of the support (and is
// +inf on the boundary for the absolutely continuous families). The hull is
// known per family, so divergence is classified exactly and carries a
// certificate direction of linear growth.
bool outside_support_hull(const MeasureSpec& spec, std::span<const double> x, Vec* dir) {
    const int n = spec.dim;
    if (spec.affine) {
        Matrix inv = invert_matrix(spec.affine->A);
        Vec z = mat_vec(inv, sub(x, spec.affine->b));
        MeasureSpec base = spec;
        base.affine.reset();
        Vec base_dir;
        if (!outside_support_hull(base, z, &base_dir)) return false;
        // <z, u> > h(u) maps to the direction A^{-T} u in the ambient space
        Vec mapped = mat_tvec(inv, base_dir);
        *dir = normalized(mapped);
        return true;
    }
    switch (spec.family) {
        case Family::gaussian_std: return false;  // full support
        case Family::uniform_cube:
        case Family::uniform_body: {
            if (spec.family == Family::uniform_body && spec.body_shape == BodyShape::ball) {
                double r = norm(x);
                if (r < spec.body_radius) return false;
                *dir = scaled(x, 1.0 / r);
                return true;
            }
            double a = spec.family == Family::uniform_cube ? 1.0 : spec.body_radius;
            int worst = -1;
            double m = 0.0;
            for (int j = 0; j < n; ++j)
                if (std::fabs(x[j]) > m) {
                    m = std::fabs(x[j]);
                    worst = j;
                }
            if (m < a) return false;
            dir->assign((std::size_t)n, 0.0);
            (*dir)[worst] = x[worst] > 0 ? 1.0 : -1.0;
            return true;
        }
        case Family::empirical: {
            RandomPolytope hull(spec.cloud->points);
            MembershipResult m = membership(hull, x);
            if (m.inside) return false;
            *dir = m.separator;
            return true;
        }
        default: return false;  // heavy tails have no log-Laplace at all
    }
}

}  // namespace

CramerResult cramer_transform_ascent(const MeasureSpec& spec, std::span<const double> x,
                                     const CramerParams& params) {
    if (!spec.has_log_laplace())
        throw UnsupportedOperation("cramer_transform: measure has no finite log-Laplace");
    const int n = spec.dim;
    CramerResult res;
    {
        Vec cert;
        if (outside_support_hull(spec, x, &cert)) {
            res.finite = false;
            res.value = std::numeric_limits<double>::infinity();
            res.certificate_dir = std::move(cert);
            res.xi.assign((std::size_t)n, 0.0);
            return res;
        }
    }
    Vec xi((std::size_t)n, 0.0);
    double fval = 0.0;  // f(0) = -Lambda(0) = 0
    auto objective = [&](const Vec& z) { return dot(x, std::span<const double>(z)) -
                                                log_laplace(spec, z); };
    for (int it = 0; it < params.max_iters; ++it) {
        Vec grad = log_laplace_gradient(spec, xi);
        for (int j = 0; j < n; ++j) grad[j] = x[j] - grad[j];
        double gn = norm(grad);
        if (gn < params.grad_tol) {
            res.converged = true;
            break;
        }
        double step = params.initial_step;
        bool moved = false;
        for (int bt = 0; bt < 60; ++bt) {
            Vec cand = xi;
            for (int j = 0; j < n; ++j) cand[j] += step * grad[j];
            double fc = objective(cand);
            if (std::isfinite(fc) && fc > fval + 1e-4 * step * gn * gn) {
                xi = std::move(cand);
                fval = fc;
                moved = true;
                break;
            }
            step *= params.backtrack;
        }
        if (!moved) break;  // no ascent direction at line-search resolution
        if (fval > params.early_exit_above) break;
        if (norm(xi) > 1e8 || fval > 1e10) {
            res.finite = false;
            res.certificate_dir = normalized(xi);
            break;
        }
    }
    res.value = std::max(fval, 0.0);
    res.xi = std::move(xi);
    return res;
}

namespace {

// 1D Legendre transform of ln(sinh z / z): the derivative coth(z) - 1/z is a
// strictly increasing bijection onto (-1, 1), solved by bisection. Sets
// *arg to the achieving (signed) dual point.
double cube_rate_1d(double a, double* arg = nullptr) {
    if (arg) *arg = 0.0;
    if (std::fabs(a) >= 1.0) return std::numeric_limits<double>::infinity();
    if (a == 0.0) return 0.0;
    auto deriv = [](double z) {
        if (std::fabs(z) < 1e-6) return z / 3.0;
        return 1.0 / std::tanh(z) - 1.0 / z;
    };
    double lo = 0.0, hi = 1.0;
    double aa = std::fabs(a);
    while (deriv(hi) < aa) {
        hi *= 2.0;
        if (hi > 1e12) break;
    }
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (deriv(mid) < aa) lo = mid;
        else hi = mid;
    }
    double z = 0.5 * (lo + hi);
    double lsg;
    if (z < 1e-6) lsg = z * z / 6.0;
    else if (z > 30.0) lsg = z - std::log(2.0 * z) + std::log1p(-std::exp(-2.0 * z));
    else lsg = std::log(std::sinh(z) / z);
    if (arg) *arg = a > 0 ? z : -z;
    return aa * z - lsg;
}

}  // namespace

CramerResult cramer_transform(const MeasureSpec& spec, std::span<const double> x,
                              const CramerParams& params) {
    if ((int)x.size() != spec.dim) throw ConfigError("cramer_transform: dimension mismatch");
    if (spec.affine) {
        // Legendre transforms compose with affine maps by pulling x back.
        Matrix inv = invert_matrix(spec.affine->A);
        Vec z = mat_vec(inv, sub(x, spec.affine->b));
        MeasureSpec base = spec;
        base.affine.reset();
        CramerResult res = cramer_transform(base, z, params);
        if (res.finite && !res.xi.empty()) res.xi = mat_tvec(inv, res.xi);
        if (!res.finite && !res.certificate_dir.empty())
            res.certificate_dir = normalized(mat_tvec(inv, res.certificate_dir));
        return res;
    }
    if (spec.family == Family::gaussian_std) {
        CramerResult res;
        res.value = 0.5 * dot(x, x);
        res.xi = Vec(x.begin(), x.end());
        res.converged = true;
        return res;
    }
    const bool cube_like =
        spec.family == Family::uniform_cube ||
        (spec.family == Family::uniform_body && spec.body_shape == BodyShape::cube);
    if (cube_like) {
        // Separable: Lambda*(x) = sum_i rate(x_i / a), a the half width.
        const double a = spec.family == Family::uniform_cube ? 1.0 : spec.body_radius;
        CramerResult res;
        res.converged = true;
        res.xi.assign(x.size(), 0.0);
        double total = 0.0;
        for (std::size_t ci = 0; ci < x.size(); ++ci) {
            double xi_c = x[ci];
            double z = 0.0;
            double r = cube_rate_1d(xi_c / a, &z);
            res.xi[ci] = z / a;
            if (!std::isfinite(r)) {
                res.finite = false;
                res.value = std::numeric_limits<double>::infinity();
                Vec cert;
                if (outside_support_hull(spec, x, &cert)) {
                    res.certificate_dir = std::move(cert);
                } else {
                    // exact boundary point: the growth direction is the
                    // saturated coordinate
                    res.certificate_dir.assign(x.size(), 0.0);
                    for (std::size_t j = 0; j < x.size(); ++j)
                        if (std::fabs(x[j]) >= a)
                            res.certificate_dir[j] = x[j] > 0 ? 1.0 : -1.0;
                    double nn = norm(res.certificate_dir);
                    if (nn > 0)
                        for (double& v : res.certificate_dir) v /= nn;
                }
                return res;
            }
            total += r;
        }
        res.value = total;
        return res;
    }
    return cramer_transform_ascent(spec, x, params);
}

ConvexBodyApprox bp_level_set(const MeasureSpec& spec, double p, const Matrix& directions,
                              const RegionParams& params) {
    if (!(p > 0.0)) throw ConfigError("bp_level_set requires p > 0");
    Vec c = barycenter(spec);
    CramerParams cp;
    cp.early_exit_above = p;
    auto inside = [&](std::span<const double> z) {
        CramerResult r = cramer_transform(spec, z, cp);
        return r.finite && r.value <= p;
    };
    if (!inside(c))
        throw DegenerateInput("bp_level_set: barycenter outside the level set");
    return radial_level_body(c, directions, inside, params.rel_tol, params.max_bisect_iters, p);
}

ConvexBodyApprox bp_level_set(const MeasureSpec& spec, double p, const RegionParams& params) {
    std::size_t M = params.grid ? params.grid : default_grid_size(spec.dim);
    return bp_level_set(spec, p, direction_grid(spec.dim, M, params.grid_seed), params);
}

// ---------------------------------------------------------------------------
// Ball bodies K_p(f)
// ---------------------------------------------------------------------------

double ball_body_radial(const MeasureSpec& spec, double p, std::span<const double> x) {
    if (!(p > 0.0)) throw ConfigError("ball_body_radial requires p > 0");
    if (!spec.has_density()) throw UnsupportedOperation("ball_body_radial needs a density");
    if ((int)x.size() != spec.dim) throw ConfigError("ball_body_radial: dimension mismatch");
    if (norm(x) == 0.0) throw ConfigError("ball_body_radial: x must be nonzero");
    Vec zero((std::size_t)spec.dim, 0.0);
    double f0 = density(spec, zero);
    if (!(f0 > 0.0)) throw DegenerateInput("ball_body_radial: f(0) must be positive");
    if (spec.family == Family::sconcave_pareto && p >= spec.kappa)
        throw UnsupportedOperation("ball_body_radial: tail not integrable, p >= kappa");
    if (spec.family == Family::product_cauchy) {
        int nonzero = 0;
        for (double v : x)
            if (v != 0.0) ++nonzero;
        if (p >= 2.0 * nonzero)
            throw UnsupportedOperation("ball_body_radial: tail not integrable for this ray");
    }
    const double cutoff = 1e-16 * f0;
    Vec probe(x.begin(), x.end());
    auto integrand = [&](double r) {
        for (std::size_t j = 0; j < probe.size(); ++j) probe[j] = r * x[j];
        double f = density(spec, probe);
        if (f < cutoff) return 0.0;
        return p * std::pow(r, p - 1.0) * f;
    };
    auto q = num::integrate_half_line(integrand, 1e-13, 1e-10);
    return std::pow(std::max(q.value, 0.0) / f0, 1.0 / p);
}

// ---------------------------------------------------------------------------
// Polarity
// ---------------------------------------------------------------------------

nlohmann::json PolarHalfspaces::to_json() const {
    nlohmann::json normals_json = nlohmann::json::array();
    for (std::size_t i = 0; i < normals.rows; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < normals.cols; ++j) row.push_back(normals.at(i, j));
        normals_json.push_back(std::move(row));
    }
    return nlohmann::json{{"normals", normals_json}, {"offsets", offsets}};
}

namespace {

// Is there u != 0 with <v_i, u> <= 0 for all vertices? Tested as 2n cone LPs
// with the normalization u_j = +-1; feasibility of any certifies that 0 is
// not interior to conv(vertices).
bool origin_interior(const Matrix& verts) {
    const std::size_t N = verts.rows;
    const std::size_t n = verts.cols;
    for (std::size_t j = 0; j < n; ++j) {
        for (int sign = -1; sign <= 1; sign += 2) {
            // columns: u+ (n), u- (n), slack (N); rows: N cone rows + 1 pin row
            Matrix A(N + 1, 2 * n + N);
            Vec b(N + 1, 0.0);
            for (std::size_t i = 0; i < N; ++i) {
                for (std::size_t c = 0; c < n; ++c) {
                    A.at(i, c) = verts.at(i, c);
                    A.at(i, n + c) = -verts.at(i, c);
                }
                A.at(i, 2 * n + i) = 1.0;
            }
            A.at(N, j) = 1.0;
            A.at(N, n + j) = -1.0;
            b[N] = (double)sign;
            Phase1Result lp = phase1_simplex(A, b, 1e-9);
            if (lp.status == Phase1Result::Status::feasible) return false;
            if (lp.status == Phase1Result::Status::failure)
                throw SolverFailure("origin_interior: simplex failure");
        }
    }
    return true;
}

}  // namespace

PolarHalfspaces polar_polytope(const Matrix& vertices) {
    if (vertices.rows == 0) throw ConfigError("polar_polytope: no vertices");
    if (!origin_interior(vertices))
        throw DegenerateInput("polar_polytope: 0 is not interior to conv(vertices)");
    PolarHalfspaces out;
    out.normals = vertices;
    out.offsets.assign(vertices.rows, 1.0);
    return out;
}

// ---------------------------------------------------------------------------
// Inclusion checking
// ---------------------------------------------------------------------------

std::string verdict_name(InclusionVerdict v) {
    switch (v) {
        case InclusionVerdict::certified_in: return "certified_in";
        case InclusionVerdict::certified_out: return "certified_out";
        case InclusionVerdict::undecided: return "undecided";
    }
    return "?";
}

InclusionResult check_inclusion(const ConvexBodyApprox& A, const BodyOracle& B, double scale,
                                double tol) {
    if (!(scale > 0.0)) throw ConfigError("check_inclusion: scale must be positive");
    InclusionResult res;
    bool have_support = B.grid != nullptr && B.support != nullptr;
    if (!have_support && !B.exact_membership)
        throw ConfigError(
            "check_inclusion: grids must be shared or B must expose an exact membership oracle");
    if (have_support) {
        if (B.grid->rows != A.grid.rows || B.grid->cols != A.grid.cols)
            throw ConfigError("check_inclusion: grid mismatch");
        for (std::size_t i = 0; i < A.grid.rows; ++i)
            for (std::size_t j = 0; j < A.grid.cols; ++j)
                if (std::fabs(A.grid.at(i, j) - B.grid->at(i, j)) > 1e-12)
                    throw ConfigError("check_inclusion: grid mismatch");
        for (std::size_t i = 0; i < A.grid.rows && res.support_ok; ++i)
            if (A.support_values[i] > scale * (*B.support)[i] + tol) res.support_ok = false;
    }
    Vec probe(A.dim());
    for (std::size_t i = 0; i < A.boundary_points.rows; ++i) {
        for (std::size_t j = 0; j < A.dim(); ++j)
            probe[j] = A.boundary_points.at(i, j) / scale;
        int c = B.contains(probe);
        if (c < 0) {
            res.verdict = InclusionVerdict::certified_out;
            res.witness_index = (std::ptrdiff_t)i;
            res.witness_point = A.boundary_points.row_vec(i);
            return res;
        }
        if (c == 0) ++res.undecided_points;
    }
    if (res.undecided_points == 0 && res.support_ok)
        res.verdict = InclusionVerdict::certified_in;
    else
        res.verdict = InclusionVerdict::undecided;
    return res;
}

BodyOracle polytope_oracle(const RandomPolytope& P) {
    BodyOracle o;
    o.exact_membership = true;
    o.contains = [&P](std::span<const double> x) {
        try {
            return membership(P, x).inside ? 1 : -1;
        } catch (const SolverFailure&) {
            return 0;
        }
    };
    return o;
}

BodyOracle body_approx_oracle(const ConvexBodyApprox& B, double tol) {
    BodyOracle o;
    o.grid = &B.grid;
    o.support = &B.support_values;
    o.contains = [&B, tol](std::span<const double> x) {
        if (!B.inside_outer(x, tol)) return -1;  // violates an outer half-space
        // Inner certificate: x in conv(boundary_points)?
        const std::size_t n = B.dim();
        const std::size_t N = B.boundary_points.rows;
        Matrix A(n + 1, N);
        for (std::size_t jcol = 0; jcol < N; ++jcol) {
            for (std::size_t i = 0; i < n; ++i) A.at(i, jcol) = B.boundary_points.at(jcol, i);
            A.at(n, jcol) = 1.0;
        }
        Vec b(x.begin(), x.end());
        b.push_back(1.0);
        Phase1Result lp = phase1_simplex(A, b, 1e-9);
        if (lp.status == Phase1Result::Status::feasible) return 1;
        return 0;  // between the inner hull and the outer intersection
    };
    return o;
}

BodyOracle sublevel_oracle(std::function<std::pair<double, double>(std::span<const double>)> bracket,
                           double threshold, double tol) {
    BodyOracle o;
    o.exact_membership = true;
    o.contains = [bracket, threshold, tol](std::span<const double> x) {
        auto [lo, hi] = bracket(x);
        if (hi <= threshold - tol) return 1;
        if (lo > threshold + tol) return -1;
        // exact evaluations sit inside [lo,hi] with lo == hi
        if (lo == hi) return lo <= threshold ? 1 : -1;
        return 0;
    };
    return o;
}

BodyOracle superlevel_oracle(
    std::function<std::pair<double, double>(std::span<const double>)> bracket, double threshold,
    double tol) {
    BodyOracle o;
    o.exact_membership = true;
    o.contains = [bracket, threshold, tol](std::span<const double> x) {
        auto [lo, hi] = bracket(x);
        if (lo >= threshold + tol) return 1;
        if (hi < threshold - tol) return -1;
        if (lo == hi) return lo >= threshold ? 1 : -1;
        return 0;
    };
    return o;
}

// ---------------------------------------------------------------------------
// Regularity calibration
// ---------------------------------------------------------------------------

double alpha_regularity(const MeasureSpec& spec, std::span<const double> p_probes,
                        std::size_t grid, std::uint64_t grid_seed) {
    std::size_t M = grid ? grid : 64;
    Matrix dirs = direction_grid(spec.dim, M, grid_seed);
    double alpha = 0.0;
    for (double p : p_probes) {
        for (std::size_t i = 0; i < dirs.rows; ++i) {
            auto u = dirs.row_span(i);
            double h1 = zp_plus_support(spec, p, u);
            double h2 = zp_plus_support(spec, 2.0 * p, u);
            if (h1 > 0.0) alpha = std::max(alpha, h2 / (2.0 * h1));
        }
    }
    return alpha;
}

double alpha_regularity(const MeasureSpec& spec) {
    // dyadic probes covering p in [1, 64] (ratios use h at 2p)
    const double probes[] = {1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0};
    return alpha_regularity(spec, probes);
}

// ---------------------------------------------------------------------------
// Star-body utilities
// ---------------------------------------------------------------------------

double star_volume(const RadialFn& rho, int n, std::size_t sphere_grid) {
    Matrix dirs = direction_grid(n, sphere_grid, 0);
    double acc = 0.0;
    for (std::size_t i = 0; i < dirs.rows; ++i)
        acc += std::pow(rho(dirs.row_span(i)), n);
    return num::unit_ball_volume(n) * acc / (double)dirs.rows;
}

double star_zp_support(const RadialFn& rho, int n, double p, std::span<const double> y,
                       std::size_t sphere_grid) {
    double ny = norm(y);
    if (ny == 0.0) return 0.0;
    Vec u = scaled(y, 1.0 / ny);
    Matrix dirs = direction_grid(n, sphere_grid, 0);
    double vol_acc = 0.0, mom_acc = 0.0;
    for (std::size_t i = 0; i < dirs.rows; ++i) {
        auto xi = dirs.row_span(i);
        double r = rho(xi);
        vol_acc += std::pow(r, n);
        double d = dot(xi, u);
        if (d > 0.0) mom_acc += std::pow(r, n + p) * std::pow(d, p);
    }
    double vol = num::unit_ball_volume(n) * vol_acc / (double)dirs.rows;
    double mom = num::unit_ball_volume(n) * (double)n / ((double)n + p) * mom_acc /
                 (double)dirs.rows;
    // h^p = (1/vol) * integral over K of <x,u>_+^p dx
    return ny * std::pow(mom / vol, 1.0 / p);
}

}  // namespace depthlab
