#include <algorithm>
#include <cmath>

#include "depthlab/depth.hpp"
#include "depthlab/grids.hpp"
#include "depthlab/kernels.hpp"
#include "depthlab/numerics.hpp"
#include "depthlab/rng.hpp"

namespace depthlab {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;
}  // namespace

std::string depth_method_name(DepthMethod m) {
    switch (m) {
        case DepthMethod::exact_2d: return "exact_2d";
        case DepthMethod::direction_grid: return "direction_grid";
        case DepthMethod::mc_bracket: return "mc_bracket";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Exact planar sweep
// ---------------------------------------------------------------------------

DepthEstimate depth_empirical_2d(const PointCloud& cloud, std::span<const double> x) {
    if (cloud.n() != 2) throw ConfigError("depth_empirical_2d requires a planar cloud");
    if (x.size() != 2) throw ConfigError("depth_empirical_2d: query must be planar");
    const std::size_t N = cloud.count();
    std::size_t coincident = 0;
    std::vector<double> angles;
    angles.reserve(N);
    for (std::size_t i = 0; i < N; ++i) {
        double dx = cloud.points.at(i, 0) - x[0];
        double dy = cloud.points.at(i, 1) - x[1];
        if (dx == 0.0 && dy == 0.0) {
            ++coincident;  // counts toward every half-plane
            continue;
        }
        double a = std::atan2(dy, dx);
        if (a < 0.0) a += kTwoPi;
        angles.push_back(a);
    }
    DepthEstimate out;
    out.method = DepthMethod::exact_2d;
    if (angles.empty()) {
        out.lower = out.upper = (double)coincident / (double)N;
        return out;
    }
    std::sort(angles.begin(), angles.end());

    // Critical angles where the closed half-plane window gains/loses a point;
    // the minimum count is attained on the open arcs between them.
    std::vector<double> crit;
    crit.reserve(2 * angles.size());
    for (double a : angles) {
        double lo = a - 0.5 * kPi;
        double hi = a + 0.5 * kPi;
        if (lo < 0.0) lo += kTwoPi;
        if (hi >= kTwoPi) hi -= kTwoPi;
        crit.push_back(lo);
        crit.push_back(hi);
    }
    std::sort(crit.begin(), crit.end());
    crit.erase(std::unique(crit.begin(), crit.end()), crit.end());

    auto count_window = [&angles](double mid) {
        // #{ theta in [mid - pi/2, mid + pi/2] mod 2pi }, closed window
        double lo = mid - 0.5 * kPi;
        double hi = mid + 0.5 * kPi;
        auto lb = [&](double v) {
            return (std::size_t)(std::lower_bound(angles.begin(), angles.end(), v) -
                                 angles.begin());
        };
        auto ub = [&](double v) {
            return (std::size_t)(std::upper_bound(angles.begin(), angles.end(), v) -
                                 angles.begin());
        };
        if (lo < 0.0) {  // window wraps below 0
            return (angles.size() - lb(lo + kTwoPi)) + ub(hi);
        }
        if (hi >= kTwoPi) {  // wraps above 2pi
            return (angles.size() - lb(lo)) + ub(hi - kTwoPi);
        }
        return ub(hi) - lb(lo);
    };

    std::size_t best = angles.size();
    const std::size_t K = crit.size();
    for (std::size_t k = 0; k < K; ++k) {
        double a = crit[k];
        double b = (k + 1 < K) ? crit[k + 1] : crit[0] + kTwoPi;
        double mid = 0.5 * (a + b);
        if (mid >= kTwoPi) mid -= kTwoPi;
        best = std::min(best, count_window(mid));
        if (best == 0) break;
    }
    out.lower = out.upper = (double)(best + coincident) / (double)N;
    return out;
}

// ---------------------------------------------------------------------------
// Analytic depth
// ---------------------------------------------------------------------------

namespace {

struct GridSearchResult {
    double grid_min = 1.0;     // minimum over the raw grid
    double refined_min = 1.0;  // after local descent
    double se_at_min = 0.0;
    bool exact = true;
    std::size_t evals = 0;
};

GridSearchResult grid_depth_search(const MeasureSpec& spec, std::span<const double> x,
                                   const DirectionBudget& budget) {
    const int n = spec.dim;
    std::size_t M = budget.grid ? budget.grid : default_grid_size(n);
    Matrix dirs = direction_grid(n, M, budget.seed);
    GridSearchResult res;
    Vec best_u;
    for (std::size_t i = 0; i < dirs.rows; ++i) {
        auto u = dirs.row_span(i);
        double t = dot(x, u);
        MassEstimate m = halfspace_mass(spec, u, t, budget.mc_budget,
                                        budget.seed + 31 * i + 1);
        res.exact = res.exact && m.exact;
        ++res.evals;
        if (m.value < res.grid_min) {
            res.grid_min = m.value;
            res.se_at_min = m.std_error;
            best_u = Vec(u.begin(), u.end());
        }
    }
    res.refined_min = res.grid_min;
    if (best_u.empty()) return res;

    // Local descent on the sphere from the best grid direction.
    RngStream rng = RngStream::derive(budget.seed ^ 0xdecafULL, 7);
    double step = (n == 2) ? kPi / (double)M : 2.0 / std::sqrt((double)M);
    Vec u = best_u;
    Vec cand((std::size_t)n);
    for (std::size_t it = 0; it < budget.refine_steps && step > 1e-7; ++it) {
        bool improved = false;
        for (int trial = 0; trial < 2 * std::max(1, n - 1); ++trial) {
            rng.unit_sphere(cand);
            Vec v(u);
            for (int j = 0; j < n; ++j) v[j] += step * cand[j];
            double nv = norm(v);
            if (nv < 1e-12) continue;
            for (double& w : v) w /= nv;
            double t = dot(x, std::span<const double>(v));
            MassEstimate m = halfspace_mass(spec, v, t, budget.mc_budget,
                                            budget.seed + 977 * it + trial);
            ++res.evals;
            if (m.value < res.refined_min) {
                res.refined_min = m.value;
                res.se_at_min = m.std_error;
                u = v;
                improved = true;
            }
        }
        if (!improved) step *= 0.5;
    }
    return res;
}

// Lipschitz bound for u -> mu(<X - x, u> >= 0) on compactly supported
// families with bounded marginal density: density sup times sup |X - x|.
double depth_modulus(const MeasureSpec& spec, std::span<const double> x) {
    const int n = spec.dim;
    switch (spec.family) {
        case Family::uniform_cube:
            return 0.5 * std::sqrt((double)n) * (std::sqrt((double)n) + norm(x));
        case Family::uniform_body: {
            double r = spec.body_radius;
            if (spec.body_shape == BodyShape::cube)
                return 0.5 * std::sqrt((double)n) / r * (r * std::sqrt((double)n) + norm(x));
            return 0.0;  // ball is rotation invariant; exact path used instead
        }
        default: return -1.0;  // no modulus available
    }
}

DepthEstimate analytic_base(const MeasureSpec& spec, std::span<const double> x,
                            const DirectionBudget& budget) {
    DepthEstimate out;
    const int n = spec.dim;
    switch (spec.family) {
        case Family::gaussian_std: {
            double v = num::normal_sf(norm(x));
            out.lower = out.upper = v;
            out.method = DepthMethod::direction_grid;
            return out;
        }
        case Family::sconcave_pareto: {
            double v = radial_marginal_tail(spec, norm(x));
            out.lower = out.upper = v;
            out.method = DepthMethod::direction_grid;
            return out;
        }
        case Family::uniform_body:
            if (spec.body_shape == BodyShape::ball) {
                double v = radial_marginal_tail(spec, norm(x));
                out.lower = out.upper = v;
                out.method = DepthMethod::direction_grid;
                return out;
            }
            break;  // cube-shaped body: grid search below
        case Family::product_cauchy: {
            double v = 0.5 - std::atan(norm_inf(x)) / kPi;
            out.lower = out.upper = v;
            out.method = DepthMethod::direction_grid;
            return out;
        }
        case Family::product_qstable: {
            if (spec.q == 1.0) {
                double v = 0.5 - std::atan(norm_inf(x)) / kPi;
                out.lower = out.upper = v;
                out.method = DepthMethod::direction_grid;
                return out;
            }
            // Worst direction maximizes <x,u>/||u||_q, giving the dual norm.
            double qq = spec.q / (spec.q - 1.0);
            double c = 0.0;
            for (double v : x) c += std::pow(std::fabs(v), qq);
            c = std::pow(c, 1.0 / qq);
            RngStream rng = RngStream::derive(budget.seed ^ 0xab1e5ULL, 3);
            std::size_t hits = 0;
            for (std::size_t i = 0; i < budget.mc_budget; ++i)
                if (rng.stable_symmetric(spec.q) >= c) ++hits;
            double p = (double)hits / (double)budget.mc_budget;
            double se = std::sqrt(std::max(p * (1.0 - p), 1.0 / (double)budget.mc_budget) /
                                  (double)budget.mc_budget);
            out.upper = p;
            out.lower = std::max(0.0, p - 3.0 * se);
            out.method = DepthMethod::mc_bracket;
            out.directions_used = 1;
            return out;
        }
        default: break;
    }
    // Grid + descent over half-space masses.
    GridSearchResult res = grid_depth_search(spec, x, budget);
    out.upper = res.refined_min;
    out.directions_used = res.evals;
    std::size_t M = budget.grid ? budget.grid : default_grid_size(n);
    if (res.exact) {
        double L = depth_modulus(spec, x);
        if (L >= 0.0) {
            double delta = (n <= 2) ? covering_radius_2d(M)
                                    : covering_radius_estimate(direction_grid(n, M, budget.seed));
            out.lower = std::clamp(res.grid_min - L * delta, 0.0, out.upper);
        } else {
            out.lower = 0.0;
        }
        out.method = DepthMethod::direction_grid;
    } else {
        out.lower = std::max(0.0, res.refined_min - 3.0 * res.se_at_min);
        out.method = DepthMethod::mc_bracket;
    }
    return out;
}

}  // namespace

DepthEstimate depth_analytic(const MeasureSpec& spec, std::span<const double> x,
                             const DirectionBudget& budget) {
    if ((int)x.size() != spec.dim) throw ConfigError("depth_analytic: dimension mismatch");
    if (!spec.affine) return analytic_base(spec, x, budget);
    // Depth is affine invariant: phi_{G mu}(G z) = phi_mu(z).
    Matrix inv = invert_matrix(spec.affine->A);
    Vec z = mat_vec(inv, sub(x, spec.affine->b));
    MeasureSpec base = spec;
    base.affine.reset();
    return analytic_base(base, z, budget);
}

DepthEstimate depth_at(const MeasureSpec& spec, std::span<const double> x,
                       const DirectionBudget& budget) {
    if (spec.family == Family::empirical && spec.dim == 2 && !spec.affine)
        return depth_empirical_2d(*spec.cloud, x);
    if (spec.family == Family::empirical && spec.dim == 2 && spec.affine) {
        Matrix inv = invert_matrix(spec.affine->A);
        Vec z = mat_vec(inv, sub(x, spec.affine->b));
        return depth_empirical_2d(*spec.cloud, z);
    }
    return depth_analytic(spec, x, budget);
}

namespace {

struct AscentHit {
    Vec point;
    double depth = -1.0;
    std::size_t start = 0;
};

// Multi-start hill climb of the empirical depth, starting from the cloud's
// own points. Works in the base (un-pushed) space; affine maps are applied by
// equivariance afterwards. Deterministic given the budget seed.
AscentHit empirical_depth_search(const MeasureSpec& spec, const DirectionBudget& budget) {
    MeasureSpec base = spec;
    base.affine.reset();
    const PointCloud& c = *base.cloud;
    const int n = base.dim;
    DirectionBudget eval = budget;
    if (n > 2) eval.grid = budget.grid ? std::min<std::size_t>(budget.grid, 128) : 128;
    auto depth_of = [&](std::span<const double> x) { return depth_at(base, x, eval).upper; };

    double scale = 0.0;
    for (std::size_t i = 0; i < c.count(); ++i)
        scale = std::max(scale, norm_inf(c.points.row_span(i)));
    if (scale == 0.0) scale = 1.0;

    const std::size_t max_starts = 64;
    const std::size_t stride = std::max<std::size_t>(1, c.count() / max_starts);
    AscentHit best;
    for (std::size_t i = 0; i < c.count(); i += stride) {
        Vec x = c.points.row_vec(i);
        double d = depth_of(x);
        RngStream rng = RngStream::derive(budget.seed ^ 0xa5ce97ULL, i);
        double step = 0.25 * scale;
        Vec dir((std::size_t)n);
        for (int it = 0; it < 60 && step > 1e-6 * scale; ++it) {
            bool improved = false;
            for (int k = 0; k < 2 * n + 2; ++k) {
                rng.unit_sphere(dir);
                Vec cand = x;
                for (int j = 0; j < n; ++j) cand[j] += step * dir[j];
                double dc = depth_of(cand);
                if (dc > d + 1e-12) {
                    x = std::move(cand);
                    d = dc;
                    improved = true;
                }
            }
            if (!improved) step *= 0.5;
        }
        bool better = d > best.depth + 1e-12;
        if (!better && std::fabs(d - best.depth) <= 1e-12 && best.depth >= 0.0)
            better = std::lexicographical_compare(x.begin(), x.end(), best.point.begin(),
                                                  best.point.end());
        if (better) {
            best.point = std::move(x);
            best.depth = d;
            best.start = i;
        }
    }
    if (spec.affine)
        best.point = add(mat_vec(spec.affine->A, best.point), spec.affine->b);
    return best;
}

}  // namespace

MaxDepthResult max_depth(const MeasureSpec& spec, const DirectionBudget& budget) {
    MaxDepthResult res;
    if (spec.symmetric()) {
        res.point = spec.affine ? spec.affine->b : Vec((std::size_t)spec.dim, 0.0);
        DepthEstimate d = depth_at(spec, res.point, budget);
        res.depth = d.upper;
        res.p_mu = -std::log(std::max(d.upper, 1e-300));
        return res;
    }
    AscentHit hit = empirical_depth_search(spec, budget);
    res.point = hit.point;
    res.depth = hit.depth;
    res.p_mu = -std::log(std::max(res.depth, 1e-300));
    return res;
}

MaxDepthResult max_depth(const PointCloud& cloud, const DirectionBudget& budget) {
    return max_depth(MeasureSpec::empirical_cloud(cloud), budget);
}

Vec center_point(const MeasureSpec& spec) {
    spec.validate();
    if (spec.symmetric()) return spec.affine ? spec.affine->b : Vec((std::size_t)spec.dim, 0.0);
    // Empirical: approximate center by multi-start ascent from the cloud's
    // points; equal-depth starts resolve to the lowest start index because
    // improvements must be strict.
    return empirical_depth_search(spec, {}).point;
}

bool up_membership(const MeasureSpec& spec, double p, std::span<const double> y, bool strict) {
    double ny = norm(y);
    if (ny == 0.0) return true;
    Vec u = scaled(y, 1.0 / ny);
    MassEstimate m = halfspace_mass(spec, u, 1.0 / ny);
    double thr = std::exp(-p);
    return strict ? (m.value < thr) : (m.value <= thr);
}

// ---------------------------------------------------------------------------
// ConvexBodyApprox
// ---------------------------------------------------------------------------

double ConvexBodyApprox::support_gap(std::size_t i) const {
    auto u = grid.row_span(i);
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < boundary_points.rows; ++j)
        mx = std::max(mx, dot(boundary_points.row_span(j), u));
    return support_values[i] - mx;
}

double ConvexBodyApprox::max_support_gap() const {
    double g = 0.0;
    for (std::size_t i = 0; i < grid.rows; ++i) g = std::max(g, support_gap(i));
    return g;
}

double ConvexBodyApprox::outer_radius() const {
    double r = 0.0;
    for (std::size_t i = 0; i < boundary_points.rows; ++i)
        r = std::max(r, norm(sub(boundary_points.row_span(i), center)));
    return r;
}

bool ConvexBodyApprox::inside_outer(std::span<const double> x, double tol) const {
    for (std::size_t i = 0; i < grid.rows; ++i)
        if (dot(x, grid.row_span(i)) > support_values[i] + tol) return false;
    return true;
}

namespace {
nlohmann::json matrix_to_json(const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows; ++i) {
        nlohmann::json r = nlohmann::json::array();
        for (std::size_t j = 0; j < m.cols; ++j) r.push_back(m.at(i, j));
        rows.push_back(std::move(r));
    }
    return rows;
}

Matrix matrix_from_json(const nlohmann::json& j) {
    Matrix m;
    m.rows = j.size();
    m.cols = m.rows ? j.at(0).size() : 0;
    m.data.reserve(m.rows * m.cols);
    for (const auto& row : j) {
        if (row.size() != m.cols) throw ConfigError("ragged matrix in JSON");
        for (const auto& v : row) m.data.push_back(v.get<double>());
    }
    return m;
}
}  // namespace

nlohmann::json ConvexBodyApprox::to_json() const {
    nlohmann::json j;
    j["grid"] = matrix_to_json(grid);
    j["boundary_points"] = matrix_to_json(boundary_points);
    j["support_values"] = support_values;
    j["center"] = center;
    if (std::isnan(p)) j["p"] = nullptr;
    else j["p"] = p;
    return j;
}

ConvexBodyApprox ConvexBodyApprox::from_json(const nlohmann::json& j) {
    ConvexBodyApprox b;
    b.grid = matrix_from_json(j.at("grid"));
    b.boundary_points = matrix_from_json(j.at("boundary_points"));
    b.support_values = j.at("support_values").get<Vec>();
    b.center = j.at("center").get<Vec>();
    if (j.contains("p") && !j.at("p").is_null()) b.p = j.at("p").get<double>();
    return b;
}

// ---------------------------------------------------------------------------
// Radial level-set bodies
// ---------------------------------------------------------------------------

ConvexBodyApprox radial_level_body(const Vec& center, const Matrix& directions,
                                   const std::function<bool(std::span<const double>)>& inside,
                                   double rel_tol, int max_iters, double p) {
    const std::size_t M = directions.rows;
    const std::size_t n = directions.cols;
    ConvexBodyApprox body;
    body.grid = directions;
    body.center = center;
    body.p = p;
    body.boundary_points = Matrix(M, n);
    body.support_values.assign(M, 0.0);
    std::vector<double> gaps(M, 0.0);

    parallel_for(M, [&](std::size_t i) {
        Vec probe(n);
        auto at = [&](double r) -> std::span<const double> {
            for (std::size_t j = 0; j < n; ++j) probe[j] = center[j] + r * directions.at(i, j);
            return probe;
        };
        double lo = 0.0, hi = 1.0;
        while (inside(at(hi))) {
            lo = hi;
            hi *= 2.0;
            if (hi > 1e12) throw DegenerateInput("radial_level_body: level set looks unbounded");
        }
        for (int it = 0; it < max_iters && (hi - lo) > rel_tol * std::max(hi, 1e-12); ++it) {
            double mid = 0.5 * (lo + hi);
            if (inside(at(mid))) lo = mid;
            else hi = mid;
        }
        for (std::size_t j = 0; j < n; ++j)
            body.boundary_points.at(i, j) = center[j] + lo * directions.at(i, j);
        gaps[i] = hi - lo;
    });

    for (std::size_t i = 0; i < M; ++i) {
        auto u = body.grid.row_span(i);
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < M; ++j)
            mx = std::max(mx, dot(body.boundary_points.row_span(j), u));
        body.support_values[i] = mx + gaps[i];
    }
    return body;
}

ConvexBodyApprox tukey_region(const MeasureSpec& spec, double p, const Matrix& directions,
                              const RegionParams& params) {
    Vec c = center_point(spec);
    DirectionBudget budget = params.depth_budget;
    DepthEstimate dc = depth_at(spec, c, budget);
    double threshold = std::exp(-p);
    if (threshold > dc.upper * (1.0 + 1e-9) + 1e-12)
        throw EmptyLevelSet("tukey_region: p below p(mu) estimate, level set empty");
    auto inside = [&spec, &budget, threshold](std::span<const double> x) {
        return depth_at(spec, x, budget).upper >= threshold;
    };
    return radial_level_body(c, directions, inside, params.rel_tol, params.max_bisect_iters, p);
}

ConvexBodyApprox tukey_region(const MeasureSpec& spec, double p, const RegionParams& params) {
    std::size_t M = params.grid ? params.grid : default_grid_size(spec.dim);
    return tukey_region(spec, p, direction_grid(spec.dim, M, params.grid_seed), params);
}

ConvexBodyApprox tukey_region(const PointCloud& cloud, double p, const RegionParams& params) {
    return tukey_region(MeasureSpec::empirical_cloud(cloud), p, params);
}

double depth_lower_certified(const MeasureSpec& spec, std::span<const double> x,
                             std::size_t grid_size, std::uint64_t grid_seed) {
    DirectionBudget budget;
    budget.grid = grid_size;
    budget.seed = grid_seed;
    return depth_at(spec, x, budget).lower;
}

}  // namespace depthlab
