#include <algorithm>
#include <cmath>

#include "depthlab/kernels.hpp"
#include "depthlab/polytopes.hpp"
#include "depthlab/rng.hpp"
#include "depthlab/simplex.hpp"

namespace depthlab {

double RandomPolytope::support(std::span<const double> u) const {
    if (u.size() != n()) throw ConfigError("support: dimension mismatch");
    std::vector<double> dots(generator_count());
    kernels::dot_batch(vertices.data.data(), vertices.rows, vertices.cols, u.data(), dots.data());
    return symmetric ? kernels::max_abs_val(dots.data(), dots.size())
                     : kernels::max_val(dots.data(), dots.size());
}

RandomPolytope make_polytope(const MeasureSpec& spec, std::size_t count, std::uint64_t seed,
                             bool symmetric) {
    PointCloud cloud = sample(spec, count, seed);
    return RandomPolytope(std::move(cloud.points), symmetric, seed);
}

namespace {

inline double cross2(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

// Andrew monotone chain; strictly convex turns only (collinear dropped).
Matrix monotone_chain(std::vector<std::pair<double, double>> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t m = pts.size();
    Matrix out;
    if (m == 0) return out;
    if (m == 1) {
        out = Matrix(1, 2);
        out.at(0, 0) = pts[0].first;
        out.at(0, 1) = pts[0].second;
        return out;
    }
    std::vector<std::pair<double, double>> hull(2 * m);
    std::size_t k = 0;
    for (std::size_t i = 0; i < m; ++i) {
        while (k >= 2 && cross2(hull[k - 1].first - hull[k - 2].first,
                                hull[k - 1].second - hull[k - 2].second,
                                pts[i].first - hull[k - 2].first,
                                pts[i].second - hull[k - 2].second) <= 0.0)
            --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = m - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross2(hull[k - 1].first - hull[k - 2].first,
                                hull[k - 1].second - hull[k - 2].second,
                                pts[i].first - hull[k - 2].first,
                                pts[i].second - hull[k - 2].second) <= 0.0)
            --k;
        hull[k++] = pts[i];
    }
    k = k > 1 ? k - 1 : k;
    out = Matrix(k, 2);
    for (std::size_t i = 0; i < k; ++i) {
        out.at(i, 0) = hull[i].first;
        out.at(i, 1) = hull[i].second;
    }
    return out;
}

}  // namespace

const RandomPolytope::Hull2DCache& RandomPolytope::hull2d() const {
    if (n() != 2) throw ConfigError("hull2d: polytope is not planar");
    Hull2DCache& c = *cache_;
    std::call_once(c.once, [&] {
        std::vector<std::pair<double, double>> pts;
        pts.reserve(generator_count() * (symmetric ? 2 : 1));
        for (std::size_t i = 0; i < generator_count(); ++i) {
            pts.emplace_back(vertices.at(i, 0), vertices.at(i, 1));
            if (symmetric) pts.emplace_back(-vertices.at(i, 0), -vertices.at(i, 1));
        }
        c.hull = monotone_chain(std::move(pts));
        c.degenerate = c.hull.rows < 3;
    });
    return c;
}

Matrix hull_2d(const RandomPolytope& P) { return P.hull2d().hull; }

double area_2d(const RandomPolytope& P, bool* degenerate) {
    const auto& c = P.hull2d();
    if (degenerate) *degenerate = c.degenerate;
    if (c.degenerate) return 0.0;
    double a = 0.0;
    const Matrix& h = c.hull;
    for (std::size_t i = 0; i < h.rows; ++i) {
        std::size_t j = (i + 1) % h.rows;
        a += h.at(i, 0) * h.at(j, 1) - h.at(j, 0) * h.at(i, 1);
    }
    return 0.5 * std::fabs(a);
}

MembershipResult membership_lp(const RandomPolytope& P, std::span<const double> x) {
    const std::size_t n = P.n();
    if (x.size() != n) throw ConfigError("membership: dimension mismatch");
    const std::size_t N = P.generator_count();
    const std::size_t k = P.symmetric ? 2 * N : N;
    Matrix A(n + 1, k);
    for (std::size_t j = 0; j < N; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            A.at(i, j) = P.vertices.at(j, i);
            if (P.symmetric) A.at(i, N + j) = -P.vertices.at(j, i);
        }
        A.at(n, j) = 1.0;
        if (P.symmetric) A.at(n, N + j) = 1.0;
    }
    Vec b(x.begin(), x.end());
    b.push_back(1.0);
    Phase1Result lp = phase1_simplex(A, b, 1e-9);
    MembershipResult res;
    if (lp.status == Phase1Result::Status::feasible) {
        res.inside = true;
        return res;
    }
    if (lp.status == Phase1Result::Status::failure)
        throw SolverFailure("membership: simplex cycling guard exceeded");
    // Certificate: y with <X_j, u> + y_n <= tol for all generators and
    // <x, u> + y_n > 0; validate before returning.
    Vec u(lp.dual.begin(), lp.dual.begin() + n);
    double nu = norm(u);
    if (nu < 1e-14) throw SolverFailure("membership: degenerate separating direction");
    for (double& v : u) v /= nu;
    double hsup = P.support(u);
    double xdot = dot(x, std::span<const double>(u));
    if (!(xdot > hsup)) throw SolverFailure("membership: separator failed validation");
    res.inside = false;
    res.separator = std::move(u);
    res.separation = xdot - hsup;
    res.dual_offset = -lp.dual[n] / nu;
    return res;
}

namespace {

MembershipResult membership_hull2d(const RandomPolytope& P, std::span<const double> x) {
    const auto& c = P.hull2d();
    const Matrix& h = c.hull;
    if (c.degenerate) return membership_lp(P, x);  // segment/point: LP handles exactly
    MembershipResult res;
    double worst = 0.0;
    std::size_t worst_edge = h.rows;
    for (std::size_t i = 0; i < h.rows; ++i) {
        std::size_t j = (i + 1) % h.rows;
        double ex = h.at(j, 0) - h.at(i, 0);
        double ey = h.at(j, 1) - h.at(i, 1);
        double cr = cross2(ex, ey, x[0] - h.at(i, 0), x[1] - h.at(i, 1));
        // ccw hull: cr >= 0 keeps x on the inner side of the edge
        if (cr < worst) {
            worst = cr;
            worst_edge = i;
        }
    }
    if (worst_edge == h.rows) {
        res.inside = true;
        return res;
    }
    std::size_t i = worst_edge, j = (worst_edge + 1) % h.rows;
    double ex = h.at(j, 0) - h.at(i, 0);
    double ey = h.at(j, 1) - h.at(i, 1);
    double len = std::hypot(ex, ey);
    Vec u = {ey / len, -ex / len};  // outward normal of a ccw edge
    double hsup = P.support(u);
    double xdot = dot(x, std::span<const double>(u));
    if (!(xdot > hsup)) return membership_lp(P, x);  // grazing contact: defer to the LP
    res.inside = false;
    res.separator = std::move(u);
    res.separation = xdot - hsup;
    res.dual_offset = hsup;
    return res;
}

}  // namespace

MembershipResult membership(const RandomPolytope& P, std::span<const double> x) {
    if (P.n() == 2) return membership_hull2d(P, x);
    return membership_lp(P, x);
}

VolumeEstimate volume_mc(const RandomPolytope& P, std::size_t budget, std::uint64_t seed) {
    const std::size_t n = P.n();
    if (n < 2) throw ConfigError("volume_mc: need n >= 2");
    if (budget == 0) throw ConfigError("volume_mc: empty budget");
    Vec lo(n, 0.0), hi(n, 0.0);
    for (std::size_t i = 0; i < P.generator_count(); ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double v = P.vertices.at(i, j);
            if (i == 0) {
                lo[j] = hi[j] = v;
            } else {
                lo[j] = std::min(lo[j], v);
                hi[j] = std::max(hi[j], v);
            }
        }
    }
    if (P.symmetric) {
        for (std::size_t j = 0; j < n; ++j) {
            double m = std::max(std::fabs(lo[j]), std::fabs(hi[j]));
            lo[j] = -m;
            hi[j] = m;
        }
    }
    double box = 1.0;
    for (std::size_t j = 0; j < n; ++j) box *= (hi[j] - lo[j]);
    if (box <= 0.0) return {0.0, 0.0};

    const std::size_t chunk = 4096;
    const std::size_t n_chunks = (budget + chunk - 1) / chunk;
    std::vector<std::size_t> hits(n_chunks, 0);
    parallel_for(n_chunks, [&](std::size_t ci) {
        RngStream rng = RngStream::derive(seed, 0xb0c5 + ci);
        std::size_t begin = ci * chunk;
        std::size_t end = std::min(budget, begin + chunk);
        Vec p(n);
        std::size_t h = 0;
        for (std::size_t s = begin; s < end; ++s) {
            for (std::size_t j = 0; j < n; ++j) p[j] = rng.uniform(lo[j], hi[j]);
            if (membership(P, p).inside) ++h;
        }
        hits[ci] = h;
    });
    double total = 0.0;
    for (auto h : hits) total += (double)h;
    double p = total / (double)budget;
    VolumeEstimate est;
    est.value = box * p;
    est.std_error = box * std::sqrt(std::max(p * (1.0 - p), 1.0 / (double)budget) /
                                    (double)budget);
    return est;
}

double w_q(const RandomPolytope& P, double q, std::size_t sphere_budget, std::uint64_t seed) {
    if (q == 0.0) throw ConfigError("w_q: q must be nonzero");
    if (sphere_budget == 0) throw ConfigError("w_q: empty budget");
    const std::size_t n = P.n();
    double scale = 0.0;
    for (std::size_t i = 0; i < P.generator_count(); ++i)
        scale = std::max(scale, norm_inf(P.vertices.row_span(i)));
    RngStream rng = RngStream::derive(seed, 0x3b9);
    Vec u(n);
    double acc = 0.0;
    for (std::size_t s = 0; s < sphere_budget; ++s) {
        rng.unit_sphere(u);
        double h = P.support(u);
        if (q < 0.0 && h <= 1e-12 * std::max(1.0, scale))
            throw DegenerateInput("w_q: support vanishes, 0 is not interior");
        acc += std::pow(h, q);
    }
    return std::pow(acc / (double)sphere_budget, 1.0 / q);
}

}  // namespace depthlab
