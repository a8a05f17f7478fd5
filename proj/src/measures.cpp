#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "depthlab/kernels.hpp"
#include "depthlab/measures.hpp"
#include "depthlab/numerics.hpp"
#include "depthlab/rng.hpp"

namespace depthlab {

namespace {
constexpr double kPi = 3.14159265358979323846;

double format_guard(double v) {
    if (!std::isfinite(v)) throw DegenerateInput("non-finite value in CSV output");
    return v;
}
}  // namespace

void write_cloud_csv(const PointCloud& cloud, const std::string& path, const MeasureSpec* spec) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    for (std::size_t j = 0; j < cloud.n(); ++j) {
        if (j) out << ',';
        out << 'x' << (j + 1);
    }
    out << '\n';
    char buf[40];
    for (std::size_t i = 0; i < cloud.count(); ++i) {
        for (std::size_t j = 0; j < cloud.n(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", format_guard(cloud.points.at(i, j)));
            if (j) out << ',';
            out << buf;
        }
        out << '\n';
    }
    if (spec) {
        std::ofstream meta(path + ".meta.json");
        if (!meta) throw ConfigError("cannot open " + path + ".meta.json for writing");
        meta << nlohmann::json{{"seed", cloud.seed}, {"spec", spec->to_json()}}.dump(2) << '\n';
    }
}

PointCloud read_cloud_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty CSV " + path);
    std::size_t cols = 1 + std::count(line.begin(), line.end(), ',');
    std::vector<double> vals;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::size_t got = 0;
        while (std::getline(ss, cell, ',')) {
            vals.push_back(std::stod(cell));
            ++got;
        }
        if (got != cols) throw ConfigError("ragged CSV row in " + path);
    }
    PointCloud cloud;
    cloud.points.rows = vals.size() / cols;
    cloud.points.cols = cols;
    cloud.points.data = std::move(vals);
    if (cloud.points.rows == 0) throw ConfigError("no data rows in " + path);
    return cloud;
}

std::string family_name(Family f) {
    switch (f) {
        case Family::gaussian_std: return "gaussian_std";
        case Family::uniform_cube: return "uniform_cube";
        case Family::uniform_body: return "uniform_body";
        case Family::product_cauchy: return "product_cauchy";
        case Family::product_qstable: return "product_qstable";
        case Family::sconcave_pareto: return "sconcave_pareto";
        case Family::empirical: return "empirical";
    }
    throw ConfigError("unknown family enum");
}

Family family_from_name(const std::string& name) {
    if (name == "gaussian_std") return Family::gaussian_std;
    if (name == "uniform_cube") return Family::uniform_cube;
    if (name == "uniform_body") return Family::uniform_body;
    if (name == "product_cauchy") return Family::product_cauchy;
    if (name == "product_qstable") return Family::product_qstable;
    if (name == "sconcave_pareto") return Family::sconcave_pareto;
    if (name == "empirical") return Family::empirical;
    throw ConfigError("unknown measure family: " + name);
}

MeasureSpec MeasureSpec::gaussian(int n) {
    MeasureSpec s;
    s.family = Family::gaussian_std;
    s.dim = n;
    return s;
}

MeasureSpec MeasureSpec::cube(int n) {
    MeasureSpec s;
    s.family = Family::uniform_cube;
    s.dim = n;
    return s;
}

MeasureSpec MeasureSpec::body(int n, BodyShape shape, double radius) {
    MeasureSpec s;
    s.family = Family::uniform_body;
    s.dim = n;
    s.body_shape = shape;
    s.body_radius = radius;
    return s;
}

MeasureSpec MeasureSpec::cauchy(int n) {
    MeasureSpec s;
    s.family = Family::product_cauchy;
    s.dim = n;
    return s;
}

MeasureSpec MeasureSpec::qstable(int n, double q) {
    MeasureSpec s;
    s.family = Family::product_qstable;
    s.dim = n;
    s.q = q;
    return s;
}

MeasureSpec MeasureSpec::pareto(int n, double kappa) {
    MeasureSpec s;
    s.family = Family::sconcave_pareto;
    s.dim = n;
    s.kappa = kappa;
    return s;
}

MeasureSpec MeasureSpec::empirical_cloud(PointCloud cloud) {
    MeasureSpec s;
    s.family = Family::empirical;
    s.dim = (int)cloud.n();
    s.cloud = std::make_shared<const PointCloud>(std::move(cloud));
    return s;
}

void MeasureSpec::validate() const {
    if (dim < 1) throw ConfigError("dim must be >= 1");
    switch (family) {
        case Family::product_qstable:
            if (!(q >= 1.0 && q < 2.0)) throw ConfigError("product_qstable requires q in [1,2)");
            break;
        case Family::sconcave_pareto:
            if (!(kappa > 1.0)) throw ConfigError("sconcave_pareto requires kappa > 1");
            break;
        case Family::uniform_body:
            if (!(body_radius > 0.0)) throw ConfigError("uniform_body requires radius > 0");
            break;
        case Family::empirical:
            if (!cloud || cloud->count() == 0) throw ConfigError("empirical family needs points");
            if ((int)cloud->n() != dim) throw ConfigError("empirical cloud dim mismatch");
            if (!all_finite(std::span<const double>(cloud->points.data)))
                throw ConfigError("empirical cloud has non-finite entries");
            break;
        default: break;
    }
    if (affine) {
        if (affine->A.rows != (std::size_t)dim || affine->A.cols != (std::size_t)dim ||
            affine->b.size() != (std::size_t)dim)
            throw ConfigError("affine map shape mismatch");
        invert_matrix(affine->A);  // throws when singular
    }
}

bool MeasureSpec::has_density() const {
    switch (family) {
        case Family::gaussian_std:
        case Family::uniform_cube:
        case Family::uniform_body:
        case Family::product_cauchy:
        case Family::sconcave_pareto: return true;
        default: return false;
    }
}

bool MeasureSpec::has_log_laplace() const {
    switch (family) {
        case Family::gaussian_std:
        case Family::uniform_cube:
        case Family::uniform_body:
        case Family::empirical: return true;
        default: return false;
    }
}

bool MeasureSpec::symmetric() const { return family != Family::empirical; }

bool MeasureSpec::heavy_tailed() const {
    return family == Family::product_cauchy || family == Family::product_qstable ||
           family == Family::sconcave_pareto;
}

bool MeasureSpec::spherically_symmetric() const {
    if (affine) return false;
    return family == Family::gaussian_std || family == Family::sconcave_pareto ||
           (family == Family::uniform_body && body_shape == BodyShape::ball);
}

nlohmann::json MeasureSpec::to_json() const {
    nlohmann::json params = nlohmann::json::object();
    switch (family) {
        case Family::uniform_body:
            params["shape"] = body_shape == BodyShape::ball ? "ball" : "cube";
            params["radius"] = body_radius;
            break;
        case Family::product_qstable: params["q"] = q; break;
        case Family::sconcave_pareto: params["kappa"] = kappa; break;
        case Family::empirical: {
            nlohmann::json pts = nlohmann::json::array();
            for (std::size_t i = 0; i < cloud->count(); ++i) {
                nlohmann::json row = nlohmann::json::array();
                for (std::size_t j = 0; j < cloud->n(); ++j) row.push_back(cloud->points.at(i, j));
                pts.push_back(std::move(row));
            }
            params["points"] = std::move(pts);
            params["seed"] = cloud->seed;
            break;
        }
        default: break;
    }
    nlohmann::json j{{"family", family_name(family)}, {"dim", dim}, {"params", params}};
    if (affine) {
        nlohmann::json A = nlohmann::json::array();
        for (std::size_t i = 0; i < affine->A.rows; ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t c = 0; c < affine->A.cols; ++c) row.push_back(affine->A.at(i, c));
            A.push_back(std::move(row));
        }
        j["affine"] = nlohmann::json{{"A", A}, {"b", affine->b}};
    } else {
        j["affine"] = nullptr;
    }
    return j;
}

MeasureSpec MeasureSpec::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("measure spec must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        if (k != "family" && k != "dim" && k != "params" && k != "affine")
            throw ConfigError("unknown key in measure spec: " + k);
    }
    if (!j.contains("family") || !j.contains("dim"))
        throw ConfigError("measure spec needs 'family' and 'dim'");
    MeasureSpec s;
    s.family = family_from_name(j.at("family").get<std::string>());
    s.dim = j.at("dim").get<int>();
    nlohmann::json params = j.value("params", nlohmann::json::object());
    auto check_params = [&params](std::initializer_list<const char*> allowed) {
        for (auto it = params.begin(); it != params.end(); ++it) {
            bool ok = false;
            for (const char* a : allowed)
                if (it.key() == a) ok = true;
            if (!ok) throw ConfigError("unknown param key: " + it.key());
        }
    };
    switch (s.family) {
        case Family::uniform_body: {
            check_params({"shape", "radius"});
            std::string shape = params.value("shape", "ball");
            if (shape == "ball") s.body_shape = BodyShape::ball;
            else if (shape == "cube") s.body_shape = BodyShape::cube;
            else throw ConfigError("uniform_body shape must be ball or cube");
            s.body_radius = params.value("radius", 1.0);
            break;
        }
        case Family::product_qstable:
            check_params({"q"});
            s.q = params.at("q").get<double>();
            break;
        case Family::sconcave_pareto:
            check_params({"kappa"});
            s.kappa = params.at("kappa").get<double>();
            break;
        case Family::empirical: {
            check_params({"points", "seed", "csv"});
            PointCloud cloud;
            if (params.contains("csv")) {
                cloud = read_cloud_csv(params.at("csv").get<std::string>());
            } else {
                const auto& pts = params.at("points");
                std::size_t rows = pts.size();
                if (rows == 0) throw ConfigError("empirical points empty");
                std::size_t cols = pts.at(0).size();
                cloud.points = Matrix(rows, cols);
                for (std::size_t i = 0; i < rows; ++i) {
                    if (pts.at(i).size() != cols) throw ConfigError("ragged empirical points");
                    for (std::size_t c = 0; c < cols; ++c)
                        cloud.points.at(i, c) = pts.at(i).at(c).get<double>();
                }
            }
            cloud.seed = params.value("seed", (std::uint64_t)0);
            s.cloud = std::make_shared<const PointCloud>(std::move(cloud));
            break;
        }
        default: check_params({}); break;
    }
    if (j.contains("affine") && !j.at("affine").is_null()) {
        const auto& aj = j.at("affine");
        AffineMap map;
        const auto& A = aj.at("A");
        std::size_t n = A.size();
        map.A = Matrix(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t c = 0; c < n; ++c) map.A.at(i, c) = A.at(i).at(c).get<double>();
        map.b = aj.at("b").get<Vec>();
        s.affine = std::move(map);
    }
    s.validate();
    return s;
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

namespace {

void sample_base_row(const MeasureSpec& spec, RngStream& rng, double* row) {
    const int n = spec.dim;
    switch (spec.family) {
        case Family::gaussian_std:
            for (int j = 0; j < n; ++j) row[j] = rng.normal();
            return;
        case Family::uniform_cube:
            for (int j = 0; j < n; ++j) row[j] = rng.uniform(-1.0, 1.0);
            return;
        case Family::uniform_body: {
            const double r = spec.body_radius;
            if (spec.body_shape == BodyShape::cube) {
                for (int j = 0; j < n; ++j) row[j] = rng.uniform(-r, r);
                return;
            }
            // Rejection from the bounding box; stall guard per contract.
            for (std::size_t attempts = 1;; ++attempts) {
                double s = 0.0;
                for (int j = 0; j < n; ++j) {
                    row[j] = rng.uniform(-1.0, 1.0);
                    s += row[j] * row[j];
                }
                if (s <= 1.0) {
                    for (int j = 0; j < n; ++j) row[j] *= r;
                    return;
                }
                if (attempts >= 10000000)
                    throw DegenerateInput("degenerate body: rejection sampling stalled");
            }
        }
        case Family::product_cauchy:
            for (int j = 0; j < n; ++j) row[j] = rng.cauchy();
            return;
        case Family::product_qstable:
            for (int j = 0; j < n; ++j) row[j] = rng.stable_symmetric(spec.q);
            return;
        case Family::sconcave_pareto: {
            std::span<double> dir(row, (std::size_t)n);
            rng.unit_sphere(dir);
            double g1 = rng.gamma((double)n);
            double g2 = rng.gamma(spec.kappa);
            double s = g1 / (g1 + g2);     // Beta(n, kappa)
            double radius = s / (1.0 - s);  // radial law r^{n-1}(1+r)^{-(n+kappa)}
            for (int j = 0; j < n; ++j) row[j] *= radius;
            return;
        }
        case Family::empirical: {
            const PointCloud& c = *spec.cloud;
            std::size_t idx = std::min(c.count() - 1,
                                       (std::size_t)(rng.uniform01() * (double)c.count()));
            const double* src = c.points.row(idx);
            std::copy(src, src + n, row);
            return;
        }
    }
    throw ConfigError("unknown family in sample");
}

}  // namespace

PointCloud sample(const MeasureSpec& spec, std::size_t count, std::uint64_t seed) {
    spec.validate();
    if (count < 1) throw ConfigError("sample count must be >= 1");
    PointCloud cloud;
    cloud.seed = seed;
    cloud.points = Matrix(count, (std::size_t)spec.dim);
    RngStream rng = RngStream::derive(seed, 0);
    for (std::size_t i = 0; i < count; ++i) sample_base_row(spec, rng, cloud.points.row(i));
    if (spec.affine) {
        const AffineMap& map = *spec.affine;
        Vec tmp((std::size_t)spec.dim);
        for (std::size_t i = 0; i < count; ++i) {
            double* row = cloud.points.row(i);
            Vec y = mat_vec(map.A, std::span<const double>(row, (std::size_t)spec.dim));
            for (int j = 0; j < spec.dim; ++j) row[j] = y[j] + map.b[j];
        }
        (void)tmp;
    }
    return cloud;
}

// ---------------------------------------------------------------------------
// Density
// ---------------------------------------------------------------------------

namespace {

double pareto_log_normalizer(int n, double kappa) {
    // integral of (1+|x|)^{-(n+kappa)} = n omega_n B(n, kappa)
    double log_sphere = std::log((double)n) + 0.5 * n * std::log(kPi) -
                        std::lgamma(0.5 * n + 1.0);
    return -(log_sphere + num::log_beta((double)n, kappa));
}

double density_base(const MeasureSpec& spec, std::span<const double> x) {
    const int n = spec.dim;
    switch (spec.family) {
        case Family::gaussian_std: {
            double s = dot(x, x);
            return std::exp(-0.5 * s - 0.5 * n * std::log(2.0 * kPi));
        }
        case Family::uniform_cube: {
            for (double v : x)
                if (std::fabs(v) > 1.0) return 0.0;
            return std::exp(-n * std::log(2.0));
        }
        case Family::uniform_body: {
            const double r = spec.body_radius;
            if (spec.body_shape == BodyShape::cube) {
                for (double v : x)
                    if (std::fabs(v) > r) return 0.0;
                return std::exp(-n * std::log(2.0 * r));
            }
            if (dot(x, x) > r * r) return 0.0;
            return 1.0 / (num::unit_ball_volume(n) * std::pow(r, n));
        }
        case Family::product_cauchy: {
            double logf = 0.0;
            for (double v : x) logf += -std::log(kPi) - std::log1p(v * v);
            return std::exp(logf);
        }
        case Family::sconcave_pareto: {
            double r = norm(x);
            return std::exp(pareto_log_normalizer(n, spec.kappa) -
                            (n + spec.kappa) * std::log1p(r));
        }
        default:
            throw UnsupportedOperation("density not available for family " +
                                       family_name(spec.family));
    }
}

}  // namespace

double density(const MeasureSpec& spec, std::span<const double> x) {
    if (!spec.has_density())
        throw UnsupportedOperation("density not available for family " + family_name(spec.family));
    if ((int)x.size() != spec.dim) throw ConfigError("density: dimension mismatch");
    if (!spec.affine) return density_base(spec, x);
    double det = 0.0;
    Matrix inv = invert_matrix(spec.affine->A, &det);
    Vec z = mat_vec(inv, sub(x, spec.affine->b));
    return density_base(spec, z) / std::fabs(det);
}

// ---------------------------------------------------------------------------
// Half-space mass
// ---------------------------------------------------------------------------

double radial_marginal_tail(const MeasureSpec& spec, double t) {
    const int n = spec.dim;
    switch (spec.family) {
        case Family::gaussian_std: return num::normal_sf(t);
        case Family::uniform_body:
            if (spec.body_shape == BodyShape::ball)
                return num::ball_coordinate_tail(n, t / spec.body_radius);
            break;
        case Family::sconcave_pareto: {
            if (t == 0.0) return 0.5;
            const double kappa = spec.kappa;
            double logB = num::log_beta((double)n, kappa);
            auto integrand = [&](double s) {
                if (s <= 0.0 || s >= 1.0) return 0.0;
                double r = s / (1.0 - s);
                double w = std::exp((n - 1) * std::log(s) + (kappa - 1.0) * std::log1p(-s) - logB);
                return w * num::sphere_cap_fraction(n, t / r);
            };
            auto q = num::integrate(integrand, 0.0, 1.0, 1e-12, 1e-10);
            return std::clamp(q.value, 0.0, 1.0);
        }
        default: break;
    }
    throw UnsupportedOperation("radial_marginal_tail: family is not rotation invariant");
}

namespace {

MassEstimate mass_mc(const MeasureSpec& spec, std::span<const double> u, double t,
                     std::size_t budget, std::uint64_t seed) {
    PointCloud cloud = sample(spec, budget, splitmix64(seed ^ 0x6d5f3a1cULL));
    std::vector<double> dots(cloud.count());
    kernels::dot_batch(cloud.points.data.data(), cloud.count(), cloud.n(), u.data(), dots.data());
    double hits = (double)kernels::count_ge(dots.data(), dots.size(), t);
    double p = hits / (double)budget;
    MassEstimate m;
    m.value = p;
    m.std_error = std::sqrt(std::max(p * (1.0 - p), 1.0 / (double)budget) / (double)budget);
    m.exact = false;
    return m;
}

MassEstimate mass_base(const MeasureSpec& spec, std::span<const double> u, double t,
                       std::size_t budget, std::uint64_t seed) {
    MassEstimate m;
    m.exact = true;
    const int n = spec.dim;
    switch (spec.family) {
        case Family::gaussian_std:
            m.value = num::normal_sf(t);
            return m;
        case Family::uniform_cube: {
            auto tail = num::uniform_sum_tail(u, t);
            if (tail) {
                m.value = *tail;
                return m;
            }
            return mass_mc(spec, u, t, budget, seed);
        }
        case Family::uniform_body: {
            if (spec.body_shape == BodyShape::ball) {
                m.value = num::ball_coordinate_tail(n, t / spec.body_radius);
                return m;
            }
            auto tail = num::uniform_sum_tail(u, t / spec.body_radius);
            if (tail) {
                m.value = *tail;
                return m;
            }
            return mass_mc(spec, u, t, budget, seed);
        }
        case Family::product_cauchy: {
            double gamma = 0.0;
            for (double v : u) gamma += std::fabs(v);
            m.value = 0.5 - std::atan(t / gamma) / kPi;
            return m;
        }
        case Family::product_qstable: {
            if (spec.q == 1.0) {
                double gamma = 0.0;
                for (double v : u) gamma += std::fabs(v);
                m.value = 0.5 - std::atan(t / gamma) / kPi;
                return m;
            }
            // One-dimensional marginal: <X, u> ~ ||u||_q * S_q.
            double scale = 0.0;
            for (double v : u) scale += std::pow(std::fabs(v), spec.q);
            scale = std::pow(scale, 1.0 / spec.q);
            RngStream rng = RngStream::derive(seed ^ 0x57ab1eULL, 1);
            double thr = t / scale;
            std::size_t hits = 0;
            for (std::size_t i = 0; i < budget; ++i)
                if (rng.stable_symmetric(spec.q) >= thr) ++hits;
            double p = (double)hits / (double)budget;
            m.value = p;
            m.std_error =
                std::sqrt(std::max(p * (1.0 - p), 1.0 / (double)budget) / (double)budget);
            m.exact = false;
            return m;
        }
        case Family::sconcave_pareto:
            m.value = radial_marginal_tail(spec, t);
            return m;
        case Family::empirical: {
            const PointCloud& c = *spec.cloud;
            std::vector<double> dots(c.count());
            kernels::dot_batch(c.points.data.data(), c.count(), c.n(), u.data(), dots.data());
            m.value = (double)kernels::count_ge(dots.data(), dots.size(), t) / (double)c.count();
            return m;
        }
    }
    throw ConfigError("unknown family in halfspace_mass");
}

}  // namespace

MassEstimate halfspace_mass(const MeasureSpec& spec, std::span<const double> u, double t,
                            std::size_t mc_budget, std::uint64_t seed) {
    if ((int)u.size() != spec.dim) throw ConfigError("halfspace_mass: dimension mismatch");
    double nu = norm(u);
    if (std::fabs(nu - 1.0) > 1e-9) throw ConfigError("halfspace_mass: u must be a unit vector");
    if (!spec.affine) return mass_base(spec, u, t, mc_budget, seed);
    // <AX + b, u> >= t  <=>  <X, A^T u> >= t - <b, u>
    Vec v = mat_tvec(spec.affine->A, u);
    double nv = norm(v);
    if (nv < 1e-14) throw DegenerateInput("halfspace_mass: affine map collapses direction");
    for (double& w : v) w /= nv;
    double tt = (t - dot(std::span<const double>(spec.affine->b), u)) / nv;
    MeasureSpec base = spec;
    base.affine.reset();
    return mass_base(base, v, tt, mc_budget, seed);
}

// ---------------------------------------------------------------------------
// Log-Laplace transform
// ---------------------------------------------------------------------------

namespace {

// ln(sinh z / z) with the removable singularity handled.
double log_sinhc(double z) {
    double a = std::fabs(z);
    if (a < 1e-5) {
        double z2 = z * z;
        return z2 / 6.0 - z2 * z2 / 180.0;
    }
    if (a > 30.0) return a - std::log(2.0 * a) + std::log1p(-std::exp(-2.0 * a));
    return std::log(std::sinh(a) / a);
}

// d/dz ln(sinh z / z) = coth z - 1/z
double log_sinhc_deriv(double z) {
    double a = std::fabs(z);
    if (a < 1e-5) return z / 3.0 - z * z * z / 45.0;
    double v = 1.0 / std::tanh(z) - 1.0 / z;
    return v;
}

double ball_log_laplace_1d(int n, double m) {
    // ln E exp(m * theta) for theta the coordinate of a uniform point in the
    // unit n-ball; m >= 0.
    if (m == 0.0) return 0.0;
    double logB = num::log_beta(0.5, 0.5 * (n + 1));
    auto integrand = [&](double s) {
        return std::exp(m * (s - 1.0) + 0.5 * (n + 1.0 - 2.0) * std::log1p(-s * s) - logB);
    };
    auto q = num::integrate(integrand, -1.0, 1.0, 1e-13, 1e-11);
    return m + std::log(q.value);
}

double log_laplace_base(const MeasureSpec& spec, std::span<const double> xi) {
    switch (spec.family) {
        case Family::gaussian_std: return 0.5 * dot(xi, xi);
        case Family::uniform_cube: {
            double s = 0.0;
            for (double z : xi) s += log_sinhc(z);
            return s;
        }
        case Family::uniform_body: {
            const double r = spec.body_radius;
            if (spec.body_shape == BodyShape::cube) {
                double s = 0.0;
                for (double z : xi) s += log_sinhc(r * z);
                return s;
            }
            return ball_log_laplace_1d(spec.dim, r * norm(xi));
        }
        case Family::empirical: {
            const PointCloud& c = *spec.cloud;
            std::vector<double> dots(c.count());
            kernels::dot_batch(c.points.data.data(), c.count(), c.n(), xi.data(), dots.data());
            double mx = kernels::max_val(dots.data(), dots.size());
            double s = 0.0;
            for (double d : dots) s += std::exp(d - mx);
            return mx + std::log(s / (double)c.count());
        }
        default:
            throw UnsupportedOperation("infinite log-Laplace: heavy-tailed family " +
                                       family_name(spec.family));
    }
}

}  // namespace

double log_laplace(const MeasureSpec& spec, std::span<const double> xi) {
    if ((int)xi.size() != spec.dim) throw ConfigError("log_laplace: dimension mismatch");
    bool zero = true;
    for (double v : xi)
        if (v != 0.0) zero = false;
    if (zero) return 0.0;
    if (!spec.has_log_laplace())
        throw UnsupportedOperation("infinite log-Laplace: heavy-tailed family " +
                                   family_name(spec.family));
    if (!spec.affine) return log_laplace_base(spec, xi);
    Vec v = mat_tvec(spec.affine->A, xi);
    MeasureSpec base = spec;
    base.affine.reset();
    return dot(std::span<const double>(spec.affine->b), xi) + log_laplace_base(base, v);
}

Vec log_laplace_gradient(const MeasureSpec& spec, std::span<const double> xi) {
    if (!spec.has_log_laplace())
        throw UnsupportedOperation("infinite log-Laplace: heavy-tailed family " +
                                   family_name(spec.family));
    if (spec.affine) {
        Vec v = mat_tvec(spec.affine->A, xi);
        MeasureSpec base = spec;
        base.affine.reset();
        Vec g = log_laplace_gradient(base, v);
        Vec out = mat_vec(spec.affine->A, g);
        for (int j = 0; j < spec.dim; ++j) out[j] += spec.affine->b[j];
        return out;
    }
    const int n = spec.dim;
    Vec g((std::size_t)n, 0.0);
    switch (spec.family) {
        case Family::gaussian_std:
            return Vec(xi.begin(), xi.end());
        case Family::uniform_cube:
            for (int j = 0; j < n; ++j) g[j] = log_sinhc_deriv(xi[j]);
            return g;
        case Family::uniform_body: {
            const double r = spec.body_radius;
            if (spec.body_shape == BodyShape::cube) {
                for (int j = 0; j < n; ++j) g[j] = r * log_sinhc_deriv(r * xi[j]);
                return g;
            }
            double m = norm(xi);
            if (m < 1e-12) return g;
            const double h = 1e-5;
            double up = ball_log_laplace_1d(n, r * (m + h));
            double dn = ball_log_laplace_1d(n, r * std::max(0.0, m - h));
            double dLdm = r * (up - dn) / (2.0 * h);
            for (int j = 0; j < n; ++j) g[j] = dLdm * xi[j] / m;
            return g;
        }
        case Family::empirical: {
            const PointCloud& c = *spec.cloud;
            std::vector<double> dots(c.count());
            kernels::dot_batch(c.points.data.data(), c.count(), c.n(), xi.data(), dots.data());
            double mx = kernels::max_val(dots.data(), dots.size());
            double z = 0.0;
            for (double d : dots) z += std::exp(d - mx);
            for (std::size_t i = 0; i < c.count(); ++i) {
                double w = std::exp(dots[i] - mx) / z;
                const double* row = c.points.row(i);
                for (int j = 0; j < n; ++j) g[j] += w * row[j];
            }
            return g;
        }
        default:
            throw UnsupportedOperation("log_laplace_gradient: unsupported family");
    }
}

Vec barycenter(const MeasureSpec& spec) {
    Vec base((std::size_t)spec.dim, 0.0);
    if (spec.family == Family::empirical) {
        const PointCloud& c = *spec.cloud;
        for (std::size_t i = 0; i < c.count(); ++i)
            for (int j = 0; j < spec.dim; ++j) base[j] += c.points.at(i, j);
        for (double& v : base) v /= (double)c.count();
    }
    // all non-empirical families are symmetric: barycenter 0 (cauchy/qstable
    // have no mean; 0 is still the symmetry center used downstream)
    if (spec.affine) {
        Vec out = mat_vec(spec.affine->A, base);
        for (int j = 0; j < spec.dim; ++j) out[j] += spec.affine->b[j];
        return out;
    }
    return base;
}

}  // namespace depthlab
