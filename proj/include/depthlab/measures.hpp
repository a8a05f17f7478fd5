#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "depthlab/core.hpp"

namespace depthlab {

/// N sample vectors in R^n together with the seed that produced them; doubles
/// as an empirical measure with uniform weights 1/N.
struct PointCloud {
    Matrix points;  // N x n
    std::uint64_t seed = 0;

    std::size_t n() const { return points.cols; }
    std::size_t count() const { return points.rows; }
};

struct MeasureSpec;

/// CSV with header "x1,...,xn", one row per point. When spec is given, a
/// sidecar <path>.meta.json records the seed and the producing spec.
void write_cloud_csv(const PointCloud& cloud, const std::string& path,
                     const MeasureSpec* spec = nullptr);
PointCloud read_cloud_csv(const std::string& path);

enum class Family {
    gaussian_std,
    uniform_cube,    // uniform on [-1, 1]^n
    uniform_body,    // uniform on a ball or cube of a given radius
    product_cauchy,
    product_qstable,  // symmetric q-stable coordinates, q in [1, 2)
    sconcave_pareto,  // density proportional to (1 + |x|)^{-(n + kappa)}
    empirical,
};

std::string family_name(Family f);
Family family_from_name(const std::string& name);

enum class BodyShape { ball, cube };

/// Invertible affine pushforward X -> A X + b.
struct AffineMap {
    Matrix A;  // n x n
    Vec b;
};

/// Closed description of a sampleable probability measure on R^n.
struct MeasureSpec {
    Family family = Family::gaussian_std;
    int dim = 1;

    BodyShape body_shape = BodyShape::ball;  // uniform_body
    double body_radius = 1.0;
    double q = 1.5;      // product_qstable, must lie in [1, 2)
    double kappa = 3.0;  // sconcave_pareto, must exceed 1

    std::shared_ptr<const PointCloud> cloud;  // empirical
    std::optional<AffineMap> affine;

    static MeasureSpec gaussian(int n);
    static MeasureSpec cube(int n);
    static MeasureSpec body(int n, BodyShape shape, double radius = 1.0);
    static MeasureSpec cauchy(int n);
    static MeasureSpec qstable(int n, double q);
    static MeasureSpec pareto(int n, double kappa);
    static MeasureSpec empirical_cloud(PointCloud cloud);

    void validate() const;

    // Capability flags.
    bool has_density() const;
    bool has_log_laplace() const;
    bool symmetric() const;        // mu(-B) = mu(B) for the base family
    bool heavy_tailed() const;
    bool spherically_symmetric() const;  // base family invariant under rotations

    nlohmann::json to_json() const;
    static MeasureSpec from_json(const nlohmann::json& j);
};

PointCloud sample(const MeasureSpec& spec, std::size_t count, std::uint64_t seed);

double density(const MeasureSpec& spec, std::span<const double> x);

struct MassEstimate {
    double value = 0.0;
    double std_error = 0.0;  // 0 for closed-form / quadrature / exact-count paths
    bool exact = false;      // true when certified (closed form, quadrature, count)
};

/// mu({ x : <x, u> >= t }) for a unit direction u.
MassEstimate halfspace_mass(const MeasureSpec& spec, std::span<const double> u, double t,
                            std::size_t mc_budget = 200000, std::uint64_t seed = 0);

double log_laplace(const MeasureSpec& spec, std::span<const double> xi);

/// Gradient of the log-Laplace transform (closed form where available, else
/// central differences with step 1e-5).
Vec log_laplace_gradient(const MeasureSpec& spec, std::span<const double> xi);

Vec barycenter(const MeasureSpec& spec);

Vec center_point(const MeasureSpec& spec);

/// Tail P(<X, u> >= t) reduced to one dimension for the rotation-invariant
/// families; exposed because depth reuses it as the certified radial path.
double radial_marginal_tail(const MeasureSpec& spec, double t);

}  // namespace depthlab
