#pragma once

#include <cstdint>
#include <limits>

#include <json.hpp>

#include "depthlab/core.hpp"
#include "depthlab/measures.hpp"

namespace depthlab {

enum class DepthMethod { exact_2d, direction_grid, mc_bracket };

std::string depth_method_name(DepthMethod m);

/// Bracketed depth value. exact_2d and the closed-form analytic paths have
/// lower == upper; grid paths carry a certified lower bound when a modulus of
/// continuity is available and lower == 0 otherwise.
struct DepthEstimate {
    double lower = 0.0;
    double upper = 1.0;
    DepthMethod method = DepthMethod::direction_grid;
    std::size_t directions_used = 0;
};

struct DirectionBudget {
    std::size_t grid = 0;  // 0 -> default_grid_size(dim)
    std::size_t refine_steps = 48;
    std::uint64_t seed = 0;
    std::size_t mc_budget = 200000;
};

/// Exact Tukey depth of x for a planar cloud: angular sweep in O(N log N).
/// Points coincident with x count toward every half-plane.
DepthEstimate depth_empirical_2d(const PointCloud& cloud, std::span<const double> x);

/// Depth of x with respect to a measure spec. Uses the exact minimizing
/// direction where the family admits one; otherwise minimizes half-space mass
/// over a direction grid with local descent.
DepthEstimate depth_analytic(const MeasureSpec& spec, std::span<const double> x,
                             const DirectionBudget& budget = {});

/// depth_analytic for empirical specs routes to the exact sweep when n == 2.
DepthEstimate depth_at(const MeasureSpec& spec, std::span<const double> x,
                       const DirectionBudget& budget = {});

struct MaxDepthResult {
    Vec point;
    double depth = 0.0;
    double p_mu = 0.0;  // -ln(depth)
};

MaxDepthResult max_depth(const MeasureSpec& spec, const DirectionBudget& budget = {});
MaxDepthResult max_depth(const PointCloud& cloud, const DirectionBudget& budget = {});

Vec center_point(const MeasureSpec& spec);

/// y in U_p(mu): the half-space { <x, y> >= 1 } has mass <= e^{-p}. The strict
/// variant (mass < e^{-p}) is the V_p membership test.
bool up_membership(const MeasureSpec& spec, double p, std::span<const double> y,
                   bool strict = false);

/// Paired inner/outer approximation of a convex body on a direction grid:
/// the inner body is conv(boundary_points), the outer body is the
/// intersection of the half-spaces { <x, u_i> <= support_values[i] }.
struct ConvexBodyApprox {
    Matrix grid;             // M x n unit directions
    Matrix boundary_points;  // M x n
    Vec support_values;      // M
    Vec center;
    double p = std::numeric_limits<double>::quiet_NaN();

    std::size_t dim() const { return grid.cols; }
    /// Outer-vs-inner support gap along grid direction i.
    double support_gap(std::size_t i) const;
    double max_support_gap() const;
    /// Largest distance from center to a boundary point.
    double outer_radius() const;
    /// true when every outer half-space constraint holds at x (within tol);
    /// violation certifies x outside the body.
    bool inside_outer(std::span<const double> x, double tol = 1e-9) const;

    nlohmann::json to_json() const;
    static ConvexBodyApprox from_json(const nlohmann::json& j);
};

struct RegionParams {
    std::size_t grid = 0;  // 0 -> default_grid_size(dim)
    std::uint64_t grid_seed = 0;
    double rel_tol = 1e-3;
    int max_bisect_iters = 40;
    DirectionBudget depth_budget;
};

/// Builds a body approximation by radial bisection of an inside-predicate from
/// a given interior center. Shared by tukey_region and bp_level_set.
ConvexBodyApprox radial_level_body(const Vec& center, const Matrix& directions,
                                   const std::function<bool(std::span<const double>)>& inside,
                                   double rel_tol, int max_iters, double p);

/// T_p(mu) = { x : depth(x) >= e^{-p} } as a ConvexBodyApprox.
/// Throws EmptyLevelSet when p < p(mu) estimate.
ConvexBodyApprox tukey_region(const MeasureSpec& spec, double p, const RegionParams& params = {});
ConvexBodyApprox tukey_region(const MeasureSpec& spec, double p, const Matrix& directions,
                              const RegionParams& params = {});
ConvexBodyApprox tukey_region(const PointCloud& cloud, double p, const RegionParams& params = {});

/// Certified lower bound of the depth at x (grid minimum minus the
/// Lipschitz-modulus slack). Equals the exact value for closed-form families.
double depth_lower_certified(const MeasureSpec& spec, std::span<const double> x,
                             std::size_t grid_size = 0, std::uint64_t grid_seed = 0);

}  // namespace depthlab
