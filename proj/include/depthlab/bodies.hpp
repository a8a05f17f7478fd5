#pragma once

#include <cstdint>
#include <functional>

#include "depthlab/core.hpp"
#include "depthlab/depth.hpp"
#include "depthlab/measures.hpp"
#include "depthlab/polytopes.hpp"

namespace depthlab {

/// h_{Z_p^+(mu)}(y) = || <.,y>_+ ||_{L^p(mu)}. Closed forms for the gaussian,
/// ball and pareto families, exact tail quadrature for cubes, plain averages
/// for empirical sources, MC otherwise.
double zp_plus_support(const MeasureSpec& spec, double p, std::span<const double> y,
                       std::size_t mc_budget = 200000, std::uint64_t seed = 0);
double zp_plus_support(const PointCloud& cloud, double p, std::span<const double> y);

ConvexBodyApprox zp_plus_body(const MeasureSpec& spec, double p, const Matrix& directions,
                              std::size_t mc_budget = 200000, std::uint64_t seed = 0);
ConvexBodyApprox zp_plus_body(const MeasureSpec& spec, double p, std::size_t grid = 0,
                              std::uint64_t grid_seed = 0);

struct CramerParams {
    int max_iters = 200;
    double grad_tol = 1e-8;
    double initial_step = 1.0;
    double backtrack = 0.5;
    // Stop as soon as the running lower bound exceeds this level (the value is
    // then certified above the level even without convergence).
    double early_exit_above = std::numeric_limits<double>::infinity();
};

struct CramerResult {
    double value = 0.0;  // Lambda*(x); lower bound when !converged
    Vec xi;              // achieving (or last) dual point
    bool finite = true;
    bool converged = false;
    Vec certificate_dir;  // direction of linear growth when !finite
};

/// Legendre transform of the log-Laplace transform by backtracking gradient
/// ascent from xi = 0. Exact quadratic shortcut for the standard gaussian.
CramerResult cramer_transform(const MeasureSpec& spec, std::span<const double> x,
                              const CramerParams& params = {});

/// Generic ascent path without the gaussian shortcut (cross-checked in tests).
CramerResult cramer_transform_ascent(const MeasureSpec& spec, std::span<const double> x,
                                     const CramerParams& params = {});

/// B_p(mu) = { x : Lambda*(x) <= p } via radial bisection from the barycenter.
ConvexBodyApprox bp_level_set(const MeasureSpec& spec, double p, const Matrix& directions,
                              const RegionParams& params = {});
ConvexBodyApprox bp_level_set(const MeasureSpec& spec, double p, const RegionParams& params = {});

/// Radial function of K.Ball's body K_p(f_mu) at x != 0:
/// rho(x) = ( (1/f(0)) int_0^inf p r^{p-1} f(r x) dr )^{1/p}.
double ball_body_radial(const MeasureSpec& spec, double p, std::span<const double> x);

struct PolarHalfspaces {
    Matrix normals;  // one row per vertex
    Vec offsets;     // all ones: { x : <x, v_i> <= 1 }
    nlohmann::json to_json() const;
};

/// Polar of conv(vertices); requires 0 in the interior (verified by LP).
PolarHalfspaces polar_polytope(const Matrix& vertices);

enum class InclusionVerdict { certified_in, certified_out, undecided };

std::string verdict_name(InclusionVerdict v);

/// Membership oracle for the right-hand body of an inclusion check.
/// contains(x) returns +1 (certified inside), -1 (certified outside) or 0.
struct BodyOracle {
    std::function<int(std::span<const double>)> contains;
    const Matrix* grid = nullptr;  // optional support data on a matched grid
    const Vec* support = nullptr;
    bool exact_membership = false;  // oracle certifies on its own
};

struct InclusionResult {
    InclusionVerdict verdict = InclusionVerdict::undecided;
    std::ptrdiff_t witness_index = -1;  // boundary point certified outside
    Vec witness_point;
    std::size_t undecided_points = 0;
    bool support_ok = true;
};

/// certified_in iff every inner-hull generator of A passes B's membership at
/// the given scale AND (when grid-matched support data exists) every A support
/// value is <= scale * B support value. certified_out on a certified outside
/// witness; undecided otherwise. Never upgrades undecided to a pass.
InclusionResult check_inclusion(const ConvexBodyApprox& A, const BodyOracle& B, double scale,
                                double tol = 1e-9);

BodyOracle polytope_oracle(const RandomPolytope& P);
BodyOracle body_approx_oracle(const ConvexBodyApprox& B, double tol = 1e-9);
/// Inside means value(x) <= threshold; bracket returns (lower, upper) bounds.
BodyOracle sublevel_oracle(std::function<std::pair<double, double>(std::span<const double>)> bracket,
                           double threshold, double tol = 1e-9);
/// Inside means value(x) >= threshold (e.g. depth level sets).
BodyOracle superlevel_oracle(
    std::function<std::pair<double, double>(std::span<const double>)> bracket, double threshold,
    double tol = 1e-9);

/// Smallest alpha with h_{Z_{2p}^+}(u) <= 2 alpha h_{Z_p^+}(u) over the probe
/// set (measured alpha-regularity, Definition-4.2 style).
double alpha_regularity(const MeasureSpec& spec, std::span<const double> p_probes,
                        std::size_t grid = 0, std::uint64_t grid_seed = 0);
double alpha_regularity(const MeasureSpec& spec);

// Star-body helpers (uniform measure on a star-shaped set given by its radial
// function); back the Ball-body and volume-lower-bound experiments.
using RadialFn = std::function<double(std::span<const double>)>;

double star_volume(const RadialFn& rho, int n, std::size_t sphere_grid = 4096);
double star_zp_support(const RadialFn& rho, int n, double p, std::span<const double> y,
                       std::size_t sphere_grid = 4096);

}  // namespace depthlab
