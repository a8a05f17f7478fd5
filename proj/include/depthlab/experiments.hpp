#pragma once

#include <cstdint>
#include <vector>

#include "depthlab/bodies.hpp"
#include "depthlab/depth.hpp"
#include "depthlab/measures.hpp"
#include "depthlab/report.hpp"

namespace depthlab {

struct InclusionTrialParams {
    std::size_t region_grid = 0;  // 0 -> default per dimension
    std::uint64_t grid_seed = 0;
    RegionParams region;
};

/// K_N vs T_{beta ln(N/n)}(mu): per trial, every inner boundary point of the
/// level set is tested with the polytope membership oracle. A trial fails only
/// on a certified-outside verdict; solver failures count as abstentions.
/// Failure frequency is compared against exp(-N^{1-beta} n^beta / 2).
ExperimentReport inclusion_trial(const MeasureSpec& spec, std::size_t N, double beta,
                                 std::size_t trials, std::uint64_t seed,
                                 const InclusionTrialParams& params = {});

/// Bound check for P(x not in K_N) <= (N phi/n exp(1 + phi - N phi/n))^n,
/// valid when N/n >= 1/phi + 1; the probability is estimated by MC with a
/// Wilson 99% interval.
ExperimentReport hlo_bound_check(const MeasureSpec& spec, std::span<const double> x,
                                 std::size_t N, std::size_t trials, std::uint64_t seed);

struct NmuResult {
    std::size_t n_hat = 0;       // smallest probed N certified p_N >= 1/2
    std::size_t band_lo = 0;     // largest N certified p_N < 1/2, plus one
    std::size_t band_hi = 0;     // == n_hat when decided
    bool undecided = false;
    double depth_used = 0.0;
    ExperimentReport report;
};

/// N_mu(x) = min{ N : P(x in K_N) >= 1/2 } by exponential search + bisection.
/// Probes share sample-stream prefixes, so the per-trial indicator is
/// monotone in N. Wilson intervals must exclude 1/2 for a probe to decide.
/// One-dimensional specs with exact masses use the closed form
/// p_N = 1 - a^N - b^N and return the exact minimum.
NmuResult nmu_estimate(const MeasureSpec& spec, std::span<const double> x,
                       std::size_t trials_per_probe, std::uint64_t seed);

/// vol(K_N)^{1/n} and vol(S_N)^{1/n} across an N sweep, with the scaling
/// ratios r(N) = E vol^{1/n} / (sqrt(ln N)/sqrt(n)) and the density-normalized
/// variant used for the lower-bound families.
ExperimentReport volume_scaling(const MeasureSpec& spec, const std::vector<std::size_t>& N_list,
                                std::size_t trials, std::uint64_t seed,
                                std::size_t mc_volume_budget = 20000);

/// Transversal frequency for the family of supporting half-spaces of `body`
/// with mass >= eps, against the bound 1 - 4 (11 gamma^2 eps^{gamma-2})^d.
ExperimentReport epsnet_transversal(const MeasureSpec& spec, const ConvexBodyApprox& body,
                                    double eps, double gamma, std::size_t N, std::size_t trials,
                                    std::uint64_t seed);

/// (a) the constructed n-point set shattered by supporting half-spaces of the
/// body; (b) no random (n+1)-point set shattered over an exhaustive direction
/// grid.
ExperimentReport vc_shatter_check(int n, const Matrix& body_vertices, std::size_t random_trials,
                                  std::uint64_t seed, std::size_t pattern_grid = 10000);

}  // namespace depthlab
