#pragma once

#include <functional>
#include <optional>
#include <span>

namespace depthlab::num {

double normal_pdf(double x);
double normal_cdf(double x);
/// Upper tail P(Z >= x) = Phi(-x).
double normal_sf(double x);
/// Inverse of normal_cdf, accurate to ~1e-15 (rational seed + Newton polish).
double normal_quantile(double p);

double log_beta(double a, double b);
/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

double unit_ball_volume(int n);

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;
};

/// Adaptive Gauss-Kronrod 15(7) on [a, b].
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-10, double rel_tol = 1e-10, int max_splits = 2000);

/// Integral over [0, inf) via the substitution r = s / (1 - s).
QuadResult integrate_half_line(const std::function<double(double)>& f, double abs_tol = 1e-10,
                               double rel_tol = 1e-10);

struct WilsonInterval {
    double lo = 0.0;
    double hi = 1.0;
};

/// Wilson score interval; default z is the 99% two-sided normal quantile.
WilsonInterval wilson(double successes, double trials, double z = 2.5758293035489004);

/// P(sum_i w[i] * U_i >= t) with U_i iid uniform on [-1, 1], exact piecewise
/// polynomial (inclusion-exclusion over the weight subsets). Returns nullopt
/// when more than 22 weights survive pruning.
std::optional<double> uniform_sum_tail(std::span<const double> weights, double t);

/// Sup of the density of sum_i w[i] * U_i (bounded by the widest slab).
double uniform_sum_density_bound(std::span<const double> weights);

/// P(theta_1 >= c) for a uniform direction on S^{n-1}.
double sphere_cap_fraction(int n, double c);

/// P(X_1 >= c) for a uniform point in the unit n-ball.
double ball_coordinate_tail(int n, double c);

/// Deterministic golden-section maximizer on [a, b] (unimodal f).
double golden_section_max(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-10);

}  // namespace depthlab::num
