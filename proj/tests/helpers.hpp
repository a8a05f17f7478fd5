#pragma once

#include <cmath>
#include <vector>

#include "depthlab/core.hpp"
#include "depthlab/measures.hpp"
#include "depthlab/rng.hpp"

namespace testhelp {

using depthlab::Matrix;
using depthlab::PointCloud;
using depthlab::Vec;

// Brute-force planar Tukey depth: evaluates the closed half-plane count at the
// midpoints of every pair of critical angles (plus the critical angles),
// counting with dot-product predicates. O(N^2) candidates, O(N) count each.
inline double brute_force_depth_2d(const PointCloud& cloud, std::span<const double> x) {
    const std::size_t N = cloud.count();
    std::size_t coincident = 0;
    std::vector<double> angles;
    for (std::size_t i = 0; i < N; ++i) {
        double dx = cloud.points.at(i, 0) - x[0];
        double dy = cloud.points.at(i, 1) - x[1];
        if (dx == 0.0 && dy == 0.0) {
            ++coincident;
            continue;
        }
        angles.push_back(std::atan2(dy, dx));
    }
    if (angles.empty()) return 1.0;
    const double half_pi = std::acos(0.0);
    std::vector<double> crit;
    for (double a : angles) {
        crit.push_back(a - half_pi);
        crit.push_back(a + half_pi);
    }
    // Midpoints of every pair of critical angles (and their antipodes) cover
    // all open arcs; the bare critical angles are avoided because a point on
    // the window boundary has an arbitrary floating-point sign there.
    std::vector<double> cands;
    for (std::size_t i = 0; i < crit.size(); ++i) {
        for (std::size_t j = i + 1; j < crit.size(); ++j) {
            cands.push_back(0.5 * (crit[i] + crit[j]));
            cands.push_back(0.5 * (crit[i] + crit[j]) + 2.0 * half_pi);
        }
    }
    std::size_t best = angles.size();
    for (double phi : cands) {
        double ux = std::cos(phi), uy = std::sin(phi);
        std::size_t cnt = 0;
        for (std::size_t i = 0; i < N; ++i) {
            double dx = cloud.points.at(i, 0) - x[0];
            double dy = cloud.points.at(i, 1) - x[1];
            if (dx == 0.0 && dy == 0.0) continue;
            if (dx * ux + dy * uy >= 0.0) ++cnt;
        }
        best = std::min(best, cnt);
    }
    return (double)(best + coincident) / (double)N;
}

inline PointCloud random_cloud(int n, std::size_t count, std::uint64_t seed, double scale = 1.0) {
    depthlab::RngStream rng = depthlab::RngStream::derive(seed, 99);
    PointCloud c;
    c.seed = seed;
    c.points = Matrix(count, (std::size_t)n);
    for (std::size_t i = 0; i < count; ++i)
        for (int j = 0; j < n; ++j) c.points.at(i, j) = scale * rng.normal();
    return c;
}

}  // namespace testhelp
