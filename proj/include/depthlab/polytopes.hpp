#pragma once

#include <cstdint>
#include <memory>
#include <mutex>

#include "depthlab/core.hpp"
#include "depthlab/measures.hpp"

namespace depthlab {

/// Random polytope K_N = conv{X_1..X_N} (or S_N = conv{+-X_1..+-X_N} when
/// symmetric). Generators are kept verbatim; extreme-point pruning happens
/// only inside the cached planar hull.
struct RandomPolytope {
    Matrix vertices;  // N x n generators
    bool symmetric = false;
    std::uint64_t seed = 0;

    RandomPolytope() : cache_(std::make_shared<Hull2DCache>()) {}
    RandomPolytope(Matrix verts, bool sym = false, std::uint64_t sd = 0)
        : vertices(std::move(verts)), symmetric(sym), seed(sd),
          cache_(std::make_shared<Hull2DCache>()) {}

    std::size_t n() const { return vertices.cols; }
    std::size_t generator_count() const { return vertices.rows; }

    /// h(u) = max_i <X_i, u> (max over +-X_i when symmetric).
    double support(std::span<const double> u) const;

    struct Hull2DCache {
        std::once_flag once;
        Matrix hull;  // ccw vertices, collinear points dropped
        bool degenerate = false;
    };
    const Hull2DCache& hull2d() const;

  private:
    mutable std::shared_ptr<Hull2DCache> cache_;
};

RandomPolytope make_polytope(const MeasureSpec& spec, std::size_t count, std::uint64_t seed,
                             bool symmetric = false);

struct MembershipResult {
    bool inside = false;
    Vec separator;            // unit vector; <x,sep> > max_i <X_i,sep> when outside
    double separation = 0.0;  // validated positive margin
    double dual_offset = 0.0; // certificate level from the LP / hull edge
};

/// Decides x in conv(generators). LP feasibility (phase-1 simplex, Bland) for
/// n >= 3; exact cached-hull point location in the plane. Separating
/// directions are validated before being returned; numerical failure raises
/// SolverFailure rather than returning a wrong verdict.
MembershipResult membership(const RandomPolytope& P, std::span<const double> x);

/// Force the LP path regardless of dimension (used by equivalence tests).
MembershipResult membership_lp(const RandomPolytope& P, std::span<const double> x);

/// Ordered ccw hull vertices (n == 2 only); collinear points dropped.
Matrix hull_2d(const RandomPolytope& P);

/// Shoelace area of the planar hull; 0 with *degenerate set when collinear.
double area_2d(const RandomPolytope& P, bool* degenerate = nullptr);

struct VolumeEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Hit-or-miss volume over the generator bounding box.
VolumeEstimate volume_mc(const RandomPolytope& P, std::size_t budget, std::uint64_t seed);

/// w_q(K) = (mean of h^q over uniform sphere directions)^{1/q}, q != 0.
double w_q(const RandomPolytope& P, double q, std::size_t sphere_budget, std::uint64_t seed);

}  // namespace depthlab
