#pragma once

#include <cstdint>

#include "depthlab/core.hpp"

namespace depthlab {

/// Default grid sizes: 256 equally spaced angles in the plane, 1024
/// quasirandom directions otherwise.
std::size_t default_grid_size(int dim);

/// Reproducible unit-direction grid.
///   dim == 1: {+1, -1} repeated as needed.
///   dim == 2: equally spaced angles, rotated by a seeded phase.
///   dim == 3: Fibonacci sphere with a seeded phase.
///   dim >= 4: Kronecker low-discrepancy sequence mapped through the normal
///             quantile and normalized.
Matrix direction_grid(int dim, std::size_t count, std::uint64_t seed = 0);

/// Estimated covering radius of the grid in radians (deterministic probe set,
/// inflated by a 1.5 safety factor). Used as the grid-gap term in certified
/// depth lower bounds.
double covering_radius_estimate(const Matrix& grid);

/// Largest angle between consecutive planar grid directions; exact for dim 2.
double covering_radius_2d(std::size_t count);

}  // namespace depthlab
