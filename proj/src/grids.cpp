#include <cmath>

#include "depthlab/grids.hpp"
#include "depthlab/kernels.hpp"
#include "depthlab/numerics.hpp"
#include "depthlab/rng.hpp"

namespace depthlab {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Generalized golden ratios for the Kronecker sequence.
double plastic_gamma(int d) {
    double x = 1.0;
    for (int i = 0; i < 64; ++i) x = std::pow(1.0 + x, 1.0 / (d + 1));
    return x;
}
}  // namespace

std::size_t default_grid_size(int dim) { return dim <= 2 ? 256 : 1024; }

Matrix direction_grid(int dim, std::size_t count, std::uint64_t seed) {
    if (dim < 1) throw DegenerateInput("direction_grid: dim must be >= 1");
    if (count == 0) throw DegenerateInput("direction_grid: empty grid");
    Matrix g(count, (std::size_t)dim);
    if (dim == 1) {
        for (std::size_t i = 0; i < count; ++i) g.at(i, 0) = (i % 2 == 0) ? 1.0 : -1.0;
        return g;
    }
    if (dim == 2) {
        double phase = (seed == 0) ? 0.0 : 2.0 * kPi * (splitmix64(seed) >> 11) * 0x1.0p-53;
        for (std::size_t i = 0; i < count; ++i) {
            double a = phase + 2.0 * kPi * (double)i / (double)count;
            g.at(i, 0) = std::cos(a);
            g.at(i, 1) = std::sin(a);
        }
        return g;
    }
    if (dim == 3) {
        const double golden = kPi * (3.0 - std::sqrt(5.0));
        double phase = (seed == 0) ? 0.0 : 2.0 * kPi * (splitmix64(seed) >> 11) * 0x1.0p-53;
        for (std::size_t i = 0; i < count; ++i) {
            double z = 1.0 - (2.0 * i + 1.0) / (double)count;
            double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            double a = phase + golden * (double)i;
            g.at(i, 0) = r * std::cos(a);
            g.at(i, 1) = r * std::sin(a);
            g.at(i, 2) = z;
        }
        return g;
    }
    // Kronecker sequence in [0,1)^dim -> normal quantile -> normalize.
    double gam = plastic_gamma(dim);
    std::vector<double> alpha(dim);
    for (int j = 0; j < dim; ++j) alpha[j] = std::pow(1.0 / gam, j + 1);
    double shift = (splitmix64(seed + 1) >> 11) * 0x1.0p-53;
    for (std::size_t i = 0; i < count; ++i) {
        double s = 0.0;
        for (int j = 0; j < dim; ++j) {
            double u = std::fmod(shift + alpha[j] * (double)(i + 1), 1.0);
            u = std::min(std::max(u, 1e-12), 1.0 - 1e-12);
            double v = num::normal_quantile(u);
            g.at(i, j) = v;
            s += v * v;
        }
        if (s < 1e-12) {
            g.at(i, 0) = 1.0;
            s = 1.0;
        }
        double inv = 1.0 / std::sqrt(s);
        for (int j = 0; j < dim; ++j) g.at(i, j) *= inv;
    }
    return g;
}

double covering_radius_2d(std::size_t count) { return kPi / (double)count; }

double covering_radius_estimate(const Matrix& grid) {
    if (grid.cols == 1) return 0.0;
    if (grid.cols == 2) return covering_radius_2d(grid.rows);
    RngStream probes(0x9d2c5680u);
    std::vector<double> u(grid.cols), dots(grid.rows);
    double worst = 0.0;
    const std::size_t n_probes = 4096;
    for (std::size_t k = 0; k < n_probes; ++k) {
        probes.unit_sphere(u);
        kernels::dot_batch(grid.data.data(), grid.rows, grid.cols, u.data(), dots.data());
        double best = kernels::max_val(dots.data(), dots.size());
        best = std::min(1.0, std::max(-1.0, best));
        worst = std::max(worst, std::acos(best));
    }
    return 1.5 * worst;
}

}  // namespace depthlab
