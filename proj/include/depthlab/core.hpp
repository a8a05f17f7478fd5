#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace depthlab {

using Vec = std::vector<double>;

/// Dense row-major matrix. Rows are points, columns are coordinates.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double* row(std::size_t i) { return data.data() + i * cols; }
    const double* row(std::size_t i) const { return data.data() + i * cols; }
    std::span<const double> row_span(std::size_t i) const { return {row(i), cols}; }
    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    Vec row_vec(std::size_t i) const { return Vec(row(i), row(i) + cols); }
    bool empty() const { return rows == 0 || cols == 0; }
};

// Error taxonomy. Callers distinguish configuration problems from numerical
// solver failures; a solver failure is never silently turned into a verdict.
struct UnsupportedOperation : std::runtime_error { using std::runtime_error::runtime_error; };
struct DegenerateInput : std::runtime_error { using std::runtime_error::runtime_error; };
struct EmptyLevelSet : std::runtime_error { using std::runtime_error::runtime_error; };
struct SolverFailure : std::runtime_error { using std::runtime_error::runtime_error; };
struct ConfigError : std::runtime_error { using std::runtime_error::runtime_error; };

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::fabs(v));
    return m;
}

inline Vec normalized(std::span<const double> a) {
    double n = norm(a);
    if (n == 0.0) throw DegenerateInput("cannot normalize zero vector");
    Vec out(a.begin(), a.end());
    for (double& v : out) v /= n;
    return out;
}

inline Vec add(std::span<const double> a, std::span<const double> b) {
    Vec out(a.begin(), a.end());
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return out;
}

inline Vec sub(std::span<const double> a, std::span<const double> b) {
    Vec out(a.begin(), a.end());
    for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
    return out;
}

inline Vec scaled(std::span<const double> a, double s) {
    Vec out(a.begin(), a.end());
    for (double& v : out) v *= s;
    return out;
}

inline bool all_finite(std::span<const double> a) {
    for (double v : a)
        if (!std::isfinite(v)) return false;
    return true;
}

/// y = A x for a square row-major matrix.
Vec mat_vec(const Matrix& A, std::span<const double> x);

/// y = A^T x.
Vec mat_tvec(const Matrix& A, std::span<const double> x);

/// Gauss-Jordan inverse with partial pivoting; det receives the determinant.
/// Throws DegenerateInput on (numerically) singular input.
Matrix invert_matrix(const Matrix& A, double* det = nullptr);

/// Runs fn(0..count-1) on a small fork-join pool. Results must be written to
/// pre-sized slots indexed by the job id so the outcome is independent of the
/// worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  std::size_t workers = 0);

/// Process-wide default worker count used by parallel_for when workers == 0.
void set_default_workers(std::size_t workers);
std::size_t default_workers();

}  // namespace depthlab
