#pragma once

#include <cstddef>

namespace depthlab::kernels {

enum class Isa { scalar, avx2 };

/// Instruction set currently selected by the dispatcher.
Isa active_isa();

/// Overrides the dispatcher; used by the equivalence tests. The environment
/// variable DEPTHLAB_SIMD={scalar,avx2} is honored at first use.
void force_isa(Isa isa);

/// out[i] = <pts[i*dim .. +dim), dir>, for n_points rows.
void dot_batch(const double* pts, std::size_t n_points, std::size_t dim, const double* dir,
               double* out);

double dot(const double* a, const double* b, std::size_t n);

/// #{ i : v[i] >= t }
std::size_t count_ge(const double* v, std::size_t n, double t);

/// max(v), n >= 1
double max_val(const double* v, std::size_t n);

/// max(|v|), n >= 1
double max_abs_val(const double* v, std::size_t n);

/// sum_i max(v[i], 0)^p; p == 1 and p == 2 take the vector path.
double sum_pos_pow(const double* v, std::size_t n, double p);

/// y[i] += a * x[i]; the simplex pivot row operation.
void axpy(double a, const double* x, double* y, std::size_t n);

// Reference implementations (always available; the dispatch targets must agree
// with these: exactly for count/max, to rounding for the accumulations).
namespace scalar {
void dot_batch(const double* pts, std::size_t n_points, std::size_t dim, const double* dir,
               double* out);
double dot(const double* a, const double* b, std::size_t n);
std::size_t count_ge(const double* v, std::size_t n, double t);
double max_val(const double* v, std::size_t n);
double max_abs_val(const double* v, std::size_t n);
double sum_pos_pow(const double* v, std::size_t n, double p);
void axpy(double a, const double* x, double* y, std::size_t n);
}  // namespace scalar

namespace avx2 {
bool available();  // compiled in and supported by the running CPU
void dot_batch(const double* pts, std::size_t n_points, std::size_t dim, const double* dir,
               double* out);
double dot(const double* a, const double* b, std::size_t n);
std::size_t count_ge(const double* v, std::size_t n, double t);
double max_val(const double* v, std::size_t n);
double max_abs_val(const double* v, std::size_t n);
double sum_pos_pow(const double* v, std::size_t n, double p);
void axpy(double a, const double* x, double* y, std::size_t n);
}  // namespace avx2

}  // namespace depthlab::kernels
