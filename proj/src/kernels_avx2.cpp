// AVX2 + FMA variants of the inner-loop kernels. This translation unit is
// compiled with -mavx2 -mfma on x86-64 and selected at runtime; on other
// architectures every entry point reports unavailable and the dispatcher
// keeps the scalar path.

#include <algorithm>
#include <cmath>

#include "depthlab/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#define DEPTHLAB_HAVE_AVX2 1
#else
#define DEPTHLAB_HAVE_AVX2 0
#endif

namespace depthlab::kernels::avx2 {

#if DEPTHLAB_HAVE_AVX2

bool available() {
#if defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swap = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swap));
}

inline double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_max_pd(lo, hi);
    __m128d swap = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_max_sd(lo, swap));
}

// 4 rows of 2 doubles -> 4 dot products against (d0, d1).
inline void dot_rows2_x4(const double* p, double d0, double d1, double* out) {
    __m256d r01 = _mm256_loadu_pd(p);      // x0 y0 x1 y1
    __m256d r23 = _mm256_loadu_pd(p + 4);  // x2 y2 x3 y3
    __m256d xs = _mm256_unpacklo_pd(r01, r23);  // x0 x2 x1 x3
    __m256d ys = _mm256_unpackhi_pd(r01, r23);  // y0 y2 y1 y3
    __m256d s = _mm256_fmadd_pd(ys, _mm256_set1_pd(d1), _mm256_mul_pd(xs, _mm256_set1_pd(d0)));
    // s holds (q0, q2, q1, q3); restore row order.
    __m256d fixed = _mm256_permute4x64_pd(s, _MM_SHUFFLE(3, 1, 2, 0));
    _mm256_storeu_pd(out, fixed);
}

}  // namespace

void dot_batch(const double* pts, std::size_t n_points, std::size_t dim, const double* dir,
               double* out) {
    std::size_t i = 0;
    if (dim == 2) {
        for (; i + 4 <= n_points; i += 4) dot_rows2_x4(pts + i * 2, dir[0], dir[1], out + i);
    } else if (dim >= 3 && dim <= 8) {
        // Gather one column at a time across 4 rows.
        const __m256i row_idx = _mm256_set_epi64x(3 * (long long)dim, 2 * (long long)dim,
                                                  1 * (long long)dim, 0);
        for (; i + 4 <= n_points; i += 4) {
            const double* base = pts + i * dim;
            __m256d acc = _mm256_setzero_pd();
            for (std::size_t j = 0; j < dim; ++j) {
                __m256d col = _mm256_i64gather_pd(base + j, row_idx, 8);
                acc = _mm256_fmadd_pd(col, _mm256_set1_pd(dir[j]), acc);
            }
            _mm256_storeu_pd(out + i, acc);
        }
    }
    for (; i < n_points; ++i) {
        const double* row = pts + i * dim;
        double s = 0.0;
        for (std::size_t j = 0; j < dim; ++j) s += row[j] * dir[j];
        out[i] = s;
    }
}

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

std::size_t count_ge(const double* v, std::size_t n, double t) {
    const __m256d tv = _mm256_set1_pd(t);
    std::size_t c = 0, i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d cmp = _mm256_cmp_pd(_mm256_loadu_pd(v + i), tv, _CMP_GE_OQ);
        c += (std::size_t)__builtin_popcount((unsigned)_mm256_movemask_pd(cmp));
    }
    for (; i < n; ++i)
        if (v[i] >= t) ++c;
    return c;
}

double max_val(const double* v, std::size_t n) {
    std::size_t i = 0;
    double m;
    if (n >= 4) {
        __m256d acc = _mm256_loadu_pd(v);
        for (i = 4; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(v + i));
        m = hmax(acc);
    } else {
        m = v[0];
        i = 1;
    }
    for (; i < n; ++i) m = std::max(m, v[i]);
    return m;
}

double max_abs_val(const double* v, std::size_t n) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    std::size_t i = 0;
    double m;
    if (n >= 4) {
        __m256d acc = _mm256_and_pd(_mm256_loadu_pd(v), mask);
        for (i = 4; i + 4 <= n; i += 4)
            acc = _mm256_max_pd(acc, _mm256_and_pd(_mm256_loadu_pd(v + i), mask));
        m = hmax(acc);
    } else {
        m = std::fabs(v[0]);
        i = 1;
    }
    for (; i < n; ++i) m = std::max(m, std::fabs(v[i]));
    return m;
}

double sum_pos_pow(const double* v, std::size_t n, double p) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    double s;
    if (p == 1.0) {
        __m256d acc = zero;
        for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_max_pd(_mm256_loadu_pd(v + i), zero));
        s = hsum(acc);
        for (; i < n; ++i) s += std::max(v[i], 0.0);
    } else if (p == 2.0) {
        __m256d acc = zero;
        for (; i + 4 <= n; i += 4) {
            __m256d x = _mm256_max_pd(_mm256_loadu_pd(v + i), zero);
            acc = _mm256_fmadd_pd(x, x, acc);
        }
        s = hsum(acc);
        for (; i < n; ++i) {
            double x = std::max(v[i], 0.0);
            s += x * x;
        }
    } else {
        s = 0.0;
        for (; i < n; ++i)
            if (v[i] > 0.0) s += std::pow(v[i], p);
    }
    return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d y0 = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        __m256d y1 = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4));
        _mm256_storeu_pd(y + i, y0);
        _mm256_storeu_pd(y + i + 4, y1);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

#else  // !DEPTHLAB_HAVE_AVX2

bool available() { return false; }

void dot_batch(const double* pts, std::size_t n_points, std::size_t dim, const double* dir,
               double* out) {
    scalar::dot_batch(pts, n_points, dim, dir, out);
}
double dot(const double* a, const double* b, std::size_t n) { return scalar::dot(a, b, n); }
std::size_t count_ge(const double* v, std::size_t n, double t) { return scalar::count_ge(v, n, t); }
double max_val(const double* v, std::size_t n) { return scalar::max_val(v, n); }
double max_abs_val(const double* v, std::size_t n) { return scalar::max_abs_val(v, n); }
double sum_pos_pow(const double* v, std::size_t n, double p) { return scalar::sum_pos_pow(v, n, p); }
void axpy(double a, const double* x, double* y, std::size_t n) { scalar::axpy(a, x, y, n); }

#endif

}  // namespace depthlab::kernels::avx2
