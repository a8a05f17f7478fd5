#include <algorithm>
#include <cmath>

#include "depthlab/kernels.hpp"

namespace depthlab::kernels::scalar {

void dot_batch(const double* pts, std::size_t n_points, std::size_t dim, const double* dir,
               double* out) {
    for (std::size_t i = 0; i < n_points; ++i) {
        const double* row = pts + i * dim;
        double s = 0.0;
        for (std::size_t j = 0; j < dim; ++j) s += row[j] * dir[j];
        out[i] = s;
    }
}

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

std::size_t count_ge(const double* v, std::size_t n, double t) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (v[i] >= t) ++c;
    return c;
}

double max_val(const double* v, std::size_t n) {
    double m = v[0];
    for (std::size_t i = 1; i < n; ++i) m = std::max(m, v[i]);
    return m;
}

double max_abs_val(const double* v, std::size_t n) {
    double m = std::fabs(v[0]);
    for (std::size_t i = 1; i < n; ++i) m = std::max(m, std::fabs(v[i]));
    return m;
}

double sum_pos_pow(const double* v, std::size_t n, double p) {
    double s = 0.0;
    if (p == 1.0) {
        for (std::size_t i = 0; i < n; ++i) s += std::max(v[i], 0.0);
    } else if (p == 2.0) {
        for (std::size_t i = 0; i < n; ++i) {
            double x = std::max(v[i], 0.0);
            s += x * x;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i)
            if (v[i] > 0.0) s += std::pow(v[i], p);
    }
    return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace depthlab::kernels::scalar
