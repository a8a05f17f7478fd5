#include <atomic>
#include <cstdlib>
#include <cstring>
#include <mutex>

#include "depthlab/kernels.hpp"

namespace depthlab::kernels {

namespace {

std::atomic<Isa> g_isa{Isa::scalar};
std::once_flag g_init;

void init_from_env() {
    Isa pick = avx2::available() ? Isa::avx2 : Isa::scalar;
    if (const char* env = std::getenv("DEPTHLAB_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) pick = Isa::scalar;
        else if (std::strcmp(env, "avx2") == 0 && avx2::available()) pick = Isa::avx2;
    }
    g_isa.store(pick, std::memory_order_relaxed);
}

inline Isa isa() {
    std::call_once(g_init, init_from_env);
    return g_isa.load(std::memory_order_relaxed);
}

}  // namespace

Isa active_isa() { return isa(); }

void force_isa(Isa want) {
    std::call_once(g_init, init_from_env);
    if (want == Isa::avx2 && !avx2::available()) want = Isa::scalar;
    g_isa.store(want, std::memory_order_relaxed);
}

void dot_batch(const double* pts, std::size_t n_points, std::size_t dim, const double* dir,
               double* out) {
    if (isa() == Isa::avx2) avx2::dot_batch(pts, n_points, dim, dir, out);
    else scalar::dot_batch(pts, n_points, dim, dir, out);
}

double dot(const double* a, const double* b, std::size_t n) {
    return isa() == Isa::avx2 ? avx2::dot(a, b, n) : scalar::dot(a, b, n);
}

std::size_t count_ge(const double* v, std::size_t n, double t) {
    return isa() == Isa::avx2 ? avx2::count_ge(v, n, t) : scalar::count_ge(v, n, t);
}

double max_val(const double* v, std::size_t n) {
    return isa() == Isa::avx2 ? avx2::max_val(v, n) : scalar::max_val(v, n);
}

double max_abs_val(const double* v, std::size_t n) {
    return isa() == Isa::avx2 ? avx2::max_abs_val(v, n) : scalar::max_abs_val(v, n);
}

double sum_pos_pow(const double* v, std::size_t n, double p) {
    return isa() == Isa::avx2 ? avx2::sum_pos_pow(v, n, p) : scalar::sum_pos_pow(v, n, p);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    if (isa() == Isa::avx2) avx2::axpy(a, x, y, n);
    else scalar::axpy(a, x, y, n);
}

}  // namespace depthlab::kernels
