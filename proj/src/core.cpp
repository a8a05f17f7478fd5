#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>
#include <utility>

#include "depthlab/core.hpp"

namespace depthlab {

namespace {
std::atomic<std::size_t> g_workers{0};
}

Vec mat_vec(const Matrix& A, std::span<const double> x) {
    Vec y(A.rows, 0.0);
    for (std::size_t i = 0; i < A.rows; ++i) y[i] = dot(A.row_span(i), x);
    return y;
}

Vec mat_tvec(const Matrix& A, std::span<const double> x) {
    Vec y(A.cols, 0.0);
    for (std::size_t i = 0; i < A.rows; ++i) {
        const double* row = A.row(i);
        for (std::size_t j = 0; j < A.cols; ++j) y[j] += row[j] * x[i];
    }
    return y;
}

Matrix invert_matrix(const Matrix& A, double* det) {
    if (A.rows != A.cols) throw DegenerateInput("invert_matrix: not square");
    const std::size_t n = A.rows;
    Matrix work = A;
    Matrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i) inv.at(i, i) = 1.0;
    double d = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(work.at(r, col)) > std::fabs(work.at(piv, col))) piv = r;
        if (std::fabs(work.at(piv, col)) < 1e-14)
            throw DegenerateInput("invert_matrix: singular matrix");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(work.at(piv, j), work.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
            d = -d;
        }
        double p = work.at(col, col);
        d *= p;
        double ip = 1.0 / p;
        for (std::size_t j = 0; j < n; ++j) {
            work.at(col, j) *= ip;
            inv.at(col, j) *= ip;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = work.at(r, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                work.at(r, j) -= f * work.at(col, j);
                inv.at(r, j) -= f * inv.at(col, j);
            }
        }
    }
    if (det) *det = d;
    return inv;
}

void set_default_workers(std::size_t workers) { g_workers.store(workers); }

std::size_t default_workers() {
    std::size_t w = g_workers.load();
    if (w == 0) w = std::max(1u, std::thread::hardware_concurrency());
    return w;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  std::size_t workers) {
    if (workers == 0) workers = default_workers();
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace depthlab
