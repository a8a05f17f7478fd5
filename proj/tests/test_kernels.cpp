#include <cmath>
#include <vector>

#include <doctest.h>

#include "depthlab/kernels.hpp"
#include "depthlab/rng.hpp"

using namespace depthlab;

namespace {

std::vector<double> random_values(std::size_t n, std::uint64_t seed, double scale = 3.0) {
    RngStream rng = RngStream::derive(seed, 11);
    std::vector<double> v(n);
    for (auto& x : v) x = scale * rng.normal();
    return v;
}

}  // namespace

TEST_CASE("avx2 kernels agree with the scalar reference") {
    if (!kernels::avx2::available()) {
        MESSAGE("AVX2 not available; dispatch stays scalar");
        return;
    }
    for (std::size_t n : {0ul, 1ul, 3ul, 4ul, 7ul, 8ul, 17ul, 64ul, 1001ul}) {
        auto v = random_values(n, 101 + n);
        if (n > 0) {
            CHECK(kernels::avx2::max_val(v.data(), n) == kernels::scalar::max_val(v.data(), n));
            CHECK(kernels::avx2::max_abs_val(v.data(), n) ==
                  kernels::scalar::max_abs_val(v.data(), n));
        }
        for (double t : {-1.0, 0.0, 0.5}) {
            CHECK(kernels::avx2::count_ge(v.data(), n, t) ==
                  kernels::scalar::count_ge(v.data(), n, t));
        }
        for (double p : {1.0, 2.0, 3.5}) {
            double a = kernels::avx2::sum_pos_pow(v.data(), n, p);
            double b = kernels::scalar::sum_pos_pow(v.data(), n, p);
            CHECK(a == doctest::Approx(b).epsilon(1e-12));
        }
        auto w = random_values(n, 202 + n);
        CHECK(kernels::avx2::dot(v.data(), w.data(), n) ==
              doctest::Approx(kernels::scalar::dot(v.data(), w.data(), n)).epsilon(1e-12));
        auto y1 = w, y2 = w;
        kernels::avx2::axpy(0.37, v.data(), y1.data(), n);
        kernels::scalar::axpy(0.37, v.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-13));
    }
}

TEST_CASE("dot_batch matches per-row dot for every small dimension") {
    for (std::size_t dim = 1; dim <= 9; ++dim) {
        for (std::size_t rows : {1ul, 3ul, 4ul, 5ul, 13ul}) {
            auto pts = random_values(rows * dim, 7 * dim + rows);
            auto dir = random_values(dim, 1000 + dim);
            std::vector<double> out_s(rows), out_v(rows);
            kernels::scalar::dot_batch(pts.data(), rows, dim, dir.data(), out_s.data());
            for (std::size_t i = 0; i < rows; ++i) {
                double ref = 0.0;
                for (std::size_t j = 0; j < dim; ++j) ref += pts[i * dim + j] * dir[j];
                CHECK(out_s[i] == doctest::Approx(ref).epsilon(1e-14));
            }
            if (kernels::avx2::available()) {
                kernels::avx2::dot_batch(pts.data(), rows, dim, dir.data(), out_v.data());
                for (std::size_t i = 0; i < rows; ++i)
                    CHECK(out_v[i] == doctest::Approx(out_s[i]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("dispatcher honors force_isa") {
    auto v = random_values(100, 5);
    kernels::force_isa(kernels::Isa::scalar);
    CHECK(kernels::active_isa() == kernels::Isa::scalar);
    std::size_t c1 = kernels::count_ge(v.data(), v.size(), 0.0);
    if (kernels::avx2::available()) {
        kernels::force_isa(kernels::Isa::avx2);
        CHECK(kernels::active_isa() == kernels::Isa::avx2);
        CHECK(kernels::count_ge(v.data(), v.size(), 0.0) == c1);
        kernels::force_isa(kernels::Isa::avx2);
    }
}
