#include <cmath>

#include <doctest.h>

#include "depthlab/core.hpp"
#include "depthlab/numerics.hpp"
#include "depthlab/rng.hpp"

using namespace depthlab;

TEST_CASE("normal cdf/quantile round trip") {
    CHECK(num::normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(num::normal_sf(1.0) == doctest::Approx(0.15865525393145707).epsilon(1e-12));
    for (double p : {1e-6, 0.01, 0.3, 0.5, 0.77, 0.999, 1.0 - 1e-9}) {
        double x = num::normal_quantile(p);
        CHECK(num::normal_cdf(x) == doctest::Approx(p).epsilon(1e-12));
    }
}

TEST_CASE("incomplete beta against simple closed forms") {
    // I_x(1, b) = 1 - (1-x)^b
    for (double x : {0.1, 0.5, 0.9}) {
        CHECK(num::incomplete_beta(1.0, 3.0, x) ==
              doctest::Approx(1.0 - std::pow(1.0 - x, 3.0)).epsilon(1e-12));
        // symmetric case I_x(a,a) at x=1/2 equals 1/2
    }
    CHECK(num::incomplete_beta(2.5, 2.5, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("adaptive quadrature") {
    auto q1 = num::integrate([](double x) { return std::sin(x); }, 0.0, 3.141592653589793);
    CHECK(q1.value == doctest::Approx(2.0).epsilon(1e-12));
    // half-line: int_0^inf e^{-x} = 1
    auto q2 = num::integrate_half_line([](double x) { return std::exp(-x); });
    CHECK(q2.value == doctest::Approx(1.0).epsilon(1e-10));
    // peaked integrand; truth via the error function
    auto q3 = num::integrate([](double x) { return std::exp(-50.0 * (x - 0.3) * (x - 0.3)); },
                             0.0, 1.0);
    double s = std::sqrt(50.0);
    double truth = std::sqrt(3.141592653589793) / (2.0 * s) *
                   (std::erf(0.7 * s) + std::erf(0.3 * s));
    CHECK(q3.value == doctest::Approx(truth).epsilon(1e-9));
}

TEST_CASE("uniform sum tail: exact small cases") {
    // single weight: P(w U >= t) = (1 - t/w)/2 on [-w, w]
    Vec w1{2.0};
    CHECK(*num::uniform_sum_tail(w1, 0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(*num::uniform_sum_tail(w1, 1.0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(*num::uniform_sum_tail(w1, -3.0) == 1.0);
    CHECK(*num::uniform_sum_tail(w1, 2.5) == 0.0);

    // two equal weights: triangular distribution on [-2, 2]
    Vec w2{1.0, 1.0};
    CHECK(*num::uniform_sum_tail(w2, 0.0) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(*num::uniform_sum_tail(w2, 1.0) == doctest::Approx(0.125).epsilon(1e-13));
    CHECK(*num::uniform_sum_tail(w2, -1.0) == doctest::Approx(0.875).epsilon(1e-13));
}

TEST_CASE("uniform sum tail matches Monte Carlo on random weights") {
    RngStream rng = RngStream::derive(42, 0);
    for (int rep = 0; rep < 4; ++rep) {
        int m = 2 + rep;
        Vec w(m);
        for (double& x : w) x = 0.1 + rng.uniform01();
        double t = rng.uniform(-1.0, 1.0);
        double exact = *num::uniform_sum_tail(w, t);
        const std::size_t M = 400000;
        std::size_t hits = 0;
        for (std::size_t s = 0; s < M; ++s) {
            double sum = 0.0;
            for (double wi : w) sum += wi * rng.uniform(-1.0, 1.0);
            if (sum >= t) ++hits;
        }
        double mc = (double)hits / (double)M;
        CHECK(exact == doctest::Approx(mc).epsilon(0.01));
    }
}

TEST_CASE("sphere cap and ball coordinate tails") {
    // n = 3 sphere: coordinate is uniform on [-1,1]
    CHECK(num::sphere_cap_fraction(3, 0.25) == doctest::Approx(0.375).epsilon(1e-12));
    // n = 2 sphere: P(theta_1 >= c) = arccos(c)/pi
    CHECK(num::sphere_cap_fraction(2, 0.3) ==
          doctest::Approx(std::acos(0.3) / 3.141592653589793).epsilon(1e-12));
    // 1-ball (segment): uniform coordinate
    CHECK(num::ball_coordinate_tail(1, 0.5) == doctest::Approx(0.25).epsilon(1e-12));
    // disk: P(X1 >= c) = (acos c - c sqrt(1-c^2))/pi
    double c = 0.4;
    CHECK(num::ball_coordinate_tail(2, c) ==
          doctest::Approx((std::acos(c) - c * std::sqrt(1 - c * c)) / 3.141592653589793)
              .epsilon(1e-12));
}

TEST_CASE("wilson interval sanity") {
    auto w = num::wilson(50, 100);
    CHECK(w.lo < 0.5);
    CHECK(w.hi > 0.5);
    CHECK(w.lo > 0.35);
    CHECK(w.hi < 0.65);
    auto zero = num::wilson(0, 1000);
    CHECK(zero.lo == 0.0);
    CHECK(zero.hi < 0.01);
}

TEST_CASE("golden section maximizer") {
    double x = num::golden_section_max([](double t) { return -(t - 0.37) * (t - 0.37); }, 0.0,
                                       1.0, 1e-12);
    CHECK(x == doctest::Approx(0.37).epsilon(1e-8));
}
