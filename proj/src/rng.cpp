#include <cmath>

#include "depthlab/core.hpp"
#include "depthlab/rng.hpp"

namespace depthlab {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double RngStream::normal() {
    if (have_cached_) {
        have_cached_ = false;
        return cached_;
    }
    // Box-Muller on (0,1] x [0,1).
    double u1 = 1.0 - uniform01();
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
}

double RngStream::exponential() { return -std::log(1.0 - uniform01()); }

double RngStream::gamma(double shape) {
    if (shape < 1.0) throw DegenerateInput("gamma sampler requires shape >= 1");
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        double u = uniform01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double RngStream::cauchy() {
    return std::tan(3.14159265358979323846 * (uniform01() - 0.5));
}

double RngStream::stable_symmetric(double q) {
    if (q < 1.0 || q >= 2.0) throw DegenerateInput("stable index q must lie in [1, 2)");
    if (q == 1.0) return cauchy();
    const double half_pi = 1.57079632679489661923;
    double theta = (uniform01() - 0.5) * 2.0 * half_pi;  // uniform on (-pi/2, pi/2)
    double w = exponential();
    // CMS for the symmetric case (skew 0).
    double a = std::sin(q * theta) / std::pow(std::cos(theta), 1.0 / q);
    double b = std::pow(std::cos((1.0 - q) * theta) / w, (1.0 - q) / q);
    return a * b;
}

void RngStream::unit_sphere(std::span<double> out) {
    for (;;) {
        double s = 0.0;
        for (double& v : out) {
            v = normal();
            s += v * v;
        }
        if (s > 1e-300) {
            double inv = 1.0 / std::sqrt(s);
            for (double& v : out) v *= inv;
            return;
        }
    }
}

}  // namespace depthlab
