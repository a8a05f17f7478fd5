#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "depthlab/core.hpp"
#include "depthlab/numerics.hpp"

namespace depthlab::num {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.41421356237309504880;
}  // namespace

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x / kSqrt2); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        throw DegenerateInput("normal_quantile: p outside [0,1]");
    }
    // Acklam's rational approximation, then two Newton steps.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1.0 - plow;
    double x;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p > phigh) {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else {
        double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    for (int it = 0; it < 2; ++it) {
        double e = normal_cdf(x) - p;
        double dens = normal_pdf(x);
        if (dens <= 0.0) break;
        x -= e / dens;
    }
    return x;
}

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

namespace {

// Lentz continued fraction for the incomplete beta.
double beta_cf(double a, double b, double x) {
    const double eps = 3e-16, fpmin = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::fabs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double lnfront = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
    double front = std::exp(lnfront);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
    return 1.0 - std::exp(b * std::log1p(-x) + a * std::log(x) - log_beta(b, a)) *
                     beta_cf(b, a, 1.0 - x) / b;
}

double unit_ball_volume(int n) {
    return std::exp(0.5 * n * std::log(kPi) - std::lgamma(0.5 * n + 1.0));
}

namespace {

// Gauss-Kronrod 15-point nodes/weights on [-1, 1]; the embedded 7-point Gauss
// rule uses the odd Kronrod nodes.
const double kXgk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                        0.741531185599394, 0.586087235467691, 0.405845151377397,
                        0.207784955007898, 0.000000000000000};
const double kWgk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                        0.140653259715525, 0.169004726639267, 0.190350578064785,
                        0.204432940075298, 0.209482141084728};
const double kWg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                       0.417959183673469};

struct Segment {
    double a, b, value, error;
};

Segment eval_gk(const std::function<double(double)>& f, double a, double b) {
    double hlgth = 0.5 * (b - a);
    double centr = 0.5 * (a + b);
    double fc = f(centr);
    double resk = kWgk[7] * fc;
    double resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        double absc = hlgth * kXgk[j];
        double f1 = f(centr - absc);
        double f2 = f(centr + absc);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    Segment s;
    s.a = a;
    s.b = b;
    s.value = resk * hlgth;
    s.error = std::fabs((resk - resg) * hlgth);
    return s;
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                     double rel_tol, int max_splits) {
    QuadResult out;
    if (a == b) return out;
    std::vector<Segment> segs;
    segs.push_back(eval_gk(f, a, b));
    for (int it = 0; it < max_splits; ++it) {
        double total = 0.0, err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            total += segs[i].value;
            err += segs[i].error;
            if (segs[i].error > segs[worst].error) worst = i;
        }
        if (err <= std::max(abs_tol, rel_tol * std::fabs(total)) || segs[worst].error == 0.0) {
            out.value = total;
            out.abs_error = err;
            return out;
        }
        Segment s = segs[worst];
        double mid = 0.5 * (s.a + s.b);
        if (mid <= s.a || mid >= s.b) {
            out.value = total;
            out.abs_error = err;
            return out;
        }
        segs[worst] = eval_gk(f, s.a, mid);
        segs.push_back(eval_gk(f, mid, s.b));
    }
    double total = 0.0, err = 0.0;
    for (const auto& s : segs) {
        total += s.value;
        err += s.error;
    }
    out.value = total;
    out.abs_error = err;
    return out;
}

QuadResult integrate_half_line(const std::function<double(double)>& f, double abs_tol,
                               double rel_tol) {
    auto g = [&f](double s) {
        double om = 1.0 - s;
        double r = s / om;
        return f(r) / (om * om);
    };
    return integrate(g, 0.0, 1.0, abs_tol, rel_tol);
}

WilsonInterval wilson(double successes, double trials, double z) {
    WilsonInterval w;
    if (trials <= 0.0) return w;
    double p = successes / trials;
    double z2 = z * z;
    double denom = 1.0 + z2 / trials;
    double center = (p + z2 / (2.0 * trials)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials)) / denom;
    w.lo = std::max(0.0, center - half);
    w.hi = std::min(1.0, center + half);
    return w;
}

namespace {

// F(y) = P(sum w_i V_i <= y) for V_i iid uniform(0,1): inclusion-exclusion,
// DFS over weight subsets with pruning once the running offset passes y.
long double uniform01_sum_cdf(const std::vector<double>& w, long double y) {
    const int m = (int)w.size();
    long double log_norm = 0.0L;
    for (double wi : w) log_norm += std::log((long double)wi);
    for (int k = 1; k <= m; ++k) log_norm += std::log((long double)k);
    long double total = 0.0L;
    // iterative DFS: stack of (index, offset, sign)
    struct Node {
        int idx;
        long double offset;
        int sign;
    };
    std::vector<Node> stack;
    stack.push_back({0, 0.0L, +1});
    while (!stack.empty()) {
        Node nd = stack.back();
        stack.pop_back();
        long double rem = y - nd.offset;
        if (rem <= 0.0L) continue;  // (y - offset)_+ = 0 for this and all supersets
        if (nd.idx == m) {
            total += nd.sign * std::exp((long double)m * std::log(rem) - log_norm);
            continue;
        }
        stack.push_back({nd.idx + 1, nd.offset, nd.sign});
        stack.push_back({nd.idx + 1, nd.offset + w[nd.idx], -nd.sign});
    }
    return total;
}

}  // namespace

std::optional<double> uniform_sum_tail(std::span<const double> weights, double t) {
    std::vector<double> w;
    double W = 0.0;
    for (double wi : weights) W += std::fabs(wi);
    if (W == 0.0) return t <= 0.0 ? 1.0 : 0.0;
    for (double wi : weights) {
        double a = std::fabs(wi);
        if (a > 1e-12 * W) w.push_back(a);
    }
    if (w.empty()) return t <= 0.0 ? 1.0 : 0.0;
    if (w.size() > 22) return std::nullopt;
    double Weff = 0.0;
    for (double wi : w) Weff += wi;
    if (t <= -Weff) return 1.0;
    if (t >= Weff) return 0.0;
    // Shift to T = sum w_i V_i on [0, Weff]: P(S >= t) = P(T >= s).
    long double s = 0.5L * ((long double)t + Weff);
    // Use the smaller side for conditioning: P(T >= s) = P(T <= Weff - s).
    long double val;
    if (s <= 0.5L * Weff) {
        val = 1.0L - uniform01_sum_cdf(w, s);
    } else {
        val = uniform01_sum_cdf(w, (long double)Weff - s);
    }
    double out = (double)val;
    return std::clamp(out, 0.0, 1.0);
}

double uniform_sum_density_bound(std::span<const double> weights) {
    double wmax = 0.0;
    for (double wi : weights) wmax = std::max(wmax, std::fabs(wi));
    if (wmax == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / (2.0 * wmax);
}

double sphere_cap_fraction(int n, double c) {
    if (c <= -1.0) return 1.0;
    if (c >= 1.0) return 0.0;
    if (n == 1) return 0.5;  // theta = +/-1 with equal probability, c in (-1, 1)
    double half = 0.5 * incomplete_beta(0.5 * (n - 1), 0.5, 1.0 - c * c);
    return c >= 0.0 ? half : 1.0 - half;
}

double ball_coordinate_tail(int n, double c) {
    if (c <= -1.0) return 1.0;
    if (c >= 1.0) return 0.0;
    double half = 0.5 * incomplete_beta(0.5 * (n + 1), 0.5, 1.0 - c * c);
    return c >= 0.0 ? half : 1.0 - half;
}

double golden_section_max(const std::function<double(double)>& f, double a, double b, double tol) {
    const double phi = 0.6180339887498948482;
    double x1 = b - phi * (b - a);
    double x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace depthlab::num
