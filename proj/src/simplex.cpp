#include <algorithm>
#include <cmath>
#include <vector>

#include "depthlab/kernels.hpp"
#include "depthlab/simplex.hpp"

namespace depthlab {

Phase1Result phase1_simplex(const Matrix& A, std::span<const double> b, double tol,
                            std::size_t max_pivots) {
    const std::size_t m = A.rows;
    const std::size_t k = A.cols;
    if (b.size() != m) throw ConfigError("phase1_simplex: rhs size mismatch");
    if (max_pivots == 0) max_pivots = 200 * (k + m) + 2000;

    // Equilibrate: scale rows to unit max magnitude, then columns likewise.
    Vec row_scale(m, 1.0), col_scale(k, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
        double mx = std::fabs(b[i]);
        const double* row = A.row(i);
        for (std::size_t j = 0; j < k; ++j) mx = std::max(mx, std::fabs(row[j]));
        row_scale[i] = mx > 0.0 ? 1.0 / mx : 1.0;
    }
    for (std::size_t j = 0; j < k; ++j) {
        double mx = 0.0;
        for (std::size_t i = 0; i < m; ++i) mx = std::max(mx, std::fabs(A.at(i, j) * row_scale[i]));
        col_scale[j] = mx > 0.0 ? 1.0 / mx : 1.0;
    }

    // Tableau: m rows x (k originals + m artificials + rhs).
    const std::size_t width = k + m + 1;
    std::vector<double> tab(m * width, 0.0);
    Vec flip(m, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
        double bi = b[i] * row_scale[i];
        double f = bi < 0.0 ? -1.0 : 1.0;
        flip[i] = f;
        double* row = tab.data() + i * width;
        for (std::size_t j = 0; j < k; ++j) row[j] = f * A.at(i, j) * row_scale[i] * col_scale[j];
        row[k + i] = 1.0;
        row[width - 1] = f * bi;
    }

    // Reduced-cost row for min sum(artificials): cbar_j = c_j - sum_i tab[i][j].
    std::vector<double> obj(width, 0.0);
    for (std::size_t j = 0; j < k; ++j) obj[j] = 0.0;
    for (std::size_t j = 0; j < m; ++j) obj[k + j] = 1.0;
    for (std::size_t i = 0; i < m; ++i)
        kernels::axpy(-1.0, tab.data() + i * width, obj.data(), width);
    // obj[width-1] now holds -(sum of scaled b) = -(objective value).

    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = k + i;

    const double pivot_tol = 1e-11;
    Phase1Result res;

    for (res.pivots = 0; res.pivots < max_pivots; ++res.pivots) {
        // Bland: entering column = smallest index with negative reduced cost.
        std::size_t enter = width - 1;
        for (std::size_t j = 0; j < k + m; ++j) {
            if (obj[j] < -1e-10) {
                enter = j;
                break;
            }
        }
        if (enter == width - 1) break;  // optimal

        // Ratio test; ties resolved by the smallest basis index (Bland).
        std::size_t leave = m;
        double best_ratio = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double a = tab[i * width + enter];
            if (a <= pivot_tol) continue;
            double ratio = tab[i * width + width - 1] / a;
            if (leave == m || ratio < best_ratio ||
                (ratio == best_ratio && basis[i] < basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave == m) {
            // Unbounded phase-1 cannot happen (objective bounded below by 0);
            // hitting this means numerical trouble.
            res.status = Phase1Result::Status::failure;
            return res;
        }

        double* prow = tab.data() + leave * width;
        double piv = prow[enter];
        double inv = 1.0 / piv;
        for (std::size_t j = 0; j < width; ++j) prow[j] *= inv;
        prow[enter] = 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave) continue;
            double f = tab[i * width + enter];
            if (f != 0.0) {
                kernels::axpy(-f, prow, tab.data() + i * width, width);
                tab[i * width + enter] = 0.0;
            }
        }
        double f = obj[enter];
        if (f != 0.0) {
            kernels::axpy(-f, prow, obj.data(), width);
            obj[enter] = 0.0;
        }
        basis[leave] = enter;
    }

    double objective = -obj[width - 1];
    res.objective = objective;
    if (res.pivots >= max_pivots) {
        res.status = Phase1Result::Status::failure;
        return res;
    }

    if (objective <= tol) {
        res.status = Phase1Result::Status::feasible;
        res.lambda.assign(k, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            if (basis[i] < k) {
                double v = tab[i * width + width - 1];
                res.lambda[basis[i]] = std::max(0.0, v * col_scale[basis[i]]);
            }
        }
        return res;
    }

    // Infeasible: y_i = 1 - cbar(artificial_i), mapped back through the row
    // flips and scales.
    res.status = Phase1Result::Status::infeasible;
    res.dual.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        res.dual[i] = (1.0 - obj[k + i]) * flip[i] * row_scale[i];
    return res;
}

}  // namespace depthlab
