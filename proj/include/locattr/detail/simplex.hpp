#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "locattr/errors.hpp"

namespace locattr::detail {

struct SimplexResult {
    std::vector<double> x;     // primal, one per column
    std::vector<double> duals; // one per row
    double objective = 0.0;
};

/// Dense tableau simplex for  max c'x  s.t.  A x <= b, x >= 0  with b >= 0, so
/// the slack basis is feasible from the start. Bland's rule; meant for the
/// handful-of-rows master problems of column generation, not general LPs.
inline SimplexResult simplex_max(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                                 const std::vector<double>& c) {
    const std::size_t m = b.size(), n = c.size();
    const std::size_t width = n + m + 1;
    std::vector<double> T((m + 1) * width, 0.0);
    auto at = [&](std::size_t r, std::size_t col) -> double& { return T[r * width + col]; };
    for (std::size_t i = 0; i < m; ++i) {
        if (b[i] < 0.0) throw precondition_error("simplex_max: right-hand side must be nonnegative");
        for (std::size_t j = 0; j < n; ++j) at(i, j) = A[i][j];
        at(i, n + i) = 1.0;
        at(i, width - 1) = b[i];
    }
    for (std::size_t j = 0; j < n; ++j) at(m, j) = -c[j];

    double scale = 1.0;
    for (double v : T) scale = std::max(scale, std::abs(v));
    const double tol = 1e-12 * scale;

    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

    const std::size_t max_pivots = 50 * (n + m) + 1000;
    for (std::size_t pivots = 0;; ++pivots) {
        if (pivots > max_pivots) throw numerical_error("simplex_max: pivot limit exceeded");
        std::size_t enter = width;
        for (std::size_t j = 0; j + 1 < width; ++j)
            if (at(m, j) < -tol) {
                enter = j;
                break;
            }
        if (enter == width) break;
        std::size_t leave = m;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            const double a = at(i, enter);
            if (a <= tol) continue;
            const double ratio = at(i, width - 1) / a;
            if (leave == m || ratio < best - tol) {
                leave = i;
                best = ratio;
            } else if (ratio <= best + tol && basis[i] < basis[leave]) {
                leave = i;
                best = std::min(best, ratio);
            }
        }
        if (leave == m) throw numerical_error("simplex_max: problem is unbounded");
        const double p = at(leave, enter);
        for (std::size_t j = 0; j < width; ++j) at(leave, j) /= p;
        for (std::size_t r = 0; r <= m; ++r) {
            if (r == leave) continue;
            const double f = at(r, enter);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < width; ++j) at(r, j) -= f * at(leave, j);
        }
        basis[leave] = enter;
    }

    SimplexResult out;
    out.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) out.x[basis[i]] = std::max(0.0, at(i, width - 1));
    out.duals.resize(m);
    for (std::size_t i = 0; i < m; ++i) out.duals[i] = std::max(0.0, at(m, n + i));
    out.objective = at(m, width - 1);
    return out;
}

} // namespace locattr::detail
