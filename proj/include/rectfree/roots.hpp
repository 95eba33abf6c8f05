#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "rectfree/errors.hpp"

namespace rectfree {

/// Root of a monotone function on a sign-changing bracket [lo, hi].
///
/// `fdf(x)` returns {f(x), f'(x)}. Newton steps are taken when they stay inside
/// the current bracket, bisection otherwise; the bracket is shrunk at every
/// step. Iteration stops once the step or the bracket width falls below
/// max(abs_tol, 4 eps |x|), so small roots are resolved to relative precision.
template <typename FDF>
double solve_bracketed(FDF&& fdf, double lo, double hi, double abs_tol = 1e-15, int max_iter = 2000)
{
    constexpr double eps = std::numeric_limits<double>::epsilon();
    auto [flo, dlo] = fdf(lo);
    if (flo == 0.0)
        return lo;
    auto [fhi, dhi] = fdf(hi);
    if (fhi == 0.0)
        return hi;
    (void)dlo;
    (void)dhi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw NumericalError("root not bracketed on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    // orient so that f(lo) < 0 < f(hi)
    const bool increasing = flo < 0.0;

    double x = 0.5 * (lo + hi);
    double dx_old = hi - lo;
    double dx = dx_old;
    auto [f, df] = fdf(x);
    for (int it = 0; it < max_iter; ++it) {
        if (f == 0.0)
            return x;
        if ((f < 0.0) == increasing)
            lo = x;
        else
            hi = x;

        const bool newton_ok = df != 0.0 && std::isfinite(df) && ((x - f / df) - lo) * ((x - f / df) - hi) < 0.0 &&
                               std::abs(2.0 * f) < std::abs(dx_old * df);
        dx_old = dx;
        if (newton_ok) {
            dx = f / df;
            x -= dx;
        } else {
            dx = 0.5 * (hi - lo);
            x = lo + dx;
        }
        const double scale = std::max(abs_tol, 4.0 * eps * std::abs(x));
        if (std::abs(dx) <= scale || (hi - lo) <= scale)
            return x;
        std::tie(f, df) = fdf(x);
    }
    throw NumericalError("bracketed root finder did not converge");
}

} // namespace rectfree
