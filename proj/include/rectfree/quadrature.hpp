#pragma once

#include <cmath>
#include <vector>

#include "rectfree/errors.hpp"

namespace rectfree {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long intervals = 0;
};

/// Adaptive Simpson quadrature with a global absolute tolerance.
///
/// Each accepted panel satisfies |S2 - S1| <= 15 * tol_panel with tol_panel
/// proportional to the panel width; the Richardson-corrected value is summed.
/// Throws NumericalError when more than `max_intervals` panels are needed.
template <typename F>
QuadratureResult integrate_adaptive_simpson(F&& f, double a, double b, double abs_tol = 1e-10,
                                            long max_intervals = 1'000'000)
{
    QuadratureResult out;
    if (a == b)
        return out;
    const double width = b - a;

    struct Panel {
        double a, b, fa, fm, fb, whole;
    };
    auto simpson = [](double a, double b, double fa, double fm, double fb) {
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    };

    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    std::vector<Panel> stack{{a, b, fa, fm, fb, simpson(a, b, fa, fm, fb)}};
    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        const double m = 0.5 * (p.a + p.b);
        const double lm = 0.5 * (p.a + m), rm = 0.5 * (m + p.b);
        const double flm = f(lm), frm = f(rm);
        const double left = simpson(p.a, m, p.fa, flm, p.fm);
        const double right = simpson(m, p.b, p.fm, frm, p.fb);
        const double diff = left + right - p.whole;
        const double panel_tol = abs_tol * std::abs((p.b - p.a) / width);
        if (std::abs(diff) <= 15.0 * panel_tol || std::abs(p.b - p.a) <= 1e-14 * std::abs(width)) {
            out.value += left + right + diff / 15.0;
            out.error_estimate += std::abs(diff) / 15.0;
            ++out.intervals;
            continue;
        }
        if (static_cast<long>(stack.size()) + out.intervals + 2 > max_intervals)
            throw NumericalError("adaptive Simpson exceeded its interval budget");
        stack.push_back({m, p.b, p.fm, frm, p.fb, right});
        stack.push_back({p.a, m, p.fa, flm, p.fm, left});
    }
    return out;
}

} // namespace rectfree
