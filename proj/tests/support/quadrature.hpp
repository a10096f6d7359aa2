#pragma once

// Adaptive Simpson quadrature. Test-side oracle, independent of the closed
// forms it is used to check.

#include <cmath>
#include <functional>

namespace testsupport {

namespace detail {

inline double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adapt(const std::function<double(double)>& f, double a, double fa, double b,
                    double fb, double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Integrates f over [a, b] to roughly `tol` absolute accuracy. The interval is
/// pre-split so sharply localized integrands (fast exponential decay) are not
/// missed by the first error estimate.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
    if (a == b) return 0.0;
    constexpr int panels = 64;
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double lo = a + i * h;
        const double hi = i + 1 == panels ? b : lo + h;
        const double mid = 0.5 * (lo + hi);
        const double flo = f(lo), fhi = f(hi), fmid = f(mid);
        const double whole = detail::simpson(lo, flo, hi, fhi, fmid);
        total += detail::adapt(f, lo, flo, hi, fhi, mid, fmid, whole, tol / panels, 48);
    }
    return total;
}

}  // namespace testsupport
