#pragma once

#include <cmath>

namespace bmotv {

// Adaptive Simpson with the usual 1/15 error estimate. F must be continuous
// on [a, b]; kinks are fine, jumps are the caller's job to split at.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol, int max_depth = 48) {
    struct Impl {
        const F& f;
        int max_depth;
        double run(double a, double m, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) const {
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double h = b - a;
            const double left = h / 12.0 * (fa + 4.0 * flm + fm);
            const double right = h / 12.0 * (fm + 4.0 * frm + fb);
            const double err = left + right - whole;
            if (depth >= max_depth || std::fabs(err) <= 15.0 * tol)
                return left + right + err / 15.0;
            return run(a, lm, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
                   run(m, rm, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
        }
    };
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return Impl{f, max_depth}.run(a, m, b, fa, fm, fb, whole, tol, 0);
}

}  // namespace bmotv
