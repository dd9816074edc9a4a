#include "bmotv/poly.hpp"

#include <algorithm>
#include <cmath>

namespace bmotv {

void quadratic_roots_in(double a, double b, double c, double lo, double hi,
                        std::vector<double>& out) {
    const double scale = std::max({std::fabs(a), std::fabs(b), std::fabs(c)});
    if (scale == 0.0) return;
    if (std::fabs(a) <= 1e-14 * scale) {
        if (std::fabs(b) <= 1e-14 * scale) return;  // constant
        double r = -c / b;
        if (r > lo && r < hi) out.push_back(r);
        return;
    }
    double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return;
    double sq = std::sqrt(disc);
    // numerically stable pair
    double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
    double r1 = q / a;
    double r2 = (q != 0.0) ? c / q : r1;
    if (r1 > r2) std::swap(r1, r2);
    if (r1 > lo && r1 < hi) out.push_back(r1);
    if (r2 > lo && r2 < hi && r2 != r1) out.push_back(r2);
}

namespace {

double bisect_root(const Poly& p, double a, double b, double fa, double fb) {
    // fa and fb have opposite signs
    for (int it = 0; it < 80; ++it) {
        double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        double fm = p(m);
        if (fm == 0.0) return m;
        if ((fa < 0.0) == (fm < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    (void)fb;
    return 0.5 * (a + b);
}

}  // namespace

void cubic_roots_in(const Poly& p, double lo, double hi, std::vector<double>& out) {
    if (p.n <= 1) return;  // constant: no isolated roots
    Poly d = p.derivative();
    std::vector<double> knots;
    knots.push_back(lo);
    if (d.n >= 2) {
        std::vector<double> crit;
        double a = d.n >= 3 ? d.c[2] : 0.0;
        double b = d.n >= 2 ? d.c[1] : 0.0;
        double c = d.n >= 1 ? d.c[0] : 0.0;
        quadratic_roots_in(a, b, c, lo, hi, crit);
        for (double r : crit) knots.push_back(r);
    }
    knots.push_back(hi);
    for (size_t i = 0; i + 1 < knots.size(); ++i) {
        double a = knots[i], b = knots[i + 1];
        double fa = p(a), fb = p(b);
        if (fa == 0.0 && i == 0 && a > lo) out.push_back(a);
        if (fa * fb < 0.0) {
            out.push_back(bisect_root(p, a, b, fa, fb));
        } else if (fb == 0.0 && b < hi) {
            out.push_back(b);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
}

}  // namespace bmotv
