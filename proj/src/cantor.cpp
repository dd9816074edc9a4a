#include "bmotv/cantor.hpp"

#include <algorithm>
#include <cmath>

namespace bmotv {

namespace {
inline double side_fraction(double lambda) { return 0.5 * (1.0 - lambda); }
}  // namespace

double cantor_value(double t, double lambda, int depth) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double r = side_fraction(lambda);
    double value = 0.0;
    double scale = 1.0;
    for (int d = 0; d < depth; ++d) {
        if (t >= r && t <= 1.0 - r) return value + 0.5 * scale;
        if (t < r) {
            t /= r;
        } else {
            t = (t - (1.0 - r)) / r;
            value += 0.5 * scale;
        }
        scale *= 0.5;
        if (t <= 0.0) return value;
        if (t >= 1.0) return value + scale;
    }
    return value + scale * t;  // linear fallback at the depth cap
}

double cantor_integral(double t, double lambda, int depth) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 0.5 + (t - 1.0);  // phi == 1 right of the base
    const double r = side_fraction(lambda);
    // A(t) over [0,1]: accumulate exact closed pieces while descending into
    // the single subinterval containing t.
    double acc = 0.0;    // integral gathered so far (in original t-units)
    double xscale = 1.0; // current subinterval length relative to [0,1]
    double yscale = 1.0; // current value range of the local copy
    for (int d = 0; d < depth; ++d) {
        if (t >= 1.0) return acc + 0.5 * xscale * yscale;
        if (t >= r && t <= 1.0 - r) {
            // A(r) = r/4 (local units), then the flat half-level plateau
            acc += xscale * yscale * (0.25 * r + 0.5 * (t - r));
            return acc;
        }
        if (t < r) {
            t /= r;
        } else {
            // left side + plateau fully covered: r/4 + lambda/2, plus the
            // level offset 1/2 over the right side portion
            acc += xscale * yscale * (0.25 * r + 0.5 * lambda);
            double tt = (t - (1.0 - r)) / r;
            acc += xscale * yscale * 0.5 * (r * tt);
            t = tt;
        }
        xscale *= r;
        yscale *= 0.5;
    }
    // depth cap: approximate the remaining copy by the midpoint value
    return acc + xscale * yscale * 0.5 * t * t;
}

bool cantor_constant_on(double t0, double t1, double lambda, int max_depth) {
    if (t1 <= 0.0 || t0 >= 1.0) return true;
    const double r = side_fraction(lambda);
    t0 = std::max(t0, 0.0);
    t1 = std::min(t1, 1.0);
    for (int d = 0; d < max_depth; ++d) {
        if (t0 >= r && t1 <= 1.0 - r) return true;
        if (t1 <= r) {
            t0 /= r;
            t1 /= r;
        } else if (t0 >= 1.0 - r) {
            t0 = (t0 - (1.0 - r)) / r;
            t1 = (t1 - (1.0 - r)) / r;
        } else {
            return false;  // spans a side boundary
        }
        if (t1 <= 0.0 || t0 >= 1.0) return true;
    }
    return false;
}

double cantor_interpolant_value(double t, double lambda, int k) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double r = side_fraction(lambda);
    double value = 0.0;
    double scale = 1.0;
    for (int d = 0; d < k; ++d) {
        if (t >= r && t <= 1.0 - r) return value + 0.5 * scale;
        if (t < r) {
            t /= r;
        } else {
            t = (t - (1.0 - r)) / r;
            value += 0.5 * scale;
        }
        scale *= 0.5;
    }
    return value + scale * std::clamp(t, 0.0, 1.0);
}

namespace {

void interpolant_rec(double lambda, int k, double t0, double t1, double v0, double v1,
                     std::vector<double>& knots, std::vector<double>& values) {
    if (k == 0) {
        knots.push_back(t1);
        values.push_back(v1);
        return;
    }
    const double r = side_fraction(lambda);
    const double a = t0 + r * (t1 - t0);
    const double b = t1 - r * (t1 - t0);
    const double vm = 0.5 * (v0 + v1);
    interpolant_rec(lambda, k - 1, t0, a, v0, vm, knots, values);
    // plateau [a, b] at vm: previous call already ended at (a, vm)
    knots.push_back(b);
    values.push_back(vm);
    interpolant_rec(lambda, k - 1, b, t1, vm, v1, knots, values);
}

}  // namespace

void cantor_interpolant_knots(double lambda, int k,
                              std::vector<double>& knots,
                              std::vector<double>& values) {
    knots.clear();
    values.clear();
    knots.push_back(0.0);
    values.push_back(0.0);
    interpolant_rec(lambda, k, 0.0, 1.0, 0.0, 1.0, knots, values);
}

void cantor_gap_centers(double lambda, int max_level, double min_gap_length,
                        std::vector<double>& out) {
    const double r = side_fraction(lambda);
    struct Node {
        double t0, t1;
        int level;
    };
    std::vector<Node> stack{{0.0, 1.0, 0}};
    while (!stack.empty()) {
        Node nd = stack.back();
        stack.pop_back();
        double len = nd.t1 - nd.t0;
        double gap = len * lambda;
        if (gap >= min_gap_length) out.push_back(0.5 * (nd.t0 + nd.t1));
        if (nd.level + 1 < max_level) {
            stack.push_back({nd.t0, nd.t0 + r * len, nd.level + 1});
            stack.push_back({nd.t1 - r * len, nd.t1, nd.level + 1});
        }
    }
    std::sort(out.begin(), out.end());
}

}  // namespace bmotv
