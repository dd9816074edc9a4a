#pragma once

#include <vector>

namespace bmotv {

// Middle-lambda Cantor staircase on [0,1], normalized to rise from 0 to 1.
// With side fraction r = (1-lambda)/2 the function satisfies
//   phi(t) = phi(t/r)/2                 for t in [0, r],
//   phi(t) = 1/2                        for t in [r, 1-r],
//   phi(t) = 1/2 + phi((t-(1-r))/r)/2   for t in [1-r, 1].
// Points that reach a gap are evaluated exactly; points that stay in the
// Cantor set to depth `depth` get the linear fallback, with error <= 2^-depth
// (actually 2^-depth * sup|t - phi(t)| <= 2^-(depth+1)).

double cantor_value(double t, double lambda, int depth);

// Integral of the staircase: A(t) = int_0^t phi. Exact up to the recursion
// depth (error <= (r/2)^depth).
double cantor_integral(double t, double lambda, int depth);

// True when phi is constant on [t0, t1] (the interval sits in a gap or
// outside [0,1]); checked down to max_depth levels.
bool cantor_constant_on(double t0, double t1, double lambda, int max_depth);

// Generation-k piecewise-linear interpolant value (exact).
double cantor_interpolant_value(double t, double lambda, int k);

// Knots (in t-space, including 0 and 1) and values of the generation-k
// interpolant. The interpolant is linear between consecutive knots.
void cantor_interpolant_knots(double lambda, int k,
                              std::vector<double>& knots,
                              std::vector<double>& values);

// Centers of the gaps (plateaus) down to `max_level`, skipping gaps shorter
// than min_gap_length (t-space lengths). Used for candidate injection.
void cantor_gap_centers(double lambda, int max_level, double min_gap_length,
                        std::vector<double>& out);

}  // namespace bmotv
