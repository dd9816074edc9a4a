#pragma once

#include <cstdint>
#include <vector>

#include "bmotv/bv_function.hpp"
#include "bmotv/oscillation.hpp"

namespace bmotv {

struct Candidate {
    Cube cube;
    double value = 0.0;       // mean oscillation
    std::int64_t index = 0;   // lattice index; negative for injected candidates
    double start() const { return cube.center.x - 0.5 * cube.side; }
};

struct CubeFamily {
    std::vector<Cube> cubes;
    double weighted_sum = 0.0;  // eps^{n-1} * sum of oscillations
};

struct KappaEstimate {
    double eps = 0.0;
    double value = 0.0;  // certified lower estimate of kappa_eps
    CubeFamily family;
    int shift_resolution = 0;      // lattice m (1D) / shifts per axis (2D)
    int orientation_samples = 0;   // 2D only
    double tol = 0.0;              // per-cube quadrature tolerance
};

struct PackingParams {
    int m = 64;          // 1D shift-lattice resolution
    int shifts = 2;      // 2D offsets per axis
    int angles = 16;     // 2D orientation samples over [0, pi/2)
    double tol = 1e-8;   // per-cube oscillation tolerance
    int threads = 1;
};

// Shift-lattice candidates with step eps/m, plus one jump-centered candidate
// per jump location (and gap-centered candidates for cantor staircases), so
// the first-order optimal placements are always present. Sorted by start.
std::vector<Candidate> generate_candidates_1d(const FunctionModel& f, const Domain& omega,
                                              double eps, int m, double tol,
                                              int threads = 1);

// Exact maximum-weight pairwise-disjoint subfamily over sorted candidates
// (weighted interval scheduling DP). Open cubes: touching endpoints are
// disjoint. Ties break toward fewer cubes, then the leftmost family.
CubeFamily max_disjoint_sum(const std::vector<Candidate>& candidates, double eps);

// Exhaustive oracle over all disjoint subsets. Subset sums accumulate in
// ascending candidate order, matching the DP's association exactly.
double brute_force_max(const std::vector<Candidate>& candidates, double eps);

KappaEstimate kappa_1d(const FunctionModel& f, const Domain& omega, double eps, int m,
                       double tol, int threads = 1);

// Coarse-lattice exhaustive variant; candidate count must stay <= 22.
double brute_force_kappa_1d(const FunctionModel& f, const Domain& omega, double eps, int m,
                            double tol = 1e-8);

// Two strategies, best result reported: (a) full shifted grids over offsets
// and sampled orientations; (b) greedy packing of a dense candidate set with
// jump-boundary-centered, tangent-aligned candidates injected.
KappaEstimate kappa_2d(const FunctionModel& f, const Domain& omega, double eps,
                       const PackingParams& params);

// Recompute eps^{n-1} * sum of oscillations over a family (soundness check).
double family_weighted_sum(const FunctionModel& f, const CubeFamily& family, double eps,
                           double tol);

}  // namespace bmotv
