#pragma once

#include "bmotv/bv_function.hpp"
#include "bmotv/geometry.hpp"

namespace bmotv {

// Open cube: an eps-interval in 1D, a rotated eps-square in 2D.
struct Cube {
    int dim = 1;
    Vec2 center;       // center.x only in 1D
    double side = 0.0;
    double theta = 0.0;  // radians in [0, pi/2), 2D only

    static Cube interval_cube(double center, double side) {
        Cube q;
        q.dim = 1;
        q.center = {center, 0.0};
        q.side = side;
        return q;
    }
    static Cube square(Vec2 center, double side, double theta) {
        Cube q;
        q.dim = 2;
        q.center = center;
        q.side = side;
        q.theta = theta;
        return q;
    }

    Interval interval() const { return {center.x - 0.5 * side, center.x + 0.5 * side}; }
    Polygon corners() const;           // 2D, CCW
    double measure() const { return dim == 1 ? side : side * side; }
    bool inside(const Domain& omega) const;  // closure containment in the closed domain
};

struct OscValue {
    double value = 0.0;
    double tolerance = 0.0;  // achieved bound
    bool exact = true;       // closed-form path everywhere, no enclosure cells
};

// Normalized deviation integral: (1/|Q|) * int_Q |f - c|, within tol.
double integrate_abs_dev(const FunctionModel& f, const Cube& Q, double c, double tol);

// Mean oscillation of f over Q: the deviation integral at c = mean of f on Q.
// The error budget is split between the mean and the deviation integral.
OscValue mean_oscillation(const FunctionModel& f, const Cube& Q, double tol);

// 2D instance (adaptive quadtree splitting cells cut by jump boundaries;
// affine cells are integrated exactly). Throws ToleranceError if the
// subdivision budget is exhausted before tol is met.
OscValue mean_oscillation_2d(const FunctionModel& f, const Cube& Q, double tol);

// Mean of f over the cube (1D: interval mean; 2D: exact affine + region areas).
double cube_mean(const FunctionModel& f, const Cube& Q, double tol);

}  // namespace bmotv
