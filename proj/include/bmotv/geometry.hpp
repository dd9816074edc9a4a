#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "bmotv/errors.hpp"

namespace bmotv {

struct Vec2 {
    double x = 0.0, y = 0.0;
    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
};

struct Interval {
    double lo = 0.0, hi = 0.0;
    double length() const { return hi - lo; }
    bool contains(double x) const { return x > lo && x < hi; }
    bool contains_closed(double x) const { return x >= lo && x <= hi; }
};

// Open interval (1D) or open axis-aligned box (2D).
struct Domain {
    int dim = 1;
    Interval x;
    Interval y;  // 2D only

    static Domain interval(double a, double b);
    static Domain box(double x0, double x1, double y0, double y1);

    double measure() const { return dim == 1 ? x.length() : x.length() * y.length(); }
    double min_side() const { return dim == 1 ? x.length() : std::min(x.length(), y.length()); }
    Domain shrunk(double margin) const;
    bool contains(double px) const { return dim == 1 && x.contains(px); }
    bool contains(Vec2 p) const {
        return dim == 2 && x.contains(p.x) && y.contains(p.y);
    }
};

// Convex polygon, CCW vertex order.
using Polygon = std::vector<Vec2>;

double polygon_area(const Polygon& p);
Vec2 polygon_centroid(const Polygon& p);
bool point_in_convex(const Polygon& p, Vec2 q);  // closed containment
double polygon_perimeter(const Polygon& p);

// Keep the part of `poly` with n·p <= d (half-plane clip, Sutherland–Hodgman).
Polygon clip_halfplane(const Polygon& poly, Vec2 n, double d);

// Integral over the polygon of the affine function a0 + g·p.
double integrate_affine_over_polygon(const Polygon& poly, double a0, Vec2 g);

// Integral over the polygon of |a0 + g·p|.
double integrate_abs_affine_over_polygon(const Polygon& poly, double a0, Vec2 g);

// Area of the intersection of the disk B(c, r) with a convex CCW polygon.
double circle_polygon_intersection_area(Vec2 c, double r, const Polygon& poly);

// Do two convex polygons overlap with positive area? Shared edges/corners do
// not count (open-set disjointness). `slack` treats overlaps shallower than
// slack as touching.
bool convex_polygons_overlap(const Polygon& a, const Polygon& b, double slack = 1e-12);

}  // namespace bmotv
