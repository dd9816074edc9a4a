#include "bmotv/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace bmotv {

Domain Domain::interval(double a, double b) {
    if (!(b > a)) throw ModelError("domain interval must have positive length");
    Domain d;
    d.dim = 1;
    d.x = {a, b};
    return d;
}

Domain Domain::box(double x0, double x1, double y0, double y1) {
    if (!(x1 > x0 && y1 > y0)) throw ModelError("domain box must have positive sides");
    Domain d;
    d.dim = 2;
    d.x = {x0, x1};
    d.y = {y0, y1};
    return d;
}

Domain Domain::shrunk(double margin) const {
    if (margin < 0.0) throw ModelError("negative shrink margin");
    Domain d = *this;
    d.x = {x.lo + margin, x.hi - margin};
    if (!(d.x.hi > d.x.lo)) throw ModelError("shrink margin exceeds domain size");
    if (dim == 2) {
        d.y = {y.lo + margin, y.hi - margin};
        if (!(d.y.hi > d.y.lo)) throw ModelError("shrink margin exceeds domain size");
    }
    return d;
}

double polygon_area(const Polygon& p) {
    double a = 0.0;
    const size_t n = p.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2& u = p[i];
        const Vec2& v = p[(i + 1) % n];
        a += u.cross(v);
    }
    return 0.5 * a;
}

Vec2 polygon_centroid(const Polygon& p) {
    double a = 0.0;
    Vec2 c{0.0, 0.0};
    const size_t n = p.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2& u = p[i];
        const Vec2& v = p[(i + 1) % n];
        double w = u.cross(v);
        a += w;
        c.x += (u.x + v.x) * w;
        c.y += (u.y + v.y) * w;
    }
    if (std::fabs(a) < 1e-300) return p.empty() ? Vec2{} : p[0];
    return {c.x / (3.0 * a), c.y / (3.0 * a)};
}

bool point_in_convex(const Polygon& p, Vec2 q) {
    const size_t n = p.size();
    for (size_t i = 0; i < n; ++i) {
        Vec2 e = p[(i + 1) % n] - p[i];
        if (e.cross(q - p[i]) < 0.0) return false;
    }
    return true;
}

double polygon_perimeter(const Polygon& p) {
    double s = 0.0;
    const size_t n = p.size();
    for (size_t i = 0; i < n; ++i) s += (p[(i + 1) % n] - p[i]).norm();
    return s;
}

Polygon clip_halfplane(const Polygon& poly, Vec2 n, double d) {
    Polygon out;
    const size_t m = poly.size();
    if (m == 0) return out;
    out.reserve(m + 2);
    for (size_t i = 0; i < m; ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % m];
        const double fa = n.dot(a) - d;
        const double fb = n.dot(b) - d;
        const bool ina = fa <= 0.0;
        const bool inb = fb <= 0.0;
        if (ina) out.push_back(a);
        if (ina != inb) {
            double t = fa / (fa - fb);
            out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
        }
    }
    return out;
}

double integrate_affine_over_polygon(const Polygon& poly, double a0, Vec2 g) {
    // exact: integral of an affine function = area * value at centroid
    double a = polygon_area(poly);
    if (a == 0.0) return 0.0;
    Vec2 c = polygon_centroid(poly);
    return a * (a0 + g.dot(c));
}

double integrate_abs_affine_over_polygon(const Polygon& poly, double a0, Vec2 g) {
    if (poly.size() < 3) return 0.0;
    const double gn = g.norm();
    if (gn == 0.0) return std::fabs(a0) * polygon_area(poly);
    // split at the zero line g·p + a0 = 0
    Polygon neg = clip_halfplane(poly, g, -a0);
    double total = integrate_affine_over_polygon(poly, a0, g);
    double negpart = integrate_affine_over_polygon(neg, a0, g);
    // total = pos + neg; |.| integral = pos - neg
    return (total - negpart) - negpart;
}

double circle_polygon_intersection_area(Vec2 c, double r, const Polygon& poly) {
    // Standard per-edge decomposition: sum signed contributions of the
    // triangles (c, v_i, v_{i+1}) clipped to the disk, with circular sectors
    // for the parts of each edge outside the disk.
    const size_t n = poly.size();
    if (n < 3) return 0.0;
    const double r2 = r * r;
    double area = 0.0;

    auto sector = [&](Vec2 p1, Vec2 p2) {
        // signed circular sector between directions p1, p2 (relative to c)
        double ang = std::atan2(p1.cross(p2), p1.dot(p2));
        return 0.5 * r2 * ang;
    };

    for (size_t i = 0; i < n; ++i) {
        Vec2 a = poly[i] - c;
        Vec2 b = poly[(i + 1) % n] - c;
        const bool a_in = a.dot(a) <= r2;
        const bool b_in = b.dot(b) <= r2;

        // intersections of segment a->b with the circle
        Vec2 d = b - a;
        double A = d.dot(d);
        double B = 2.0 * a.dot(d);
        double C = a.dot(a) - r2;
        double disc = B * B - 4.0 * A * C;
        double t1 = 2.0, t2 = 2.0;
        if (disc > 0.0 && A > 0.0) {
            double sq = std::sqrt(disc);
            t1 = (-B - sq) / (2.0 * A);
            t2 = (-B + sq) / (2.0 * A);
        }
        auto at = [&](double t) { return Vec2{a.x + t * d.x, a.y + t * d.y}; };

        if (a_in && b_in) {
            area += 0.5 * a.cross(b);
        } else if (a_in && !b_in) {
            Vec2 p = at(std::clamp(t2, 0.0, 1.0));
            area += 0.5 * a.cross(p);
            area += sector(p, b);
        } else if (!a_in && b_in) {
            Vec2 p = at(std::clamp(t1, 0.0, 1.0));
            area += sector(a, p);
            area += 0.5 * p.cross(b);
        } else {
            // both outside: either the edge misses the disk or crosses it
            if (disc > 0.0 && t1 > 0.0 && t1 < 1.0 && t2 > t1 && t2 < 1.0) {
                Vec2 p1 = at(t1);
                Vec2 p2 = at(t2);
                area += sector(a, p1);
                area += 0.5 * p1.cross(p2);
                area += sector(p2, b);
            } else {
                area += sector(a, b);
            }
        }
    }
    return std::fabs(area);
}

bool convex_polygons_overlap(const Polygon& a, const Polygon& b, double slack) {
    // Separating-axis test on the edge normals of both polygons.
    auto separated_on = [&](const Polygon& edges, const Polygon& pa, const Polygon& pb) {
        const size_t n = edges.size();
        for (size_t i = 0; i < n; ++i) {
            Vec2 e = edges[(i + 1) % n] - edges[i];
            Vec2 axis{-e.y, e.x};
            double la = 1e300, ha = -1e300, lb = 1e300, hb = -1e300;
            for (const Vec2& p : pa) {
                double v = axis.dot(p);
                la = std::min(la, v);
                ha = std::max(ha, v);
            }
            for (const Vec2& p : pb) {
                double v = axis.dot(p);
                lb = std::min(lb, v);
                hb = std::max(hb, v);
            }
            double an = axis.norm();
            if (an == 0.0) continue;
            if (ha <= lb + slack * an || hb <= la + slack * an) return true;
        }
        return false;
    };
    if (separated_on(a, a, b)) return false;
    if (separated_on(b, a, b)) return false;
    return true;
}

}  // namespace bmotv
