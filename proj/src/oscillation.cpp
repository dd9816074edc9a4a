#include "bmotv/oscillation.hpp"

#include <algorithm>
#include <cmath>

namespace bmotv {

namespace {
constexpr double kTieEps = 1e-13;
}

Polygon Cube::corners() const {
    const double h = 0.5 * side;
    const double c = std::cos(theta), s = std::sin(theta);
    auto rot = [&](double u, double v) {
        return Vec2{center.x + c * u - s * v, center.y + s * u + c * v};
    };
    return {rot(-h, -h), rot(h, -h), rot(h, h), rot(-h, h)};
}

bool Cube::inside(const Domain& omega) const {
    if (dim == 1) {
        Interval iv = interval();
        return iv.lo >= omega.x.lo - kTieEps && iv.hi <= omega.x.hi + kTieEps;
    }
    for (const Vec2& p : corners()) {
        if (p.x < omega.x.lo - kTieEps || p.x > omega.x.hi + kTieEps ||
            p.y < omega.y.lo - kTieEps || p.y > omega.y.hi + kTieEps)
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// 1D deviation integral
// ---------------------------------------------------------------------------

namespace {

struct DevAccumulator {
    double value = 0.0;
    double err = 0.0;
    bool exact = true;
};

double bisect_crossing(const FunctionModel& f, double c, double lo, double hi, double glo,
                       double ghi) {
    // g = f - c monotone on (lo, hi), glo and ghi of opposite sign
    (void)ghi;
    double a = lo, b = hi;
    double ga = glo;
    for (int it = 0; it < 64; ++it) {
        double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        double gm = f.eval_right(m) - c;
        if (gm == 0.0) return m;
        if ((ga < 0.0) == (gm < 0.0)) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
        if (b - a <= 1e-15 * std::max({1.0, std::fabs(a), std::fabs(b)})) break;
    }
    return 0.5 * (a + b);
}

// |int_u^v (f - c)| when the sign of f - c is constant on (u, v)
double signed_block(const FunctionModel& f, double c, double u, double v) {
    return std::fabs(f.integral_on(u, v) - c * (v - u));
}

// enclosure fallback for segments where the smooth part and a cantor part
// move in opposite directions (or a mollified window straddles a reversal)
void enclose_segment(const FunctionModel& f, double c, double u, double v, double tol,
                     DevAccumulator& acc, int depth) {
    const double gu = f.eval_right(u) - c;
    const double var = f.variation_on(u, v);
    if (std::fabs(gu) > var) {  // sign certified constant
        acc.value += signed_block(f, c, u, v);
        return;
    }
    const double len = v - u;
    const double m = f.integral_on(u, v) - c * len;
    const double lo_b = std::fabs(m);
    const double hi_b = len * (std::fabs(gu) + var);
    if (depth >= 40 || hi_b - lo_b <= 2.0 * tol) {
        acc.value += 0.5 * (lo_b + hi_b);
        acc.err += 0.5 * (hi_b - lo_b);
        acc.exact = false;
        return;
    }
    const double mid = 0.5 * (u + v);
    enclose_segment(f, c, u, mid, 0.5 * tol, acc, depth + 1);
    enclose_segment(f, c, mid, v, 0.5 * tol, acc, depth + 1);
}

void dev_segment(const FunctionModel& f, double c, double u, double v, double tol,
                 DevAccumulator& acc) {
    if (!(v > u)) return;
    const MonotoneClass cls = f.derivative_class_on(u, v);
    if (cls == MonotoneClass::zero) {
        acc.value += std::fabs(f.eval_right(0.5 * (u + v)) - c) * (v - u);
        return;
    }
    if (cls == MonotoneClass::mixed) {
        enclose_segment(f, c, u, v, tol, acc, 0);
        return;
    }
    const double gu = f.eval_right(u) - c;
    const double gv = f.eval_left(v) - c;
    if ((gu >= 0.0) == (gv >= 0.0) || gu == 0.0 || gv == 0.0) {
        acc.value += signed_block(f, c, u, v);
        return;
    }
    const double x = bisect_crossing(f, c, u, v, gu, gv);
    acc.value += signed_block(f, c, u, x);
    acc.value += signed_block(f, c, x, v);
}

DevAccumulator abs_dev_raw_1d(const FunctionModel& f, Interval Q, double c, double tol) {
    std::vector<double> pts{Q.lo, Q.hi};
    f.breakpoints_in(Q.lo, Q.hi, pts);
    f.monotone_split_points(Q.lo, Q.hi, pts);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](double a, double b) { return std::fabs(a - b) <= kTieEps; }),
              pts.end());
    DevAccumulator acc;
    const double seg_tol = tol / double(pts.size());
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        dev_segment(f, c, pts[i], pts[i + 1], seg_tol, acc);
    return acc;
}

}  // namespace

// ---------------------------------------------------------------------------
// 2D deviation integral (quadtree over the cube's local frame)
// ---------------------------------------------------------------------------

namespace {

struct LocalRegion {
    bool is_disk = false;
    Vec2 center;     // disk center, local frame
    double radius = 0.0;
    Polygon poly;    // polygon region, local frame
    double height = 0.0;
};

struct Quad2D {
    std::vector<LocalRegion> regions;
    double a0_local;   // affine constant incl. region outside offsets, minus c
    Vec2 grad_local;
    double area_total;
    double value = 0.0;
    double err = 0.0;
    bool exact = true;
    long long cells = 0;
    long long cell_budget = 4'000'000;

    // -1 outside, +1 inside, 0 straddle
    static int classify_disk(const LocalRegion& r, double x0, double x1, double y0,
                             double y1) {
        const double dx = std::max({x0 - r.center.x, 0.0, r.center.x - x1});
        const double dy = std::max({y0 - r.center.y, 0.0, r.center.y - y1});
        const double dmin = std::hypot(dx, dy);
        if (dmin >= r.radius) return -1;
        double dmax = 0.0;
        for (double cx : {x0, x1})
            for (double cy : {y0, y1})
                dmax = std::max(dmax, std::hypot(cx - r.center.x, cy - r.center.y));
        if (dmax <= r.radius) return 1;
        return 0;
    }

    static int classify_poly(const LocalRegion& r, const Polygon& cell) {
        bool all_in = true;
        for (const Vec2& p : cell)
            if (!point_in_convex(r.poly, p)) {
                all_in = false;
                break;
            }
        if (all_in) return 1;
        if (!convex_polygons_overlap(r.poly, cell, 0.0)) return -1;
        return 0;
    }

    double abs_affine(const Polygon& poly, double add) const {
        return integrate_abs_affine_over_polygon(poly, a0_local + add, grad_local);
    }

    void cell(double x0, double x1, double y0, double y1, double tol, int depth) {
        ++cells;
        const Polygon cellpoly{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
        double base_add = 0.0;
        const LocalRegion* straddle = nullptr;
        int straddle_count = 0;
        for (const LocalRegion& r : regions) {
            int cls = r.is_disk ? classify_disk(r, x0, x1, y0, y1)
                                : classify_poly(r, cellpoly);
            if (cls == 1) base_add += r.height;
            else if (cls == 0) {
                straddle = &r;
                ++straddle_count;
            }
        }
        if (straddle_count == 0) {
            value += abs_affine(cellpoly, base_add);
            return;
        }

        const double cell_area = (x1 - x0) * (y1 - y0);
        const bool can_split = depth < 40 && cells < cell_budget;

        if (straddle_count == 1 && !straddle->is_disk) {
            // polygon boundary: exact split of the cell
            Polygon inside = cellpoly;
            const Polygon& rp = straddle->poly;
            for (size_t i = 0; i < rp.size() && !inside.empty(); ++i) {
                Vec2 a = rp[i], b = rp[(i + 1) % rp.size()];
                Vec2 e = b - a;
                Vec2 n{e.y, -e.x};  // inward normal is left of edge; keep n·p <= n·a
                inside = clip_halfplane(inside, n, n.dot(a));
            }
            double v_in = integrate_abs_affine_over_polygon(
                inside, a0_local + base_add + straddle->height, grad_local);
            double v_all_out = abs_affine(cellpoly, base_add);
            double v_in_out = integrate_abs_affine_over_polygon(inside, a0_local + base_add,
                                                                grad_local);
            value += v_in + (v_all_out - v_in_out);
            return;
        }

        if (straddle_count == 1 && straddle->is_disk) {
            const LocalRegion& r = *straddle;
            const double diag = std::hypot(x1 - x0, y1 - y0);
            if (diag > 0.25 * r.radius && can_split) {
                split(x0, x1, y0, y1, tol, depth);
                return;
            }
            // chord approximation through the circle/cell-boundary crossings,
            // with the exact intersection area certifying the error
            const double exact_area =
                circle_polygon_intersection_area(r.center, r.radius, cellpoly);
            Polygon chord_in;
            std::vector<Vec2> hits;
            auto edge_hits = [&](Vec2 a, Vec2 b) {
                Vec2 d = b - a;
                Vec2 ac = a - r.center;
                double A = d.dot(d);
                double B = 2.0 * ac.dot(d);
                double C = ac.dot(ac) - r.radius * r.radius;
                double disc = B * B - 4.0 * A * C;
                if (disc <= 0.0 || A == 0.0) return;
                double sq = std::sqrt(disc);
                for (double t : {(-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A)})
                    if (t >= 0.0 && t <= 1.0) hits.push_back({a.x + t * d.x, a.y + t * d.y});
            };
            for (size_t i = 0; i < 4; ++i) edge_hits(cellpoly[i], cellpoly[(i + 1) % 4]);
            if (hits.size() >= 2) {
                // halfplane through the two extreme hits, disk-center side kept
                Vec2 p = hits.front(), q = hits.back();
                double best = -1.0;
                for (size_t i = 0; i < hits.size(); ++i)
                    for (size_t j = i + 1; j < hits.size(); ++j) {
                        double d2 = (hits[i] - hits[j]).norm();
                        if (d2 > best) {
                            best = d2;
                            p = hits[i];
                            q = hits[j];
                        }
                    }
                Vec2 e = q - p;
                Vec2 n{e.y, -e.x};
                if (n.dot(r.center - p) > 0.0) n = n * -1.0;  // keep center side as <=
                chord_in = clip_halfplane(cellpoly, n, n.dot(p));
            } else if (exact_area > 0.5 * cell_area) {
                chord_in = cellpoly;
            }
            const double chord_area = polygon_area(chord_in);
            const double area_err = std::fabs(exact_area - chord_area);
            const double bound = std::fabs(r.height) * area_err;
            if (bound > tol && can_split) {
                split(x0, x1, y0, y1, tol, depth);
                return;
            }
            double v_in = integrate_abs_affine_over_polygon(
                chord_in, a0_local + base_add + r.height, grad_local);
            double v_all_out = abs_affine(cellpoly, base_add);
            double v_in_out =
                integrate_abs_affine_over_polygon(chord_in, a0_local + base_add, grad_local);
            value += v_in + (v_all_out - v_in_out);
            err += bound;
            if (area_err > 0.0) exact = false;
            return;
        }

        // several region boundaries meet this cell
        if (can_split) {
            split(x0, x1, y0, y1, tol, depth);
            return;
        }
        // depth/budget exhausted: conservative enclosure
        double lo_b = 0.0;
        double hi_b = 0.0;
        double gmax = std::fabs(a0_local + base_add) +
                      grad_local.norm() * std::hypot(std::max(std::fabs(x0), std::fabs(x1)),
                                                     std::max(std::fabs(y0), std::fabs(y1)));
        for (const LocalRegion& r : regions) gmax += std::fabs(r.height);
        hi_b = cell_area * gmax;
        value += 0.5 * (lo_b + hi_b);
        err += 0.5 * (hi_b - lo_b);
        exact = false;
    }

    void split(double x0, double x1, double y0, double y1, double tol, int depth) {
        const double xm = 0.5 * (x0 + x1), ym = 0.5 * (y0 + y1);
        cell(x0, xm, y0, ym, 0.25 * tol, depth + 1);
        cell(xm, x1, y0, ym, 0.25 * tol, depth + 1);
        cell(x0, xm, ym, y1, 0.25 * tol, depth + 1);
        cell(xm, x1, ym, y1, 0.25 * tol, depth + 1);
    }
};

Quad2D make_quad(const FunctionModel& f, const Cube& Q, double c) {
    const PlaneData& pd = f.plane_data();
    Quad2D q;
    const double cth = std::cos(Q.theta), sth = std::sin(Q.theta);
    auto to_local = [&](Vec2 p) {
        Vec2 d = p - Q.center;
        return Vec2{cth * d.x + sth * d.y, -sth * d.x + cth * d.y};
    };
    double consts = pd.a0 + pd.grad.dot(Q.center) - c;
    for (const JumpRegion& r : pd.regions) {
        consts += r.outside;
        LocalRegion lr;
        lr.height = r.height();
        if (std::holds_alternative<DiskRegion>(r.shape)) {
            const DiskRegion& d = std::get<DiskRegion>(r.shape);
            lr.is_disk = true;
            lr.center = to_local(d.center);
            lr.radius = d.radius;
        } else {
            for (const Vec2& v : std::get<Polygon>(r.shape)) lr.poly.push_back(to_local(v));
        }
        q.regions.push_back(std::move(lr));
    }
    q.a0_local = consts;
    q.grad_local = {cth * pd.grad.x + sth * pd.grad.y, -sth * pd.grad.x + cth * pd.grad.y};
    q.area_total = Q.side * Q.side;
    return q;
}

}  // namespace

// ---------------------------------------------------------------------------
// public operations
// ---------------------------------------------------------------------------

double cube_mean(const FunctionModel& f, const Cube& Q, double tol) {
    if (f.dim() == 1) {
        return mean_value(f, Q.interval(), tol);
    }
    const PlaneData& pd = f.plane_data();
    const Polygon qp = Q.corners();
    const double area = Q.side * Q.side;
    double m = pd.a0 + pd.grad.dot(Q.center);
    for (const JumpRegion& r : pd.regions) {
        m += r.outside;
        double inter;
        if (std::holds_alternative<DiskRegion>(r.shape)) {
            const DiskRegion& d = std::get<DiskRegion>(r.shape);
            inter = circle_polygon_intersection_area(d.center, d.radius, qp);
        } else {
            Polygon p = std::get<Polygon>(r.shape);
            const size_t n = qp.size();
            for (size_t i = 0; i < n && !p.empty(); ++i) {
                Vec2 a = qp[i], b = qp[(i + 1) % n];
                Vec2 e = b - a;
                Vec2 nrm{e.y, -e.x};
                p = clip_halfplane(p, nrm, nrm.dot(a));
            }
            inter = polygon_area(p);
        }
        m += r.height() * inter / area;
    }
    return m;
}

double integrate_abs_dev(const FunctionModel& f, const Cube& Q, double c, double tol) {
    if (f.dim() == 1) {
        if (!Q.inside(f.domain())) throw ModelError("cube not contained in the domain");
        Interval iv = Q.interval();
        DevAccumulator acc = abs_dev_raw_1d(f, iv, c, tol * Q.side);
        return acc.value / Q.side;
    }
    if (!Q.inside(f.domain())) throw ModelError("cube not contained in the domain");
    Quad2D q = make_quad(f, Q, c);
    const double h = 0.5 * Q.side;
    q.cell(-h, h, -h, h, tol * q.area_total, 0);
    if (q.err > tol * q.area_total)
        throw ToleranceError("2D deviation quadrature exhausted its subdivision budget",
                             q.err / q.area_total);
    return q.value / q.area_total;
}

OscValue mean_oscillation(const FunctionModel& f, const Cube& Q, double tol) {
    if (f.dim() != 1) return mean_oscillation_2d(f, Q, tol);
    if (!Q.inside(f.domain())) throw ModelError("cube not contained in the domain");
    const double c = mean_value(f, Q.interval(), 0.5 * tol);
    DevAccumulator acc = abs_dev_raw_1d(f, Q.interval(), c, 0.5 * tol * Q.side);
    OscValue v;
    v.value = acc.value / Q.side;
    v.tolerance = acc.err / Q.side + 0.5 * tol;
    v.exact = acc.exact;
    return v;
}

OscValue mean_oscillation_2d(const FunctionModel& f, const Cube& Q, double tol) {
    if (f.dim() != 2) throw ModelError("mean_oscillation_2d needs a 2D model");
    if (!Q.inside(f.domain())) throw ModelError("cube not contained in the domain");
    const double c = cube_mean(f, Q, 0.5 * tol);
    Quad2D q = make_quad(f, Q, c);
    const double h = 0.5 * Q.side;
    q.cell(-h, h, -h, h, 0.5 * tol * q.area_total, 0);
    OscValue v;
    v.value = q.value / q.area_total;
    v.tolerance = q.err / q.area_total;
    v.exact = q.exact;
    if (q.err > 0.5 * tol * q.area_total)
        throw ToleranceError("2D oscillation quadrature exhausted its subdivision budget",
                             v.tolerance);
    return v;
}

}  // namespace bmotv
