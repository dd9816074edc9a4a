#include "bmotv/bv_function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "bmotv/quadrature.hpp"

namespace bmotv {

namespace {

constexpr double kTieEps = 1e-13;

void append_unique_sorted(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end(),
                        [](double a, double b) { return std::fabs(a - b) <= kTieEps; }),
            v.end());
}

MonotoneClass combine(MonotoneClass a, MonotoneClass b) {
    if (a == MonotoneClass::zero) return b;
    if (b == MonotoneClass::zero) return a;
    if (a == b) return a;
    return MonotoneClass::mixed;
}

double cantor_t(const CantorComponent& c, double x) {
    return (x - c.base.lo) / c.base.length();
}

double cantor_contribution(const CantorComponent& c, double x) {
    return c.rise * cantor_value(cantor_t(c, x), c.lambda, c.depth);
}

// integral of the cantor contribution over (lo, hi), exact to recursion depth
double cantor_contribution_integral(const CantorComponent& c, double lo, double hi) {
    const double len = c.base.length();
    const double t0 = (lo - c.base.lo) / len;
    const double t1 = (hi - c.base.lo) / len;
    double a1 = cantor_integral(std::max(t1, 0.0), c.lambda, 56);
    double a0 = cantor_integral(std::max(t0, 0.0), c.lambda, 56);
    return c.rise * len * (a1 - a0);
}

}  // namespace

// ---------------------------------------------------------------------------
// JumpRegion
// ---------------------------------------------------------------------------

double JumpRegion::perimeter() const {
    if (std::holds_alternative<DiskRegion>(shape)) {
        return 2.0 * M_PI * std::get<DiskRegion>(shape).radius;
    }
    return polygon_perimeter(std::get<Polygon>(shape));
}

bool JumpRegion::contains(Vec2 p) const {
    if (std::holds_alternative<DiskRegion>(shape)) {
        const DiskRegion& d = std::get<DiskRegion>(shape);
        return (p - d.center).norm() <= d.radius;
    }
    return point_in_convex(std::get<Polygon>(shape), p);
}

// ---------------------------------------------------------------------------
// Construction and validation
// ---------------------------------------------------------------------------

FunctionModel FunctionModel::analytic(Domain domain, std::vector<SmoothPiece> pieces,
                                      std::vector<Jump> jumps,
                                      std::vector<CantorComponent> cantors) {
    if (domain.dim != 1) throw ModelError("analytic models are 1D");
    FunctionModel m;
    m.domain_ = domain;
    m.kind_ = ModelKind::analytic;

    if (pieces.empty()) {
        pieces.push_back({domain.x, Poly{}});
    }
    std::sort(pieces.begin(), pieces.end(),
              [](const SmoothPiece& a, const SmoothPiece& b) { return a.iv.lo < b.iv.lo; });
    const double span = domain.x.length();
    if (std::fabs(pieces.front().iv.lo - domain.x.lo) > 1e-9 * span ||
        std::fabs(pieces.back().iv.hi - domain.x.hi) > 1e-9 * span)
        throw ModelError("pieces must tile the domain");
    for (size_t i = 0; i < pieces.size(); ++i) {
        if (!(pieces[i].iv.hi > pieces[i].iv.lo))
            throw ModelError("piece with nonpositive length");
        if (pieces[i].poly.degree() > 3)
            throw ModelError("piece degree exceeds 3");
        if (i + 1 < pieces.size()) {
            if (std::fabs(pieces[i].iv.hi - pieces[i + 1].iv.lo) > 1e-9 * span)
                throw ModelError("pieces must tile the domain without gaps");
            const double b = pieces[i].iv.hi;
            const double lv = pieces[i].poly(b);
            const double rv = pieces[i + 1].poly(b);
            const double scale = std::max({1.0, std::fabs(lv), std::fabs(rv)});
            if (std::fabs(lv - rv) > 1e-9 * scale)
                throw ModelError("discontinuous pieces: declare a jump instead");
            pieces[i + 1].iv.lo = pieces[i].iv.hi;  // snap
        }
    }
    pieces.front().iv.lo = domain.x.lo;
    pieces.back().iv.hi = domain.x.hi;

    std::sort(jumps.begin(), jumps.end(),
              [](const Jump& a, const Jump& b) { return a.x < b.x; });
    for (size_t i = 0; i < jumps.size(); ++i) {
        if (jumps[i].height() == 0.0) throw ModelError("zero-height jump");
        if (!domain.x.contains(jumps[i].x))
            throw ModelError("jump location outside the domain interior");
        if (i > 0 && !(jumps[i].x > jumps[i - 1].x))
            throw ModelError("jump locations must be strictly increasing");
    }

    for (const CantorComponent& c : cantors) {
        if (!(c.base.hi > c.base.lo)) throw ModelError("cantor base with nonpositive length");
        if (c.rise == 0.0) throw ModelError("cantor component with zero rise");
        if (!(c.lambda > 0.0 && c.lambda < 1.0))
            throw ModelError("cantor dissection ratio must lie in (0,1)");
        if (c.depth < 1 || c.depth > 60) throw ModelError("cantor depth cap out of range");
        if (c.base.lo < domain.x.lo - 1e-12 * span || c.base.hi > domain.x.hi + 1e-12 * span)
            throw ModelError("cantor base outside the domain");
    }

    m.data_.pieces = std::move(pieces);
    m.data_.jumps = std::move(jumps);
    m.data_.cantors = std::move(cantors);

    double acc = 0.0;
    for (const Jump& j : m.data_.jumps) {
        m.data_.jump_x.push_back(j.x);
        m.data_.jump_prefix.push_back(acc);
        acc += j.height();
    }
    m.data_.jump_prefix.push_back(acc);

    std::vector<double>& bk = m.data_.breakpoints;
    for (const SmoothPiece& p : m.data_.pieces) {
        bk.push_back(p.iv.lo);
        bk.push_back(p.iv.hi);
    }
    for (const Jump& j : m.data_.jumps) bk.push_back(j.x);
    for (const CantorComponent& c : m.data_.cantors) {
        bk.push_back(c.base.lo);
        bk.push_back(c.base.hi);
    }
    append_unique_sorted(bk);
    return m;
}

FunctionModel FunctionModel::plane(Domain domain, double a0, Vec2 grad,
                                   std::vector<JumpRegion> regions) {
    if (domain.dim != 2) throw ModelError("plane models are 2D");
    for (JumpRegion& r : regions) {
        if (r.height() == 0.0) throw ModelError("zero-height jump region");
        if (std::holds_alternative<DiskRegion>(r.shape)) {
            const DiskRegion& d = std::get<DiskRegion>(r.shape);
            if (!(d.radius > 0.0)) throw ModelError("disk region needs positive radius");
            if (d.center.x - d.radius < domain.x.lo || d.center.x + d.radius > domain.x.hi ||
                d.center.y - d.radius < domain.y.lo || d.center.y + d.radius > domain.y.hi)
                throw ModelError("disk region must lie inside the domain");
        } else {
            Polygon& poly = std::get<Polygon>(r.shape);
            if (poly.size() < 3) throw ModelError("polygon region needs >= 3 vertices");
            if (polygon_area(poly) < 0.0) std::reverse(poly.begin(), poly.end());
            const size_t n = poly.size();
            for (size_t i = 0; i < n; ++i) {
                Vec2 e1 = poly[(i + 1) % n] - poly[i];
                Vec2 e2 = poly[(i + 2) % n] - poly[(i + 1) % n];
                if (e1.cross(e2) < -1e-12) throw ModelError("polygon region must be convex");
                if (!domain.x.contains_closed(poly[i].x) || !domain.y.contains_closed(poly[i].y))
                    throw ModelError("polygon region must lie inside the domain");
            }
        }
    }
    FunctionModel m;
    m.domain_ = domain;
    m.kind_ = ModelKind::analytic;
    m.plane_ = PlaneData{a0, grad, std::move(regions)};
    return m;
}

FunctionModel FunctionModel::from_samples(const std::vector<std::pair<double, double>>& rows) {
    if (rows.size() < 2) throw ModelError("sample ingestion needs at least 2 rows");
    for (size_t i = 1; i < rows.size(); ++i)
        if (!(rows[i].first > rows[i - 1].first))
            throw ModelError("sample x values must be strictly increasing");
    std::vector<SmoothPiece> pieces;
    pieces.reserve(rows.size() - 1);
    for (size_t i = 0; i + 1 < rows.size(); ++i) {
        const auto [x0, v0] = rows[i];
        const auto [x1, v1] = rows[i + 1];
        const double slope = (v1 - v0) / (x1 - x0);
        Poly p;
        p.c[0] = v0 - slope * x0;
        p.c[1] = slope;
        p.n = 2;
        p.trim();
        pieces.push_back({{x0, x1}, p});
    }
    FunctionModel m = analytic(Domain::interval(rows.front().first, rows.back().first),
                               std::move(pieces), {}, {});
    m.kind_ = ModelKind::sampled;
    return m;
}

FunctionModel FunctionModel::interpolant_of(const FunctionModel& f, int generation) {
    if (f.dim() != 1 || f.kind() == ModelKind::mollified)
        throw ModelError("interpolant wrapper needs a 1D analytic-core model");
    if (generation < 0 || generation > 14)
        throw ModelError("interpolant generation out of range");
    // materialize: each cantor component becomes its generation-k
    // piecewise-linear staircase merged into the piece tiling
    std::vector<double> cuts;
    for (const SmoothPiece& p : f.data_.pieces) {
        cuts.push_back(p.iv.lo);
        cuts.push_back(p.iv.hi);
    }
    struct Seg {
        double x0, x1, v0, v1;  // linear graph piece of one component
    };
    std::vector<std::vector<Seg>> comp_segs;
    for (const CantorComponent& c : f.data_.cantors) {
        std::vector<double> knots, values;
        cantor_interpolant_knots(c.lambda, generation, knots, values);
        std::vector<Seg> segs;
        for (size_t i = 0; i + 1 < knots.size(); ++i) {
            double x0 = c.base.lo + knots[i] * c.base.length();
            double x1 = c.base.lo + knots[i + 1] * c.base.length();
            segs.push_back({x0, x1, c.rise * values[i], c.rise * values[i + 1]});
            cuts.push_back(x0);
            cuts.push_back(x1);
        }
        comp_segs.push_back(std::move(segs));
    }
    append_unique_sorted(cuts);

    std::vector<SmoothPiece> pieces;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double x0 = cuts[i], x1 = cuts[i + 1];
        double xm = 0.5 * (x0 + x1);
        Poly poly;
        for (const SmoothPiece& p : f.data_.pieces)
            if (p.iv.lo <= xm && xm <= p.iv.hi) {
                poly = p.poly;
                break;
            }
        for (size_t ci = 0; ci < comp_segs.size(); ++ci) {
            const CantorComponent& c = f.data_.cantors[ci];
            if (xm <= c.base.lo) continue;
            if (xm >= c.base.hi) {
                Poly k = Poly::constant(c.rise);
                poly += k;
                continue;
            }
            for (const Seg& s : comp_segs[ci]) {
                if (s.x0 <= xm && xm <= s.x1) {
                    double slope = (s.v1 - s.v0) / (s.x1 - s.x0);
                    Poly lin;
                    lin.c[0] = s.v0 - slope * s.x0;
                    lin.c[1] = slope;
                    lin.n = 2;
                    lin.trim();
                    poly += lin;
                    break;
                }
            }
        }
        pieces.push_back({{x0, x1}, poly});
    }
    FunctionModel m = analytic(f.domain_, std::move(pieces), f.data_.jumps, {});
    m.kind_ = ModelKind::interpolant;
    m.generation_ = generation;
    return m;
}

FunctionModel FunctionModel::mollified_of(FunctionModel f, double delta) {
    if (f.dim() != 1) throw ModelError("mollification is implemented for 1D models");
    if (f.kind() == ModelKind::mollified) throw ModelError("nested mollification unsupported");
    if (!(delta > 0.0)) throw ModelError("mollifier radius must be positive");
    if (delta >= 0.25 * f.domain().x.length())
        throw ModelError("mollifier radius too large for the domain");
    FunctionModel m;
    m.domain_ = f.domain_;
    m.kind_ = ModelKind::mollified;
    m.delta_ = delta;
    m.inner_ = std::make_shared<FunctionModel>(std::move(f));
    return m;
}

const AnalyticData& FunctionModel::analytic_data() const {
    if (!has_analytic_core()) throw ModelError("model has no analytic core");
    return data_;
}

const PlaneData& FunctionModel::plane_data() const {
    if (!plane_) throw ModelError("not a 2D model");
    return *plane_;
}

const FunctionModel& FunctionModel::inner() const {
    if (!inner_) throw ModelError("not a wrapped model");
    return *inner_;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

double FunctionModel::eval_analytic(double x) const {
    // pieces: rightward lookup, callers handle boundaries via one-sided wrappers
    double v = 0.0;
    const auto& pieces = data_.pieces;
    size_t lo = 0, hi = pieces.size();
    while (lo + 1 < hi) {
        size_t mid = (lo + hi) / 2;
        if (pieces[mid].iv.lo <= x)
            lo = mid;
        else
            hi = mid;
    }
    v += pieces[lo].poly(x);
    // steps
    const auto& jx = data_.jump_x;
    size_t cnt = std::upper_bound(jx.begin(), jx.end(), x) - jx.begin();
    v += data_.jump_prefix[cnt];
    // cantor components
    for (const CantorComponent& c : data_.cantors) {
        if (x <= c.base.lo) continue;
        if (x >= c.base.hi) {
            v += c.rise;
            continue;
        }
        v += cantor_contribution(c, x);
    }
    return v;
}

double FunctionModel::eval_mollified(double x) const {
    const FunctionModel& g = *inner_;
    const double d = delta_;
    const Interval dom = g.domain().x;
    // clamped inner evaluation (constant extension outside the domain)
    auto inner_right = [&](double z) {
        if (z <= dom.lo) return g.eval_right(dom.lo);
        if (z >= dom.hi) return g.eval_left(dom.hi);
        return g.eval_right(z);
    };

    std::vector<double> zcuts{x - d, x + d, dom.lo, dom.hi};
    for (double b : g.analytic_data().breakpoints)
        if (b > x - d && b < x + d) zcuts.push_back(b);
    append_unique_sorted(zcuts);

    double acc = 0.0;
    for (size_t i = 0; i + 1 < zcuts.size(); ++i) {
        double z0 = zcuts[i], z1 = zcuts[i + 1];
        if (z1 <= x - d || z0 >= x + d) continue;
        // f_delta(x) = int rho_delta(x - z) ftilde(z) dz over this z-cell.
        // u = (x - z)/d runs over [u1, u2]:
        double u1 = (x - z1) / d, u2 = (x - z0) / d;
        const double zm = 0.5 * (z0 + z1);
        if (zm > dom.lo && zm < dom.hi) {
            // polynomial + step part, closed form
            const auto& pieces = g.analytic_data().pieces;
            Poly piece;
            for (const SmoothPiece& p : pieces)
                if (p.iv.lo <= zm && zm <= p.iv.hi) {
                    piece = p.poly;
                    break;
                }
            const auto& jx = g.analytic_data().jump_x;
            size_t cnt = std::upper_bound(jx.begin(), jx.end(), zm) - jx.begin();
            double step = g.analytic_data().jump_prefix[cnt];
            // z = x - d*u: compose
            Poly in_u = piece.shifted(x).scaled_arg(-d);
            in_u += Poly::constant(step);
            Poly rho{15.0 / 16.0, 0.0, -30.0 / 16.0, 0.0, 15.0 / 16.0};
            acc += Poly::mul(rho, in_u).integrate(u1, u2);
            // cantor contributions on this cell
            for (const CantorComponent& c : g.analytic_data().cantors) {
                if (z1 <= c.base.lo) continue;
                if (z0 >= c.base.hi) {
                    acc += c.rise * (mollifier_kernel_cdf(u2) - mollifier_kernel_cdf(u1));
                    continue;
                }
                if (cantor_constant_on(cantor_t(c, z0), cantor_t(c, z1), c.lambda, c.depth)) {
                    double val = cantor_contribution(c, zm);
                    acc += val * (mollifier_kernel_cdf(u2) - mollifier_kernel_cdf(u1));
                } else {
                    acc += adaptive_simpson(
                        [&](double u) {
                            return mollifier_kernel(u) * cantor_contribution(c, x - d * u);
                        },
                        u1, u2, 1e-12, 40);
                }
            }
        } else {
            // constant extension outside the domain
            double val = inner_right(0.5 * (z0 + z1));
            acc += val * (mollifier_kernel_cdf(u2) - mollifier_kernel_cdf(u1));
        }
    }
    return acc;
}

double FunctionModel::evaluate(double x) const {
    if (dim() != 1) throw ModelError("scalar evaluation on a 2D model");
    if (!domain_.x.contains(x)) throw ModelError("point outside domain");
    if (kind_ == ModelKind::mollified) return eval_mollified(x);
    const auto& jx = data_.jump_x;
    auto it = std::lower_bound(jx.begin(), jx.end(), x);
    if (it != jx.end() && *it == x) throw ModelError("undefined at jump");
    return eval_analytic(x);
}

double FunctionModel::evaluate(Vec2 p) const {
    if (dim() != 2) throw ModelError("2D evaluation on a 1D model");
    if (!domain_.contains(p)) throw ModelError("point outside domain");
    const PlaneData& pd = *plane_;
    double v = pd.a0 + pd.grad.dot(p);
    for (const JumpRegion& r : pd.regions)
        v += r.outside + (r.contains(p) ? r.height() : 0.0);
    return v;
}

double FunctionModel::eval_right(double x) const {
    if (kind_ == ModelKind::mollified) return eval_mollified(x);  // continuous
    double v = 0.0;
    const auto& pieces = data_.pieces;
    size_t lo = 0, hi = pieces.size();
    while (lo + 1 < hi) {
        size_t mid = (lo + hi) / 2;
        if (pieces[mid].iv.lo <= x)
            lo = mid;
        else
            hi = mid;
    }
    if (x >= pieces[lo].iv.hi && lo + 1 < pieces.size()) ++lo;
    v += pieces[lo].poly(x);
    const auto& jx = data_.jump_x;
    size_t cnt = std::upper_bound(jx.begin(), jx.end(), x) - jx.begin();
    v += data_.jump_prefix[cnt];
    for (const CantorComponent& c : data_.cantors) {
        if (x <= c.base.lo) continue;
        if (x >= c.base.hi) {
            v += c.rise;
            continue;
        }
        v += cantor_contribution(c, x);
    }
    return v;
}

double FunctionModel::eval_left(double x) const {
    if (kind_ == ModelKind::mollified) return eval_mollified(x);
    double v = 0.0;
    const auto& pieces = data_.pieces;
    size_t lo = 0, hi = pieces.size();
    while (lo + 1 < hi) {
        size_t mid = (lo + hi) / 2;
        if (pieces[mid].iv.lo < x)
            lo = mid;
        else
            hi = mid;
    }
    v += pieces[lo].poly(x);
    const auto& jx = data_.jump_x;
    size_t cnt = std::lower_bound(jx.begin(), jx.end(), x) - jx.begin();
    v += data_.jump_prefix[cnt];
    for (const CantorComponent& c : data_.cantors) {
        if (x <= c.base.lo) continue;
        if (x >= c.base.hi) {
            v += c.rise;
            continue;
        }
        v += cantor_contribution(c, x);
    }
    return v;
}

// ---------------------------------------------------------------------------
// Structure queries
// ---------------------------------------------------------------------------

const std::vector<double>& FunctionModel::jump_locations() const {
    if (kind_ == ModelKind::mollified) return inner_->jump_locations();
    return data_.jump_x;
}

void FunctionModel::breakpoints_in(double lo, double hi, std::vector<double>& out) const {
    if (kind_ == ModelKind::mollified) {
        const auto& bk = inner_->analytic_data().breakpoints;
        for (double b : bk) {
            for (double s : {b - delta_, b + delta_})
                if (s > lo + kTieEps && s < hi - kTieEps) out.push_back(s);
        }
        append_unique_sorted(out);
        return;
    }
    const auto& bk = data_.breakpoints;
    auto it = std::upper_bound(bk.begin(), bk.end(), lo + kTieEps);
    for (; it != bk.end() && *it < hi - kTieEps; ++it) out.push_back(*it);
}

void FunctionModel::monotone_split_points(double lo, double hi,
                                          std::vector<double>& out) const {
    if (kind_ == ModelKind::mollified) return;  // mixed windows handled adaptively
    for (const SmoothPiece& p : data_.pieces) {
        double a = std::max(lo, p.iv.lo), b = std::min(hi, p.iv.hi);
        if (!(b > a)) continue;
        Poly d = p.poly.derivative();
        if (d.n >= 2) {
            quadratic_roots_in(d.n >= 3 ? d.c[2] : 0.0, d.n >= 2 ? d.c[1] : 0.0, d.c[0], a, b,
                               out);
        }
    }
    append_unique_sorted(out);
}

MonotoneClass FunctionModel::derivative_class_on(double lo, double hi) const {
    if (kind_ == ModelKind::mollified) {
        const Interval dom = inner_->domain().x;
        double a = std::max(lo - delta_, dom.lo);
        double b = std::min(hi + delta_, dom.hi);
        if (!(b > a)) return MonotoneClass::zero;
        return inner_->derivative_class_on(a, b);
    }
    MonotoneClass cls = MonotoneClass::zero;
    for (const SmoothPiece& p : data_.pieces) {
        double a = std::max(lo, p.iv.lo), b = std::min(hi, p.iv.hi);
        if (!(b > a)) continue;
        Poly d = p.poly.derivative();
        if (d.n == 0) continue;
        std::vector<double> roots;
        quadratic_roots_in(d.n >= 3 ? d.c[2] : 0.0, d.n >= 2 ? d.c[1] : 0.0, d.c[0], a, b,
                           roots);
        std::vector<double> probes;
        double prev = a;
        for (double r : roots) {
            probes.push_back(0.5 * (prev + r));
            prev = r;
        }
        probes.push_back(0.5 * (prev + b));
        for (double t : probes) {
            double dv = d(t);
            if (dv > 0.0)
                cls = combine(cls, MonotoneClass::nonneg);
            else if (dv < 0.0)
                cls = combine(cls, MonotoneClass::nonpos);
            if (cls == MonotoneClass::mixed) return cls;
        }
    }
    for (const Jump& j : data_.jumps) {
        if (j.x > lo && j.x < hi) {
            cls = combine(cls, j.height() > 0.0 ? MonotoneClass::nonneg : MonotoneClass::nonpos);
            if (cls == MonotoneClass::mixed) return cls;
        }
    }
    for (const CantorComponent& c : data_.cantors) {
        double a = std::max(lo, c.base.lo), b = std::min(hi, c.base.hi);
        if (!(b > a)) continue;
        if (cantor_constant_on(cantor_t(c, a), cantor_t(c, b), c.lambda, c.depth)) continue;
        cls = combine(cls, c.rise > 0.0 ? MonotoneClass::nonneg : MonotoneClass::nonpos);
        if (cls == MonotoneClass::mixed) return cls;
    }
    return cls;
}

double FunctionModel::integral_on(double lo, double hi) const {
    if (!(hi > lo)) return 0.0;
    if (kind_ == ModelKind::mollified) {
        // Fubini: int_lo^hi (rho_d * ftilde) = int ftilde(z) W(z) dz with
        // W(z) = P((hi-z)/d) - P((lo-z)/d); exact on polynomial/step cells.
        const FunctionModel& g = *inner_;
        const double d = delta_;
        const Interval dom = g.domain().x;
        std::vector<double> zcuts{lo - d, lo + d, hi - d, hi + d, dom.lo, dom.hi};
        for (double b : g.analytic_data().breakpoints)
            if (b > lo - d && b < hi + d) zcuts.push_back(b);
        append_unique_sorted(zcuts);
        double acc = 0.0;
        // P(s) = 1/2 + (15/16)(s - 2/3 s^3 + 1/5 s^5)
        Poly P{0.5, 15.0 / 16.0, 0.0, -15.0 / 24.0, 0.0, 3.0 / 16.0};
        auto weight_poly = [&](double edge) {
            // P((edge - z)/d) as polynomial in z
            Poly s;  // s(z) = (edge - z)/d
            s.c[0] = edge / d;
            s.c[1] = -1.0 / d;
            s.n = 2;
            // compose P(s(z)) via repeated multiplication (deg 5)
            Poly res = Poly::constant(P.c[P.n - 1]);
            for (int i = P.n - 2; i >= 0; --i) {
                res = Poly::mul(res, s);
                res += Poly::constant(P.c[i]);
            }
            return res;
        };
        auto weight_at = [&](double z) {
            double shi = (hi - z) / d;
            double slo = (lo - z) / d;
            return mollifier_kernel_cdf(shi) - mollifier_kernel_cdf(slo);
        };
        for (size_t i = 0; i + 1 < zcuts.size(); ++i) {
            double z0 = zcuts[i], z1 = zcuts[i + 1];
            if (z1 <= lo - d || z0 >= hi + d) continue;
            double zm = 0.5 * (z0 + z1);
            // W as polynomial on this cell (each CDF is a fixed branch here)
            bool hi_inside = (hi - zm) / d > -1.0 && (hi - zm) / d < 1.0;
            bool lo_inside = (lo - zm) / d > -1.0 && (lo - zm) / d < 1.0;
            Poly W;
            if (hi_inside) W += weight_poly(hi);
            else W += Poly::constant(mollifier_kernel_cdf((hi - zm) / d));
            if (lo_inside) W += weight_poly(lo) * -1.0;
            else W += Poly::constant(-mollifier_kernel_cdf((lo - zm) / d));

            if (zm <= dom.lo || zm >= dom.hi) {
                double val = zm <= dom.lo ? g.eval_right(dom.lo) : g.eval_left(dom.hi);
                acc += val * W.integrate(z0, z1);
                continue;
            }
            const auto& pieces = g.analytic_data().pieces;
            Poly piece;
            for (const SmoothPiece& p : pieces)
                if (p.iv.lo <= zm && zm <= p.iv.hi) {
                    piece = p.poly;
                    break;
                }
            const auto& jx = g.analytic_data().jump_x;
            size_t cnt = std::upper_bound(jx.begin(), jx.end(), zm) - jx.begin();
            piece += Poly::constant(g.analytic_data().jump_prefix[cnt]);
            acc += Poly::mul(piece, W).integrate(z0, z1);
            for (const CantorComponent& c : g.analytic_data().cantors) {
                if (z1 <= c.base.lo) continue;
                if (z0 >= c.base.hi) {
                    acc += c.rise * W.integrate(z0, z1);
                    continue;
                }
                if (cantor_constant_on(cantor_t(c, z0), cantor_t(c, z1), c.lambda, c.depth)) {
                    acc += cantor_contribution(c, zm) * W.integrate(z0, z1);
                } else {
                    acc += adaptive_simpson(
                        [&](double z) { return cantor_contribution(c, z) * weight_at(z); },
                        z0, z1, 1e-12, 40);
                }
            }
        }
        return acc;
    }

    double acc = 0.0;
    for (const SmoothPiece& p : data_.pieces) {
        double a = std::max(lo, p.iv.lo), b = std::min(hi, p.iv.hi);
        if (b > a) acc += p.poly.integrate(a, b);
    }
    for (size_t i = 0; i < data_.jumps.size(); ++i) {
        const Jump& j = data_.jumps[i];
        if (j.x < hi) acc += j.height() * (hi - std::max(j.x, lo));
    }
    for (const CantorComponent& c : data_.cantors) {
        if (hi <= c.base.lo) continue;
        acc += cantor_contribution_integral(c, std::max(lo, c.base.lo), hi);
        if (lo < c.base.lo) {
            // contribution is 0 left of the base; nothing to add
        }
    }
    return acc;
}

double FunctionModel::variation_on(double lo, double hi) const {
    if (!(hi > lo)) return 0.0;
    if (kind_ == ModelKind::mollified) {
        const Interval dom = inner_->domain().x;
        double a = std::max(lo - delta_, dom.lo);
        double b = std::min(hi + delta_, dom.hi);
        if (!(b > a)) return 0.0;
        return inner_->variation_on(a, b);
    }
    double acc = 0.0;
    for (const SmoothPiece& p : data_.pieces) {
        double a = std::max(lo, p.iv.lo), b = std::min(hi, p.iv.hi);
        if (!(b > a)) continue;
        Poly d = p.poly.derivative();
        if (d.n == 0) continue;
        std::vector<double> knots{a};
        quadratic_roots_in(d.n >= 3 ? d.c[2] : 0.0, d.n >= 2 ? d.c[1] : 0.0, d.c[0], a, b,
                           knots);
        knots.push_back(b);
        std::sort(knots.begin(), knots.end());
        for (size_t i = 0; i + 1 < knots.size(); ++i)
            acc += std::fabs(p.poly(knots[i + 1]) - p.poly(knots[i]));
    }
    for (const Jump& j : data_.jumps)
        if (j.x > lo && j.x < hi) acc += std::fabs(j.height());
    for (const CantorComponent& c : data_.cantors) {
        double t0 = std::clamp(cantor_t(c, lo), 0.0, 1.0);
        double t1 = std::clamp(cantor_t(c, hi), 0.0, 1.0);
        if (t1 > t0)
            acc += std::fabs(c.rise) *
                   (cantor_value(t1, c.lambda, c.depth) - cantor_value(t0, c.lambda, c.depth));
    }
    return acc;
}

void FunctionModel::feature_points(double eps, std::vector<double>& out) const {
    if (kind_ == ModelKind::mollified) {
        inner_->feature_points(eps, out);
        return;
    }
    for (double x : data_.jump_x) out.push_back(x);
    for (const CantorComponent& c : data_.cantors) {
        std::vector<double> centers;
        double min_gap = 0.25 * eps / c.base.length();
        cantor_gap_centers(c.lambda, 12, min_gap, centers);
        if (centers.size() > 4096) centers.resize(4096);
        for (double t : centers) out.push_back(c.base.lo + t * c.base.length());
    }
    append_unique_sorted(out);
}

// ---------------------------------------------------------------------------
// Transforms
// ---------------------------------------------------------------------------

FunctionModel FunctionModel::translated(double s) const {
    if (!has_analytic_core()) throw ModelError("translate needs an analytic-core model");
    std::vector<SmoothPiece> pieces;
    for (const SmoothPiece& p : data_.pieces)
        pieces.push_back({{p.iv.lo + s, p.iv.hi + s}, p.poly.shifted(-s)});
    std::vector<Jump> jumps;
    for (const Jump& j : data_.jumps) jumps.push_back({j.x + s, j.left, j.right});
    std::vector<CantorComponent> cantors;
    for (const CantorComponent& c : data_.cantors)
        cantors.push_back({{c.base.lo + s, c.base.hi + s}, c.rise, c.lambda, c.depth});
    FunctionModel m = analytic(Domain::interval(domain_.x.lo + s, domain_.x.hi + s),
                               std::move(pieces), std::move(jumps), std::move(cantors));
    m.kind_ = kind_;
    m.generation_ = generation_;
    return m;
}

FunctionModel FunctionModel::scaled(double alpha) const {
    if (!has_analytic_core()) throw ModelError("scale needs an analytic-core model");
    if (alpha == 0.0) {
        return analytic(domain_, {}, {}, {});
    }
    std::vector<SmoothPiece> pieces;
    for (const SmoothPiece& p : data_.pieces) pieces.push_back({p.iv, p.poly * alpha});
    std::vector<Jump> jumps;
    for (const Jump& j : data_.jumps) jumps.push_back({j.x, alpha * j.left, alpha * j.right});
    std::vector<CantorComponent> cantors;
    for (const CantorComponent& c : data_.cantors)
        cantors.push_back({c.base, alpha * c.rise, c.lambda, c.depth});
    FunctionModel m = analytic(domain_, std::move(pieces), std::move(jumps), std::move(cantors));
    m.kind_ = kind_;
    m.generation_ = generation_;
    return m;
}

// ---------------------------------------------------------------------------
// Measurements
// ---------------------------------------------------------------------------

TVDecomposition FunctionModel::tv_decomposition() const {
    TVDecomposition d;
    if (dim() == 2) {
        const PlaneData& pd = *plane_;
        d.abs_cont = pd.grad.norm() * domain_.measure();
        for (const JumpRegion& r : pd.regions)
            d.jump += std::fabs(r.height()) * r.perimeter();
        d.cantor = 0.0;
        d.total = d.abs_cont + d.jump + d.cantor;
        return d;
    }
    if (kind_ == ModelKind::mollified)
        throw ModelError("tv_decomposition is not defined for mollified models; use smooth_tv");
    for (const SmoothPiece& p : data_.pieces) {
        Poly der = p.poly.derivative();
        if (der.n == 0) continue;
        std::vector<double> knots{p.iv.lo};
        quadratic_roots_in(der.n >= 3 ? der.c[2] : 0.0, der.n >= 2 ? der.c[1] : 0.0, der.c[0],
                           p.iv.lo, p.iv.hi, knots);
        knots.push_back(p.iv.hi);
        std::sort(knots.begin(), knots.end());
        for (size_t i = 0; i + 1 < knots.size(); ++i)
            d.abs_cont += std::fabs(p.poly(knots[i + 1]) - p.poly(knots[i]));
    }
    for (const Jump& j : data_.jumps) d.jump += std::fabs(j.height());
    for (const CantorComponent& c : data_.cantors) d.cantor += std::fabs(c.rise);
    d.total = d.abs_cont + d.jump + d.cantor;
    return d;
}

double evaluate(const FunctionModel& f, double x) { return f.evaluate(x); }

TVDecomposition tv_decomposition(const FunctionModel& f) { return f.tv_decomposition(); }

FunctionModel ingest_samples(const std::vector<std::pair<double, double>>& rows) {
    return FunctionModel::from_samples(rows);
}

double mean_value(const FunctionModel& f, Interval D, double tol) {
    if (f.dim() != 1) throw ModelError("mean_value over intervals needs a 1D model");
    if (!(D.hi > D.lo)) throw ModelError("zero-measure region");
    if (D.lo < f.domain().x.lo - 1e-12 || D.hi > f.domain().x.hi + 1e-12)
        throw ModelError("region outside domain");
    (void)tol;  // integral_on is exact to recursion depth for in-scope models
    return f.integral_on(D.lo, D.hi) / D.length();
}

double smooth_tv(const FunctionModel& f, double tol) {
    if (f.dim() != 1) throw ModelError("smooth_tv needs a 1D model");
    const Interval dom = f.domain().x;
    std::vector<double> grid{dom.lo, dom.hi};
    f.breakpoints_in(dom.lo, dom.hi, grid);
    append_unique_sorted(grid);
    auto tv_at = [&](int refine) {
        double acc = 0.0;
        for (size_t i = 0; i + 1 < grid.size(); ++i) {
            double a = grid[i], b = grid[i + 1];
            double prev = f.eval_right(a);
            for (int k = 1; k <= refine; ++k) {
                double x = a + (b - a) * k / double(refine + 1);
                double v = f.eval_right(x);
                acc += std::fabs(v - prev);
                prev = v;
            }
            acc += std::fabs(f.eval_left(b) - prev);
        }
        // jumps between cells
        for (size_t i = 1; i + 1 < grid.size(); ++i)
            acc += std::fabs(f.eval_right(grid[i]) - f.eval_left(grid[i]));
        return acc;
    };
    int refine = 64;
    double prev = tv_at(refine);
    for (int it = 0; it < 6; ++it) {
        refine *= 2;
        double cur = tv_at(refine);
        if (cur - prev <= tol) return cur;
        prev = cur;
    }
    return prev;
}

double coarea_tv(const FunctionModel& f, int t_samples) {
    if (f.dim() != 1) throw ModelError("coarea_tv needs a 1D model");
    if (t_samples < 16) throw ModelError("coarea_tv needs at least 16 level samples");
    const Interval dom = f.domain().x;

    const bool exact_path = f.kind() != ModelKind::mollified &&
                            f.analytic_data().cantors.empty();

    struct Segment {
        double vlo, vhi;  // value range of a monotone stretch / jump
    };
    std::vector<Segment> segs;
    double vmin = std::numeric_limits<double>::infinity();
    double vmax = -vmin;
    auto note = [&](double a, double b) {
        segs.push_back({std::min(a, b), std::max(a, b)});
        vmin = std::min({vmin, a, b});
        vmax = std::max({vmax, a, b});
    };

    if (exact_path) {
        std::vector<double> knots{dom.lo, dom.hi};
        f.breakpoints_in(dom.lo, dom.hi, knots);
        f.monotone_split_points(dom.lo, dom.hi, knots);
        append_unique_sorted(knots);
        for (size_t i = 0; i + 1 < knots.size(); ++i)
            note(f.eval_right(knots[i]), f.eval_left(knots[i + 1]));
        for (double xj : f.jump_locations()) note(f.eval_left(xj), f.eval_right(xj));
    } else {
        std::vector<double> knots{dom.lo, dom.hi};
        f.breakpoints_in(dom.lo, dom.hi, knots);
        f.monotone_split_points(dom.lo, dom.hi, knots);
        append_unique_sorted(knots);
        const int cells_per_unit = 8192;
        for (size_t i = 0; i + 1 < knots.size(); ++i) {
            double a = knots[i], b = knots[i + 1];
            int cells = std::max(1, int((b - a) / dom.length() * cells_per_unit));
            double prev = f.eval_right(a);
            for (int k = 1; k <= cells; ++k) {
                double x = (k == cells) ? b : a + (b - a) * k / double(cells);
                double v = (k == cells) ? f.eval_left(b) : f.eval_right(x);
                note(prev, v);
                prev = v;
            }
        }
        for (double xj : f.jump_locations()) note(f.eval_left(xj), f.eval_right(xj));
    }

    if (!(vmax > vmin)) return 0.0;
    const double dt = (vmax - vmin) / t_samples;
    long long crossings = 0;
    for (int i = 0; i < t_samples; ++i) {
        const double t = vmin + (i + 0.5) * dt;
        for (const Segment& s : segs)
            if (s.vlo <= t && t < s.vhi) ++crossings;
    }
    return crossings * dt;
}

FunctionModel linear_combination(double alpha, const FunctionModel& f, double beta,
                                 const FunctionModel& g) {
    if (f.dim() != 1 || g.dim() != 1)
        throw ModelError("linear_combination needs 1D models");
    const AnalyticData& df = f.analytic_data();
    const AnalyticData& dg = g.analytic_data();
    if (std::fabs(f.domain().x.lo - g.domain().x.lo) > kTieEps ||
        std::fabs(f.domain().x.hi - g.domain().x.hi) > kTieEps)
        throw ModelError("linear_combination needs matching domains");

    std::vector<double> cuts;
    for (const SmoothPiece& p : df.pieces) {
        cuts.push_back(p.iv.lo);
        cuts.push_back(p.iv.hi);
    }
    for (const SmoothPiece& p : dg.pieces) {
        cuts.push_back(p.iv.lo);
        cuts.push_back(p.iv.hi);
    }
    append_unique_sorted(cuts);
    std::vector<SmoothPiece> pieces;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double xm = 0.5 * (cuts[i] + cuts[i + 1]);
        Poly acc;
        for (const SmoothPiece& p : df.pieces)
            if (p.iv.lo <= xm && xm <= p.iv.hi) {
                acc += p.poly * alpha;
                break;
            }
        for (const SmoothPiece& p : dg.pieces)
            if (p.iv.lo <= xm && xm <= p.iv.hi) {
                acc += p.poly * beta;
                break;
            }
        pieces.push_back({{cuts[i], cuts[i + 1]}, acc});
    }

    std::vector<Jump> jumps;
    size_t i = 0, j = 0;
    while (i < df.jumps.size() || j < dg.jumps.size()) {
        bool take_f = j >= dg.jumps.size() ||
                      (i < df.jumps.size() && df.jumps[i].x < dg.jumps[j].x - kTieEps);
        bool take_g = i >= df.jumps.size() ||
                      (j < dg.jumps.size() && dg.jumps[j].x < df.jumps[i].x - kTieEps);
        if (take_f) {
            const Jump& a = df.jumps[i++];
            if (alpha * a.height() != 0.0)
                jumps.push_back({a.x, alpha * a.left, alpha * a.right});
        } else if (take_g) {
            const Jump& b = dg.jumps[j++];
            if (beta * b.height() != 0.0)
                jumps.push_back({b.x, beta * b.left, beta * b.right});
        } else {
            const Jump& a = df.jumps[i++];
            const Jump& b = dg.jumps[j++];
            double l = alpha * a.left + beta * b.left;
            double r = alpha * a.right + beta * b.right;
            if (r != l) jumps.push_back({a.x, l, r});
        }
    }

    std::vector<CantorComponent> cantors;
    for (const CantorComponent& c : df.cantors)
        if (alpha != 0.0) cantors.push_back({c.base, alpha * c.rise, c.lambda, c.depth});
    for (const CantorComponent& c : dg.cantors)
        if (beta != 0.0) cantors.push_back({c.base, beta * c.rise, c.lambda, c.depth});

    return FunctionModel::analytic(f.domain(), std::move(pieces), std::move(jumps),
                                   std::move(cantors));
}

double mollifier_kernel(double u) {
    if (u <= -1.0 || u >= 1.0) return 0.0;
    const double w = 1.0 - u * u;
    return 15.0 / 16.0 * w * w;
}

double mollifier_kernel_cdf(double u) {
    if (u <= -1.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return 0.5 + 15.0 / 16.0 * (u - 2.0 / 3.0 * u * u * u + 0.2 * u * u * u * u * u);
}

}  // namespace bmotv
