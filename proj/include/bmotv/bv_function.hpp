#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bmotv/cantor.hpp"
#include "bmotv/errors.hpp"
#include "bmotv/geometry.hpp"
#include "bmotv/poly.hpp"

namespace bmotv {

// ---------------------------------------------------------------------------
// 1D building blocks
// ---------------------------------------------------------------------------

// Polynomial piece in global coordinates; pieces tile the domain and must be
// continuous across shared boundaries (discontinuities belong in the jump
// list, otherwise the exact TV decomposition would silently be wrong).
struct SmoothPiece {
    Interval iv;
    Poly poly;  // degree <= 3 for user-facing models
};

struct Jump {
    double x = 0.0;
    double left = 0.0;
    double right = 0.0;
    double height() const { return right - left; }
};

// Middle-lambda staircase: contributes 0 left of the base, `rise` right of
// it, rise * phi((x-a)/(b-a)) inside. Generation-k approximation error is
// bounded by |rise| * 2^-k.
struct CantorComponent {
    Interval base;
    double rise = 1.0;
    double lambda = 1.0 / 3.0;
    int depth = 40;
};

struct TVDecomposition {
    double abs_cont = 0.0;
    double jump = 0.0;
    double cantor = 0.0;
    double total = 0.0;
};

// ---------------------------------------------------------------------------
// 2D model: one affine sheet plus characteristic-function jump regions
// ---------------------------------------------------------------------------

struct DiskRegion {
    Vec2 center;
    double radius = 0.0;
};

struct JumpRegion {
    std::variant<DiskRegion, Polygon> shape;
    double inside = 1.0;
    double outside = 0.0;
    double height() const { return inside - outside; }
    double perimeter() const;
    bool contains(Vec2 p) const;
};

struct PlaneData {
    double a0 = 0.0;
    Vec2 grad;
    std::vector<JumpRegion> regions;
};

// ---------------------------------------------------------------------------
// FunctionModel
// ---------------------------------------------------------------------------

enum class ModelKind { analytic, mollified, interpolant, sampled };

enum class MonotoneClass { zero, nonneg, nonpos, mixed };

struct AnalyticData {
    std::vector<SmoothPiece> pieces;  // sorted, tiling the domain
    std::vector<Jump> jumps;          // strictly increasing x
    std::vector<CantorComponent> cantors;

    // precomputed
    std::vector<double> jump_x;
    std::vector<double> jump_prefix;  // prefix sums of heights
    std::vector<double> breakpoints;  // piece bounds + jump x + cantor endpoints
};

class FunctionModel {
public:
    // --- constructors -------------------------------------------------------
    static FunctionModel analytic(Domain domain, std::vector<SmoothPiece> pieces,
                                  std::vector<Jump> jumps,
                                  std::vector<CantorComponent> cantors);
    static FunctionModel plane(Domain domain, double a0, Vec2 grad,
                               std::vector<JumpRegion> regions);
    static FunctionModel from_samples(const std::vector<std::pair<double, double>>& rows);
    static FunctionModel interpolant_of(const FunctionModel& f, int generation);
    static FunctionModel mollified_of(FunctionModel f, double delta);

    // --- basic queries ------------------------------------------------------
    int dim() const { return domain_.dim; }
    const Domain& domain() const { return domain_; }
    ModelKind kind() const { return kind_; }
    double mollifier_radius() const { return delta_; }
    int generation() const { return generation_; }
    const AnalyticData& analytic_data() const;
    const PlaneData& plane_data() const;
    const FunctionModel& inner() const;

    // --- evaluation ---------------------------------------------------------
    // Throws ModelError outside the domain or exactly at a jump location.
    double evaluate(double x) const;
    double evaluate(Vec2 p) const;  // 2D; region boundaries count as inside
    // One-sided limits; defined on the domain closure, never throw at jumps.
    double eval_left(double x) const;
    double eval_right(double x) const;

    // --- structure queries (1D) ---------------------------------------------
    const std::vector<double>& jump_locations() const;
    void breakpoints_in(double lo, double hi, std::vector<double>& out) const;
    // points inside (lo,hi) where the smooth part can change direction
    void monotone_split_points(double lo, double hi, std::vector<double>& out) const;
    MonotoneClass derivative_class_on(double lo, double hi) const;
    // exact integral of f over (lo, hi) (cantor parts to recursion depth)
    double integral_on(double lo, double hi) const;
    // upper bound for the pointwise variation of f on (lo, hi); exact for
    // analytic models, convolution-contraction bound for mollified ones
    double variation_on(double lo, double hi) const;
    // candidate-injection anchors: jump locations plus cantor gap centers
    void feature_points(double eps, std::vector<double>& out) const;

    // --- transforms (analytic-core models) -----------------------------------
    FunctionModel translated(double s) const;
    FunctionModel scaled(double alpha) const;

    // --- measurements --------------------------------------------------------
    TVDecomposition tv_decomposition() const;  // not defined for mollified

private:
    FunctionModel() = default;
    bool has_analytic_core() const { return kind_ != ModelKind::mollified && dim() == 1; }
    double eval_analytic(double x) const;
    double eval_mollified(double x) const;

    Domain domain_;
    ModelKind kind_ = ModelKind::analytic;
    AnalyticData data_;                            // 1D analytic-core models
    std::optional<PlaneData> plane_;               // 2D
    std::shared_ptr<const FunctionModel> inner_;   // mollified
    double delta_ = 0.0;
    int generation_ = 0;
};

// ---------------------------------------------------------------------------
// Module operations
// ---------------------------------------------------------------------------

double evaluate(const FunctionModel& f, double x);

// Mean of f over the subinterval D, within absolute error tol.
double mean_value(const FunctionModel& f, Interval D, double tol);

TVDecomposition tv_decomposition(const FunctionModel& f);

// Coarea-formula estimate of |Df|: midpoint sampling over the value range,
// counting essential level crossings per sample. Independent of
// tv_decomposition's bookkeeping.
double coarea_tv(const FunctionModel& f, int t_samples);

FunctionModel ingest_samples(const std::vector<std::pair<double, double>>& rows);

// Total variation of a continuous model (mollified wrappers in particular):
// sup over refinements of sum |f(x_{i+1}) - f(x_i)|, refined until the change
// drops below tol.
double smooth_tv(const FunctionModel& f, double tol);

// alpha*f + beta*g on a merged piece tiling (analytic-core models only).
FunctionModel linear_combination(double alpha, const FunctionModel& f,
                                 double beta, const FunctionModel& g);

// Mollifier kernel (polynomial bump (15/16)(1-u^2)^2 on [-1,1], C^1, unit
// mass) and its antiderivative, both on the unscaled variable.
double mollifier_kernel(double u);
double mollifier_kernel_cdf(double u);

}  // namespace bmotv
