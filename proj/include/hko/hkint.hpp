#pragma once

#include <functional>
#include <span>
#include <vector>

#include "hko/box.hpp"
#include "hko/funcspec.hpp"

namespace hko {

// Strictly positive locality radius delta(x). Fineness balls are max-norm
// balls, so delta-fineness of a box-shaped cell is a per-axis interval test.
class Gauge {
  public:
    static Gauge constant(double d0);
    // delta(x) = max(scale * max-norm distance(x, center), floor), floor > 0
    static Gauge radial(std::vector<double> center, double scale, double floor_value);
    // per-cell values on the dyadic grid with 2^level cells per axis over `box`
    // (values indexed row-major, axis 0 fastest)
    static Gauge tabulated(const Box& box, int level, std::vector<double> cell_values);

    double operator()(std::span<const double> x) const;

  private:
    Gauge() = default;
    enum class Kind { Constant, Radial, Tabulated } kind_{};
    double d0_ = 1.0, scale_ = 1.0, floor_ = 1e-9;
    std::vector<double> center_;
    Box grid_box_;
    int level_ = 0;
    std::vector<double> values_;
};

struct TaggedCell {
    Box cell;
    std::vector<double> tag;
};

struct TaggedPartition {
    Box parent;
    std::vector<TaggedCell> cells;

    // Tags inside their cells, pairwise non-overlapping interiors, and the
    // cell volumes summing to the parent volume within 1e-12 relative.
    void validate() const;
};

bool is_delta_fine(const TaggedPartition& p, const Gauge& g);

// Recursive dyadic bisection: accept a cell once some corner-or-center tag
// candidate covers it within delta(tag), otherwise split the longest axis.
// Throws IntegrationError past `max_depth` splits of one axis.
TaggedPartition cousin_partition(const Box& box, const Gauge& g, int max_depth = 60);

// Sum of f(tag) * volume(cell). A tag at a singular point uses the declared
// value if present and is an error otherwise.
double riemann_sum(const FuncExpr& f, const TaggedPartition& p);

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long cells = 0;
};

struct IntegrateOptions {
    long cell_budget = 1L << 22;
    int max_depth = 60; // dyadic splits per axis
};

// Evaluation view used by the integrator: any callable plus the points it
// must not be evaluated at (contributions there are pinned to 0).
struct PointFn {
    std::function<double(std::span<const double>)> f;
    std::vector<SingularPoint> singular;
};

// Adaptive gauge-driven integration. Cells whose 1-level/2-level dyadic
// Riemann sums disagree by more than tol * (cell volume / box volume) are
// split, until the total disagreement is at most tol. Declared singular
// points are wrapped in a sequence of shrinking cube bands (the radial
// gauge made explicit); the frontier stops once two consecutive bands
// contribute at most tol/8 each, and the innermost cube is pinned with
// value 0. |result.value - true value| <= result.error_estimate for
// integrands whose local refinement indicator is honest.
IntegralResult hk_integrate(const PointFn& f, const Box& box, double tol,
                            const IntegrateOptions& opt = {});
IntegralResult hk_integrate(const FuncExpr& f, const Box& box, double tol,
                            const IntegrateOptions& opt = {});

// sup_t | integral of f over [lo, t] | on a refining grid of t (1-D only).
double alexiewicz_norm(const FuncExpr& f, const Box& box, double tol);

} // namespace hko
