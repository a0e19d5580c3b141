#pragma once

#include <vector>

#include "hko/box.hpp"
#include "hko/funcspec.hpp"

namespace hko {

// Volume of the closed max-norm ball of radius r in R^n, i.e. (2r)^n.
// The center is accepted for interface symmetry and only checked for size.
double ball_volume(std::span<const double> center, double r, int n);

// Distribution function t -> |{x in box : |f(x)| > t}| (Lebesgue measure).
//
// Two modes. If f carries an exact distribution (and the query box equals
// its domain) the stored function is used directly and resolution() is 0.
// Otherwise the measure is estimated by counting midpoint samples on a
// uniform grid, refining until the two finest levels agree to within
// 1e-3 * volume at every queried threshold.
class DistributionFn {
  public:
    DistributionFn(const FuncExpr& f, const Box& box);

    double operator()(double t) const;

    bool exact() const { return exact_; }
    double volume() const { return volume_; }
    double ess_sup() const { return ess_; }
    // Worst-case absolute error of a single evaluation (0 in exact mode).
    double resolution() const { return exact_ ? 0.0 : 1e-3 * volume_; }

    // Thresholds where sup_{t} theta(t/a) * dist(t) style scans need
    // samples: every jump (or sample value) tau is represented by the pair
    // tau*(1-1e-9) and tau so left limits at jumps are captured. Ascending,
    // deduplicated, capped at a few thousand entries.
    std::vector<double> sup_candidates() const;

  private:
    bool exact_ = false;
    double volume_ = 0.0;
    double ess_ = 0.0;
    std::function<double(double)> dist_;   // exact mode
    std::vector<double> jumps_;            // exact mode, may be empty
    std::vector<double> fine_;             // estimated mode: sorted |f| samples
    std::vector<double> coarse_;
    double estimate(const std::vector<double>& s, double t) const;
};

// One-off query; builds a DistributionFn internally.
double dist(const FuncExpr& f, const Box& box, double t);

} // namespace hko
