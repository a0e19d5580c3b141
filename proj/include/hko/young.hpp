#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hko/errors.hpp"

namespace hko {

enum class YoungFamily { Power, ScaledPower, Expm, Log1p, Table };

// Even, nondecreasing function with theta(0) = 0 and theta(x) -> infinity.
// Only finite-valued families are modeled; evaluation may still overflow to
// +inf in double precision, and the classifiers treat that explicitly.
class YoungFn {
  public:
    static YoungFn power(double p);                  // |t|^p, p >= 1
    static YoungFn scaled_power(double p, double c); // c*|t|^p, c > 0
    static YoungFn expm();                           // e^|t| - 1
    static YoungFn log1p_fn();                       // log(1 + |t|), concave
    // Piecewise-linear interpolant through (0,0) and the given nodes
    // (t strictly increasing and positive, values nonnegative and
    // nondecreasing), linearly extrapolated past the last node.
    static YoungFn table(std::vector<std::pair<double, double>> nodes, bool convex);

    double operator()(double t) const;

    YoungFamily family() const { return family_; }
    bool convex() const { return convex_; }
    double param_p() const { return p_; }
    double param_c() const { return c_; }
    const std::vector<std::pair<double, double>>& nodes() const { return nodes_; }
    std::string describe() const;

  private:
    YoungFn() = default;
    YoungFamily family_{};
    double p_ = 1.0, c_ = 1.0;
    std::vector<std::pair<double, double>> nodes_;
    bool convex_ = true;
};

inline double y_eval(const YoungFn& th, double t) { return th(t); }

// Smallest t >= 0 with theta(t) = u (theta nondecreasing); closed forms for
// the analytic families, bracketing + bisection to 1e-12 for tables.
double y_inverse(const YoungFn& th, double u);

struct ConjugateGrid {
    double s_lo = 1e-4;
    double s_hi = 1e4;
    int nodes = 513;
};

// Convex conjugate phi(s) = sup_{x>=0} (x*s - theta(x)), tabulated on a log
// grid in s. Throws SpecError for non-convex input or when the conjugate is
// not finite-valued on the grid.
YoungFn complementary(const YoungFn& th, const ConjugateGrid& grid = {});

struct Delta2Result {
    bool holds;
    double witness_sup;   // sup of theta(2x)/theta(x), x in [1, 1e6]
    double extended_sup;  // same over [1, 1e12]; verdict requires stability
};
Delta2Result is_delta2(const YoungFn& th);

struct DeltaPrimeWitness {
    double k;
    double sup_ratio;     // S(k) = sup_t theta(k t)/theta(t) over the t-grid
    double argmax_t;
    double ratio_at_1e6;  // the ratio at t = 1e6 for this k
};
struct DeltaPrimeResult {
    bool holds;           // true iff S(k) drops below 1e-3 on the k-grid
    std::vector<DeltaPrimeWitness> witnesses; // k = 2^-1 .. 2^-20, in order
    double min_sup;
    double max_sup;
};
DeltaPrimeResult is_delta_prime(const YoungFn& th);

// Smallest C on the half-power grid 2^(j/2), j in [-26, 26], with
// theta1(t) <= theta2(C*t)*(1+1e-9) across a log t-grid on [1e-9, 1e6];
// absent if no grid C works.
std::optional<double> dominates(const YoungFn& th1, const YoungFn& th2);

} // namespace hko
