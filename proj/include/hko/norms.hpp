#pragma once

#include <limits>

#include "hko/box.hpp"
#include "hko/funcspec.hpp"
#include "hko/hkint.hpp"
#include "hko/measure.hpp"
#include "hko/young.hpp"

namespace hko {

struct NormOptions {
    double bisect_rel_tol = 1e-5;   // stop when (hi - lo) <= rel * hi
    double integrator_tol = 1e-4;   // tolerance handed to the integrator
    double ceiling = 1e9;           // declare the norm infinite above this
    double floor = 1e-9;            // declare the norm zero below this
};

struct NormResult {
    double value = 0.0;
    bool infinite = false;
    double bracket_lo = 0.0;        // certified infeasible (modular > 1), 0 for zero norms
    double bracket_hi = 0.0;        // certified feasible (modular <= 1); equals value
    double modular_at_value = 0.0;
    int iterations = 0;             // modular evaluations beyond the initial probe
    double inner_tol = 0.0;         // integrator tol (strong) or estimator resolution (weak)
    long cells = 0;                 // integrator cells or scan points, summed over all probes
};

// Integral over box of theta(|f|/alpha). Values where theta overflows are
// treated as 1e300, which keeps the sum finite (and far above 1) without
// introducing NaN into the feasibility test.
double strong_modular(const FuncExpr& f, const YoungFn& theta, double alpha,
                      const Box& box, double tol = 1e-4);

// Luxemburg norm inf{a > 0 : strong modular at a is <= 1} by geometric
// bracketing and bisection. The returned value is the certified-feasible
// upper bracket end. Returns 0 when the modular vanishes all the way down
// to opt.floor, and an infinite result when no feasible alpha is found
// below opt.ceiling.
NormResult luxemburg_norm(const FuncExpr& f, const YoungFn& theta, const Box& box,
                          const NormOptions& opt = {});

// sup over t > 0 of theta(t/alpha) * dist(t). The scan runs over a fixed
// alpha-independent threshold grid (log sweep plus the distribution's jump
// candidates), so feasibility in alpha is monotone.
double weak_modular(const DistributionFn& d, const YoungFn& theta, double alpha);
double weak_modular(const FuncExpr& f, const YoungFn& theta, double alpha, const Box& box);

// Weak Luxemburg norm, same bisection protocol on the weak modular. The
// DistributionFn overload lets callers reuse one estimate across probes.
NormResult weak_norm(const DistributionFn& d, const YoungFn& theta,
                     const NormOptions& opt = {});
NormResult weak_norm(const FuncExpr& f, const YoungFn& theta, const Box& box,
                     const NormOptions& opt = {});

} // namespace hko
