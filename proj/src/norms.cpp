#include "hko/norms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "hko/errors.hpp"

namespace hko {

namespace {

constexpr double kOverflow = 1e300;

double clip_overflow(double y) {
    if (std::isnan(y)) throw EvalError("Young function produced NaN inside a modular");
    return std::isfinite(y) ? y : kOverflow;
}

IntegralResult strong_modular_detail(const FuncExpr& f, const YoungFn& theta,
                                     double alpha, const Box& box, double tol) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw SpecError("strong modular: alpha must be positive and finite");
    if (!f.domain().contains(box))
        throw SpecError("strong modular: box is not contained in the domain of " + f.name());

    PointFn pf;
    pf.f = [&f, &theta, alpha](std::span<const double> x) {
        return clip_overflow(theta(std::fabs(f.eval(x)) / alpha));
    };
    pf.singular.reserve(f.singular().size());
    for (const SingularPoint& s : f.singular()) {
        SingularPoint mapped = s;
        if (mapped.value)
            mapped.value = clip_overflow(theta(std::fabs(*mapped.value) / alpha));
        pf.singular.push_back(std::move(mapped));
    }
    return hk_integrate(pf, box, tol);
}

// Shared bracketing + geometric bisection. `modular` must be nonincreasing
// in alpha; the driver returns the upper bracket end, which is always a
// certified feasible point (modular <= 1).
NormResult bisect_driver(const std::function<double(double)>& modular,
                         const NormOptions& opt) {
    if (!(opt.bisect_rel_tol > 0.0) || !(opt.floor > 0.0) || !(opt.ceiling > opt.floor))
        throw SpecError("norm options: tolerances and bounds must be positive");

    NormResult r;
    double lo = 0.0, hi = 0.0, mhi = 0.0;
    int iters = 0;
    double m1 = modular(1.0);

    if (m1 <= 1.0) {
        hi = 1.0;
        mhi = m1;
        bool found_lo = false;
        for (double probe = 1.0 / 8.0; probe >= opt.floor; probe /= 8.0) {
            double mp = modular(probe);
            ++iters;
            if (mp <= 1.0) {
                hi = probe;
                mhi = mp;
            } else {
                lo = probe;
                found_lo = true;
                break;
            }
        }
        if (!found_lo) {
            // Feasible all the way down to the floor. A modular that is
            // exactly 0 there identifies the zero function; otherwise
            // report the smallest certified feasible probe.
            r.value = mhi == 0.0 ? 0.0 : hi;
            r.bracket_lo = 0.0;
            r.bracket_hi = hi;
            r.modular_at_value = mhi;
            r.iterations = iters;
            return r;
        }
    } else {
        lo = 1.0;
        for (double probe = 8.0;; probe *= 8.0) {
            if (probe > opt.ceiling) {
                r.infinite = true;
                r.value = std::numeric_limits<double>::infinity();
                r.bracket_lo = lo;
                r.bracket_hi = r.value;
                r.modular_at_value = std::numeric_limits<double>::quiet_NaN();
                r.iterations = iters;
                return r;
            }
            double mp = modular(probe);
            ++iters;
            if (mp <= 1.0) {
                hi = probe;
                mhi = mp;
                break;
            }
            lo = probe;
        }
    }

    while (hi - lo > opt.bisect_rel_tol * hi && iters < 300) {
        double mid = std::sqrt(lo * hi);
        if (!(mid > lo && mid < hi)) break; // bracket exhausted in floating point
        double mm = modular(mid);
        ++iters;
        if (mm <= 1.0) {
            hi = mid;
            mhi = mm;
        } else {
            lo = mid;
        }
    }
    r.value = hi;
    r.bracket_lo = lo;
    r.bracket_hi = hi;
    r.modular_at_value = mhi;
    r.iterations = iters;
    return r;
}

// Threshold grid for the weak modular: a fixed log sweep over six decades
// below the essential sup, merged with the distribution's own candidate
// thresholds. Pairs (tau, dist(tau)) with dist(tau) == 0 contribute nothing
// to the sup and are dropped.
std::vector<std::pair<double, double>> build_tau_grid(const DistributionFn& d) {
    std::vector<std::pair<double, double>> grid;
    double ess = d.ess_sup();
    if (!(ess > 0.0)) return grid;

    std::vector<double> taus = d.sup_candidates();
    for (int i = 0; i < 512; ++i)
        taus.push_back(ess * std::pow(10.0, -6.0 + 6.0 * i / 511.0));
    std::sort(taus.begin(), taus.end());
    taus.erase(std::unique(taus.begin(), taus.end()), taus.end());

    grid.reserve(taus.size());
    for (double t : taus) {
        if (!(t > 0.0)) continue;
        double dv = d(t);
        if (dv > 0.0) grid.emplace_back(t, dv);
    }
    return grid;
}

double scan_weak_modular(const std::vector<std::pair<double, double>>& grid,
                         const YoungFn& theta, double alpha) {
    double m = 0.0;
    for (const auto& [tau, dv] : grid) {
        double y = clip_overflow(theta(tau / alpha));
        m = std::max(m, y * dv);
    }
    return m;
}

} // namespace

double strong_modular(const FuncExpr& f, const YoungFn& theta, double alpha,
                      const Box& box, double tol) {
    return strong_modular_detail(f, theta, alpha, box, tol).value;
}

NormResult luxemburg_norm(const FuncExpr& f, const YoungFn& theta, const Box& box,
                          const NormOptions& opt) {
    long cells = 0;
    // A probe only feeds the comparison with 1, so integrate cheaply first
    // and pay for opt.integrator_tol only when the coarse value cannot
    // separate the modular from 1. Far-from-crossing probes (where the
    // integrand is scaled far up or down) stay cheap this way.
    const double coarse = std::max(opt.integrator_tol, 0.02);
    auto modular = [&](double a) {
        IntegralResult ir = strong_modular_detail(f, theta, a, box, coarse);
        cells += ir.cells;
        if (std::fabs(ir.value - 1.0) > ir.error_estimate + coarse) return ir.value;
        ir = strong_modular_detail(f, theta, a, box, opt.integrator_tol);
        cells += ir.cells;
        return ir.value;
    };
    NormResult r = bisect_driver(modular, opt);
    r.inner_tol = opt.integrator_tol;
    r.cells = cells;
    return r;
}

double weak_modular(const DistributionFn& d, const YoungFn& theta, double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw SpecError("weak modular: alpha must be positive and finite");
    return scan_weak_modular(build_tau_grid(d), theta, alpha);
}

double weak_modular(const FuncExpr& f, const YoungFn& theta, double alpha, const Box& box) {
    return weak_modular(DistributionFn(f, box), theta, alpha);
}

NormResult weak_norm(const DistributionFn& d, const YoungFn& theta, const NormOptions& opt) {
    auto grid = build_tau_grid(d);
    NormResult r;
    if (grid.empty()) {
        // Essential sup is 0 (or the distribution vanishes): zero function.
        r.inner_tol = d.resolution();
        return r;
    }
    long scanned = 0;
    auto modular = [&](double a) {
        scanned += static_cast<long>(grid.size());
        return scan_weak_modular(grid, theta, a);
    };
    r = bisect_driver(modular, opt);
    r.inner_tol = d.resolution();
    r.cells = scanned;
    return r;
}

NormResult weak_norm(const FuncExpr& f, const YoungFn& theta, const Box& box,
                     const NormOptions& opt) {
    return weak_norm(DistributionFn(f, box), theta, opt);
}

} // namespace hko
