#include "hko/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hko/errors.hpp"

namespace hko {

double ball_volume(std::span<const double> center, double r, int n) {
    if (n < 1) throw SpecError("ball_volume: dimension must be positive");
    if (!(r > 0.0) || !std::isfinite(r))
        throw SpecError("ball_volume: radius must be positive and finite");
    if (!center.empty() && static_cast<int>(center.size()) != n)
        throw SpecError("ball_volume: center has wrong dimension");
    return std::pow(2.0 * r, n);
}

namespace {

// Sorted midpoint samples of |f| on a uniform grid with 2^k cells per axis.
// Evaluation failures (points the function cannot be evaluated at) are
// recorded as 0, which keeps them out of every superlevel count while
// preserving the sample weight 1/N.
std::vector<double> midpoint_samples(const FuncExpr& f, const Box& box, int k) {
    const int dim = box.dim();
    const long per_axis = 1L << k;
    long total = 1;
    for (int a = 0; a < dim; ++a) total *= per_axis;

    std::vector<double> out;
    out.reserve(static_cast<size_t>(total));
    std::vector<double> x(dim);
    std::vector<long> idx(dim, 0);
    for (long n = 0; n < total; ++n) {
        for (int a = 0; a < dim; ++a)
            x[a] = box.lo(a) + (static_cast<double>(idx[a]) + 0.5) *
                                   (box.width(a) / static_cast<double>(per_axis));
        double v = 0.0;
        try {
            v = std::fabs(f.eval(x));
        } catch (const EvalError&) {
            v = 0.0;
        }
        out.push_back(v);
        for (int a = 0; a < dim; ++a) {       // odometer, axis 0 fastest
            if (++idx[a] < per_axis) break;
            idx[a] = 0;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

double count_above(const std::vector<double>& sorted, double t) {
    auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
    return static_cast<double>(sorted.end() - it);
}

} // namespace

double DistributionFn::estimate(const std::vector<double>& s, double t) const {
    if (s.empty()) return 0.0;
    return volume_ * count_above(s, t) / static_cast<double>(s.size());
}

DistributionFn::DistributionFn(const FuncExpr& f, const Box& box) {
    if (!f.domain().contains(box))
        throw SpecError("distribution: query box is not contained in the domain of " +
                        f.name());
    volume_ = box.volume();

    const Metadata& m = f.meta();
    if (m.dist && m.ess_sup && box == f.domain()) {
        exact_ = true;
        ess_ = *m.ess_sup;
        jumps_ = m.dist_jumps;
        std::sort(jumps_.begin(), jumps_.end());
        jumps_.erase(std::unique(jumps_.begin(), jumps_.end()), jumps_.end());
        const double vol = volume_;
        auto d = m.dist;
        dist_ = [d, vol](double t) {
            double v = d(t);
            if (!std::isfinite(v)) throw EvalError("distribution metadata returned a non-finite value");
            return std::clamp(v, 0.0, vol);
        };
        return;
    }

    // Estimated mode: refine the sampling grid until the two finest levels
    // agree, at a fixed probe set, to within 1e-3 * volume.
    const int dim = box.dim();
    int cap = dim == 1 ? 16 : (dim == 2 ? 10 : std::max(2, 20 / (2 * dim)));
    int k = std::min(cap, dim == 1 ? 12 : 8);
    coarse_ = midpoint_samples(f, box, k - 1);
    fine_ = midpoint_samples(f, box, k);
    const double tol = 1e-3 * volume_;
    for (;;) {
        // Probe thresholds: sample-value quantiles (shifted just below each
        // value so jumps are tested from the left) plus a log sweep.
        double worst_gap = 0.0, worst_t = 0.0;
        auto consider = [&](double t) {
            double gap = std::fabs(estimate(fine_, t) - estimate(coarse_, t));
            if (gap > worst_gap) { worst_gap = gap; worst_t = t; }
        };
        const size_t nq = 513;
        for (size_t i = 0; i < nq; ++i) {
            size_t pos = i * (fine_.size() - 1) / (nq - 1);
            double v = fine_[pos];
            consider(v * (1.0 - 1e-9));
            consider(v);
        }
        double top = fine_.empty() ? 0.0 : fine_.back();
        if (top > 0.0) {
            for (int i = 0; i <= 64; ++i)
                consider(top * std::pow(10.0, -6.0 + 6.0 * i / 64.0));
        }
        if (worst_gap <= tol) break;
        if (k >= cap) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "distribution estimate for %s did not converge: gap %.3g at t=%.6g "
                          "with 2^%d cells per axis",
                          f.name().c_str(), worst_gap, worst_t, k);
            throw IntegrationError(buf);
        }
        ++k;
        coarse_ = std::move(fine_);
        fine_ = midpoint_samples(f, box, k);
    }
    ess_ = fine_.empty() ? 0.0 : fine_.back();
}

double DistributionFn::operator()(double t) const {
    if (t < 0.0) return volume_;
    if (exact_) return dist_(t);
    return estimate(fine_, t);
}

std::vector<double> DistributionFn::sup_candidates() const {
    std::vector<double> vals;
    if (exact_) {
        vals = jumps_;
    } else {
        vals.reserve(fine_.size());
        for (double v : fine_)
            if (v > 0.0 && (vals.empty() || v != vals.back())) vals.push_back(v);
        const size_t max_vals = 4096;
        if (vals.size() > max_vals) {
            std::vector<double> picked;
            picked.reserve(max_vals);
            for (size_t i = 0; i < max_vals; ++i)
                picked.push_back(vals[i * (vals.size() - 1) / (max_vals - 1)]);
            vals = std::move(picked);
        }
    }
    if (ess_ > 0.0) vals.push_back(ess_);
    std::vector<double> out;
    out.reserve(2 * vals.size());
    for (double v : vals) {
        if (!(v > 0.0)) continue;
        out.push_back(v * (1.0 - 1e-9));
        out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double dist(const FuncExpr& f, const Box& box, double t) {
    return DistributionFn(f, box)(t);
}

} // namespace hko
