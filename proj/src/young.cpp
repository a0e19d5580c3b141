#include "hko/young.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace hko {

namespace {

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

double table_eval(const std::vector<std::pair<double, double>>& nodes, double a) {
    // nodes are (t, v), t > 0 strictly increasing; implicit anchor (0, 0)
    if (a <= 0.0) return 0.0;
    const auto& first = nodes.front();
    if (a <= first.first) return first.second * (a / first.first);
    const auto& last = nodes.back();
    if (a >= last.first) {
        double slope;
        if (nodes.size() >= 2) {
            const auto& prev = nodes[nodes.size() - 2];
            slope = (last.second - prev.second) / (last.first - prev.first);
        } else {
            slope = last.second / last.first;
        }
        return last.second + slope * (a - last.first);
    }
    auto it = std::upper_bound(nodes.begin(), nodes.end(), a,
                               [](double x, const auto& n) { return x < n.first; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    double w = (a - lo.first) / (hi.first - lo.first);
    return lo.second + w * (hi.second - lo.second);
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    double llo = std::log10(lo), lhi = std::log10(hi);
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] = std::pow(10.0, llo + (lhi - llo) * i / (n - 1));
    return g;
}

} // namespace

YoungFn YoungFn::power(double p) {
    if (!(p >= 1.0)) throw SpecError("power family needs p >= 1");
    YoungFn y;
    y.family_ = YoungFamily::Power;
    y.p_ = p;
    y.convex_ = true;
    return y;
}

YoungFn YoungFn::scaled_power(double p, double c) {
    if (!(p >= 1.0)) throw SpecError("scaled_power family needs p >= 1");
    if (!(c > 0.0)) throw SpecError("scaled_power family needs c > 0");
    YoungFn y;
    y.family_ = YoungFamily::ScaledPower;
    y.p_ = p;
    y.c_ = c;
    y.convex_ = true;
    return y;
}

YoungFn YoungFn::expm() {
    YoungFn y;
    y.family_ = YoungFamily::Expm;
    y.convex_ = true;
    return y;
}

YoungFn YoungFn::log1p_fn() {
    YoungFn y;
    y.family_ = YoungFamily::Log1p;
    y.convex_ = false;
    return y;
}

YoungFn YoungFn::table(std::vector<std::pair<double, double>> nodes, bool convex) {
    if (nodes.empty()) throw SpecError("table family needs at least one node");
    double prev_t = 0.0, prev_v = 0.0;
    for (const auto& [t, v] : nodes) {
        if (!(t > prev_t)) throw SpecError("table abscissae must be positive and strictly increasing");
        if (!std::isfinite(t) || !std::isfinite(v) || v < prev_v)
            throw SpecError("table values must be finite, nonnegative and nondecreasing");
        prev_t = t;
        prev_v = v;
    }
    if (!(nodes.back().second > 0.0)) throw SpecError("table must eventually be positive");
    YoungFn y;
    y.family_ = YoungFamily::Table;
    y.nodes_ = std::move(nodes);
    y.convex_ = convex;
    return y;
}

double YoungFn::operator()(double t) const {
    double a = std::fabs(t);
    switch (family_) {
        case YoungFamily::Power:
            if (p_ == 1.0) return a;
            if (p_ == 2.0) return a * a;
            if (p_ == 3.0) return a * a * a;
            return std::pow(a, p_);
        case YoungFamily::ScaledPower:
            return c_ * (p_ == 2.0 ? a * a : std::pow(a, p_));
        case YoungFamily::Expm: return std::expm1(a);
        case YoungFamily::Log1p: return std::log1p(a);
        case YoungFamily::Table: return table_eval(nodes_, a);
    }
    return 0.0;
}

std::string YoungFn::describe() const {
    switch (family_) {
        case YoungFamily::Power: return "power(" + fmt_num(p_) + ")";
        case YoungFamily::ScaledPower: return "scaled_power(" + fmt_num(p_) + "," + fmt_num(c_) + ")";
        case YoungFamily::Expm: return "expm";
        case YoungFamily::Log1p: return "log1p";
        case YoungFamily::Table: return "table[" + std::to_string(nodes_.size()) + "]";
    }
    return "?";
}

double y_inverse(const YoungFn& th, double u) {
    if (u < 0.0) throw SpecError("y_inverse needs u >= 0");
    if (u == 0.0) return 0.0;
    switch (th.family()) {
        case YoungFamily::Power: return std::pow(u, 1.0 / th.param_p());
        case YoungFamily::ScaledPower: return std::pow(u / th.param_c(), 1.0 / th.param_p());
        case YoungFamily::Expm: return std::log1p(u);
        case YoungFamily::Log1p: return std::expm1(u);
        case YoungFamily::Table: break;
    }
    // table: bracket then bisect to absolute 1e-12 (or relative 1e-15)
    double lo = 0.0, hi = 1.0;
    int guard = 0;
    while (th(hi) < u) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 2100 || !std::isfinite(hi))
            throw Error("y_inverse: value unreachable within the bracketing budget");
    }
    for (int i = 0; i < 200 && (hi - lo) > 1e-12 && (hi - lo) > 1e-15 * hi; ++i) {
        double mid = 0.5 * (lo + hi);
        (th(mid) < u ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

YoungFn complementary(const YoungFn& th, const ConjugateGrid& grid) {
    if (!th.convex()) throw SpecError("complementary requires a convex Young function");
    if (grid.nodes < 2 || !(grid.s_lo > 0.0) || !(grid.s_hi > grid.s_lo))
        throw SpecError("bad conjugate grid");

    auto g = [&th](double x, double s) { return x * s - th(x); };
    std::vector<std::pair<double, double>> nodes;
    nodes.reserve(static_cast<std::size_t>(grid.nodes));
    double prev_v = 0.0;
    for (double s : log_grid(grid.s_lo, grid.s_hi, grid.nodes)) {
        // expand until the concave profile x -> x*s - theta(x) turns over
        double hi = 1.0;
        int guard = 0;
        while (g(2.0 * hi, s) > g(hi, s)) {
            hi *= 2.0;
            if (++guard > 60)
                throw SpecError("complementary function is not finite-valued at s=" + fmt_num(s));
        }
        hi *= 2.0;
        // golden-section maximum on [0, hi]
        const double invphi = 0.6180339887498949;
        double a = 0.0, b = hi;
        double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
        double f1 = g(x1, s), f2 = g(x2, s);
        for (int i = 0; i < 140 && (b - a) > 1e-14 * std::max(1.0, b); ++i) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + invphi * (b - a);
                f2 = g(x2, s);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - invphi * (b - a);
                f1 = g(x1, s);
            }
        }
        double v = std::max({0.0, f1, f2, prev_v});
        nodes.push_back({s, v});
        prev_v = v;
    }
    return YoungFn::table(std::move(nodes), true);
}

Delta2Result is_delta2(const YoungFn& th) {
    auto sup_ratio = [&th](double x_hi) {
        double sup = 0.0;
        for (double x : log_grid(1.0, x_hi, 50 * static_cast<int>(std::log10(x_hi)) + 1)) {
            double den = th(x);
            if (!(den > 0.0) || !std::isfinite(den)) continue;
            double num = th(2.0 * x);
            double r = std::isfinite(num) ? num / den : std::numeric_limits<double>::infinity();
            sup = std::max(sup, r);
        }
        return sup;
    };
    Delta2Result res{};
    res.witness_sup = sup_ratio(1e6);
    res.extended_sup = sup_ratio(1e12);
    res.holds = std::isfinite(res.extended_sup) &&
                res.extended_sup <= res.witness_sup * (1.0 + 1e-6) + 1e-12;
    return res;
}

DeltaPrimeResult is_delta_prime(const YoungFn& th) {
    // alpha-independent fixed grid; spans far past the double sweet spot on
    // purpose so slowly-decaying ratios (log-like families) are exposed.
    // Built from exact eighth-of-a-decade exponents so t = 1e6 is a grid point.
    std::vector<double> tg;
    for (int i = 0; i <= 2448; ++i) tg.push_back(std::pow(10.0, -6.0 + 0.125 * i));
    DeltaPrimeResult res{};
    res.min_sup = std::numeric_limits<double>::infinity();
    res.max_sup = 0.0;
    for (int j = 1; j <= 20; ++j) {
        double k = std::ldexp(1.0, -j);
        DeltaPrimeWitness w{};
        w.k = k;
        for (double t : tg) {
            double den = th(t);
            if (!(den > 0.0) || !std::isfinite(den)) continue;
            double num = th(k * t);
            if (!std::isfinite(num)) continue; // theta nondecreasing: cannot happen with finite den
            double r = num / den;
            if (r > w.sup_ratio) {
                w.sup_ratio = r;
                w.argmax_t = t;
            }
        }
        double den6 = th(1e6);
        w.ratio_at_1e6 = (std::isfinite(den6) && den6 > 0.0) ? th(k * 1e6) / den6
                                                             : std::numeric_limits<double>::quiet_NaN();
        res.min_sup = std::min(res.min_sup, w.sup_ratio);
        res.max_sup = std::max(res.max_sup, w.sup_ratio);
        res.witnesses.push_back(w);
    }
    res.holds = res.min_sup < 1e-3;
    return res;
}

std::optional<double> dominates(const YoungFn& th1, const YoungFn& th2) {
    static const std::vector<double> tg = log_grid(1e-9, 1e6, 601);
    for (int j = -26; j <= 26; ++j) {
        double c = std::pow(2.0, 0.5 * j);
        bool ok = true;
        for (double t : tg) {
            if (!(th1(t) <= th2(c * t) * (1.0 + 1e-9))) {
                ok = false;
                break;
            }
        }
        if (ok) return c;
    }
    return std::nullopt;
}

} // namespace hko
