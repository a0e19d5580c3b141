#include "hko/corpus.hpp"

#include <cmath>

#include "hko/errors.hpp"
#include "hko/expr.hpp"

namespace hko {

const FuncExpr& Corpus::fn(const std::string& key) const {
    for (const NamedFn& e : functions)
        if (e.key == key) return e.fn;
    throw SpecError("corpus has no function named '" + key + "'");
}

const NamedYoung& Corpus::young(const std::string& key) const {
    for (const NamedYoung& e : youngs)
        if (e.key == key) return e;
    throw SpecError("corpus has no Young function named '" + key + "'");
}

void Corpus::validate() const {
    if (functions.empty() || youngs.empty())
        throw SpecError("corpus must declare at least one function and one Young function");
    for (const auto& [f, y] : norm_pairs) {
        fn(f);
        young(y);
    }
    for (const auto& t : triangle_pairs) {
        const FuncExpr& a = fn(t[0]);
        const FuncExpr& b = fn(t[1]);
        young(t[2]);
        if (!(a.domain() == b.domain()))
            throw SpecError("triangle pair (" + t[0] + ", " + t[1] + ") mixes domains");
    }
    for (const auto& h : holder_pairs) {
        const FuncExpr& a = fn(h[0]);
        const FuncExpr& b = fn(h[1]);
        young(h[2]);
        if (!(a.domain() == b.domain()))
            throw SpecError("holder pair (" + h[0] + ", " + h[1] + ") mixes domains");
    }
    for (const auto& d : dominance_pairs) {
        young(d.y1);
        young(d.y2);
    }
    for (const auto& c : indicator_cases) {
        if (c.n < 1 || !(c.radius > 0.0))
            throw SpecError("indicator case needs dimension >= 1 and radius > 0");
        young(c.young);
    }
    for (const auto& s : convergence_seqs) {
        const FuncExpr& h = fn(s.h);
        young(s.young);
        if (!h.domain().contains(s.ball))
            throw SpecError("convergence ball leaves the domain of " + s.h);
    }
}

namespace {

// x1 over the unit square, with the same closed-form facts as the 1-D ramp.
FuncExpr make_lin2d() {
    Box dom({0.0, 0.0}, {1.0, 1.0});
    FuncExpr f(parse_expr("x1", 2), dom);
    Metadata m;
    m.integral = 0.5;
    m.ess_sup = 1.0;
    m.dist = [](double t) { return t < 0.0 ? 1.0 : (t < 1.0 ? 1.0 - t : 0.0); };
    for (int p = 1; p <= 3; ++p) m.lp[p] = std::pow(1.0 / (p + 1.0), 1.0 / p);
    return f.with_meta(std::move(m)).named("lin2d");
}

FuncExpr make_sin2pi() {
    Box dom({0.0}, {1.0});
    FuncExpr f(parse_expr("sin(6.283185307179586*x1)", 1), dom);
    Metadata m;
    m.integral = 0.0;   // full period
    return f.with_meta(std::move(m)).named("sin2pi");
}

YoungFn make_t24_table() {
    // Tabulated t^2 + t^4 on a log grid; convex, so chord interpolation
    // stays above the true curve and the table is a valid Young function.
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i <= 160; ++i) {
        double t = std::pow(10.0, -9.0 + 0.1 * i);   // 1e-9 .. 1e7
        pts.emplace_back(t, t * t + t * t * t * t);
    }
    return YoungFn::table(std::move(pts), true);
}

} // namespace

Corpus default_corpus() {
    Corpus c;
    Box A1({0.0}, {2.0});
    Box U({0.0}, {1.0});
    Box O({0.1}, {1.0});
    Box A2({0.0, 0.0}, {2.0, 2.0});

    c.functions.push_back({"chi01", FuncExpr::indicator(Box({0.0}, {1.0}), A1).named("chi01")});
    c.functions.push_back(
        {"chi01_x2", FuncExpr::indicator(Box({0.0}, {1.0}), A1, 2.0).named("chi01_x2")});
    c.functions.push_back(
        {"chi_half", FuncExpr::indicator(Box({0.0}, {0.5}), A1).named("chi_half")});
    c.functions.push_back(
        {"chi_disj", FuncExpr::indicator(Box({1.0}, {2.0}), A1).named("chi_disj")});
    c.functions.push_back({"pcw", FuncExpr::piecewise_const(
                                      {{Box({0.0}, {0.5}), 1.0},
                                       {Box({0.5}, {0.75}), 3.0},
                                       {Box({1.0}, {1.5}), 0.5}},
                                      A1)
                                      .named("pcw")});
    c.functions.push_back({"lin", FuncExpr::linear(U).named("lin")});
    c.functions.push_back({"quad", FuncExpr::power(2.0, U).named("quad")});
    c.functions.push_back({"sin2pi", make_sin2pi()});
    c.functions.push_back({"osc", FuncExpr::osc_deriv(O).named("osc")});
    c.functions.push_back({"zero", FuncExpr::constant(0.0, A1).named("zero")});
    c.functions.push_back(
        {"chi2d", FuncExpr::indicator(Box({0.0, 0.0}, {1.0, 1.0}), A2).named("chi2d")});
    c.functions.push_back({"pcw2d", FuncExpr::piecewise_const(
                                        {{Box({0.0, 0.0}, {1.0, 1.0}), 1.0},
                                         {Box({1.0, 0.0}, {2.0, 1.0}), 2.0}},
                                        A2)
                                        .named("pcw2d")});
    c.functions.push_back({"lin2d", make_lin2d()});

    c.youngs.push_back({"p1", YoungFn::power(1.0), std::pair{1.0, 0.0}});
    c.youngs.push_back({"p2", YoungFn::power(2.0), std::pair{1.0, 0.25}});
    // t^3 >= t - s with s = 2/(3*sqrt(3)), the gap maximized at t = 1/sqrt(3)
    c.youngs.push_back({"p3", YoungFn::power(3.0), std::pair{1.0, 2.0 / (3.0 * std::sqrt(3.0))}});
    c.youngs.push_back({"em", YoungFn::expm(), std::pair{1.0, 0.0}});
    c.youngs.push_back({"lg", YoungFn::log1p_fn(), std::nullopt}); // concave: no minorant use
    c.youngs.push_back({"sp2h", YoungFn::scaled_power(2.0, 0.5), std::pair{1.0, 0.5}});
    c.youngs.push_back({"sp12", YoungFn::scaled_power(1.0, 2.0), std::pair{1.0, 0.0}});
    c.youngs.push_back({"t24", make_t24_table(), std::pair{1.0, 0.25}});

    c.norm_pairs = {
        {"chi01", "p1"},   {"chi01", "p2"},   {"chi01", "p3"},  {"chi01", "em"},
        {"chi01", "sp2h"}, {"chi01_x2", "p2"}, {"chi01_x2", "em"},
        {"chi_half", "p2"}, {"chi_half", "em"},
        {"pcw", "p1"},     {"pcw", "p2"},     {"pcw", "p3"},
        {"lin", "p1"},     {"lin", "p2"},     {"lin", "p3"},    {"lin", "em"},
        {"quad", "p1"},    {"quad", "p2"},    {"quad", "p3"},
        {"sin2pi", "p2"},  {"zero", "p2"},
        {"chi2d", "p2"},   {"chi2d", "em"},   {"pcw2d", "p2"},  {"lin2d", "p2"},
        {"osc", "p1"},
    };

    c.triangle_pairs = {
        {"chi01", "chi01", "p1"},
        {"chi01", "chi_disj", "p2"},
        {"lin", "quad", "p2"},
        {"chi01", "pcw", "p2"},
        {"sin2pi", "lin", "p2"},
        {"chi01_x2", "chi_half", "p2"},
        {"zero", "chi01", "p2"},
        {"chi2d", "chi2d", "p1"},
    };

    c.holder_pairs = {
        {"chi01", "chi01", "sp2h"},   // the ratio-2 case: sharp form fails here
        {"chi01", "chi01", "p2"},
        {"chi01", "chi_half", "p2"},
        {"lin", "quad", "p2"},
        {"lin", "lin", "p3"},
        {"chi01", "chi_disj", "p2"},
        {"zero", "chi01", "p2"},
        {"pcw", "chi01", "p2"},
        {"chi2d", "chi2d", "p2"},
    };

    c.dominance_pairs = {
        {"p1", "sp12", 0.5},
        {"sp2h", "p2", 1.0 / std::sqrt(2.0)},
        {"p2", "t24", 1.0},
        {"p2", "p2", 1.0},
        {"lg", "p1", 1.0},
        {"p1", "p2", std::nullopt},
    };

    for (int n = 1; n <= 2; ++n)
        for (double r : {0.25, 0.5, 1.0})
            for (const char* y : {"p1", "p2", "p3", "em", "sp2h"})
                c.indicator_cases.push_back({n, r, y});

    c.convergence_seqs = {
        {"zero", Box({0.0}, {1.0}), "p1"},
        {"zero", Box({0.0}, {1.0}), "p2"},
    };

    c.validate();
    return c;
}

} // namespace hko
