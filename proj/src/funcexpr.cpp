#include "hko/funcspec.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace hko {

namespace {

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

} // namespace

struct FuncExpr::Body {
    enum class Tag { Expr, Indicator, Power, Constant, OscDeriv, Piecewise, Sum, Product, Scaled, Abs };
    Tag tag{};
    ExprPtr expr;
    Box support;                                // Indicator
    double p = 1.0;                             // Power exponent
    double c = 0.0;                             // Constant value / Indicator value / Scaled factor
    std::vector<std::pair<Box, double>> pieces; // Piecewise
    std::shared_ptr<const Body> a, b;           // combinator children

    double eval(std::span<const double> x) const {
        switch (tag) {
            case Tag::Expr: return eval_expr(*expr, x);
            case Tag::Indicator: return support.contains(x) ? c : 0.0;
            case Tag::Power: {
                double ax = std::fabs(x[0]);
                if (p == 1.0) return ax;
                if (p == 2.0) return ax * ax;
                if (p == 3.0) return ax * ax * ax;
                return std::pow(ax, p);
            }
            case Tag::Constant: return c;
            case Tag::OscDeriv: {
                double v = x[0];
                if (v == 0.0) throw EvalError("oscillatory derivative is undefined at 0");
                double inv2 = 1.0 / (v * v);
                return 2.0 * v * std::sin(inv2) - (2.0 / v) * std::cos(inv2);
            }
            case Tag::Piecewise: {
                for (const auto& [piece, value] : pieces)
                    if (piece.contains(x)) return value;
                return 0.0;
            }
            case Tag::Sum: return a->eval(x) + b->eval(x);
            case Tag::Product: return a->eval(x) * b->eval(x);
            case Tag::Scaled: return c * a->eval(x);
            case Tag::Abs: return std::fabs(a->eval(x));
        }
        throw EvalError("corrupt function body");
    }
};

double osc_antiderivative(double x) {
    if (x == 0.0) return 0.0;
    return x * x * std::sin(1.0 / (x * x));
}

FuncExpr::FuncExpr(ExprPtr body, Box domain, std::vector<SingularPoint> singular) {
    if (!body) throw SpecError("null expression body");
    for (const auto& s : singular) {
        if (static_cast<int>(s.point.size()) != domain.dim())
            throw SpecError("singular point dimension does not match the domain");
        if (!domain.contains(s.point)) throw SpecError("singular point outside the domain");
    }
    auto b = std::make_shared<Body>();
    b->tag = Body::Tag::Expr;
    b->expr = std::move(body);
    body_ = std::move(b);
    domain_ = std::move(domain);
    singular_ = std::move(singular);
    name_ = "expr";
}

FuncExpr FuncExpr::indicator(const Box& support, const Box& domain, double value) {
    if (!domain.contains(support)) throw SpecError("indicator support must lie inside the domain");
    FuncExpr f;
    auto b = std::make_shared<Body>();
    b->tag = Body::Tag::Indicator;
    b->support = support;
    b->c = value;
    f.body_ = std::move(b);
    f.domain_ = domain;
    f.name_ = "indicator";

    double vol = support.volume();
    double av = std::fabs(value);
    f.meta_.integral = value * vol;
    if (vol > 0.0 && value != 0.0) {
        f.meta_.dist = [vol, av](double t) { return t < av ? vol : 0.0; };
        f.meta_.dist_jumps = {av};
        f.meta_.ess_sup = av;
        for (int q : {1, 2, 3}) f.meta_.lp[q] = av * std::pow(vol, 1.0 / q);
    } else {
        f.meta_.dist = [](double) { return 0.0; };
        f.meta_.ess_sup = 0.0;
        for (int q : {1, 2, 3}) f.meta_.lp[q] = 0.0;
    }
    return f;
}

FuncExpr FuncExpr::power(double p, const Box& domain) {
    if (domain.dim() != 1) throw SpecError("power builtin is 1-D");
    if (!(p > 0.0)) throw SpecError("power builtin needs a positive exponent");
    FuncExpr f;
    auto b = std::make_shared<Body>();
    b->tag = Body::Tag::Power;
    b->p = p;
    f.body_ = std::move(b);
    f.domain_ = domain;
    f.name_ = p == 1.0 ? std::string("linear") : "power(" + fmt_num(p) + ")";

    double a = domain.lo(0), h = domain.hi(0);
    if (a >= 0.0) {
        f.meta_.integral = (std::pow(h, p + 1) - std::pow(a, p + 1)) / (p + 1);
        double emax = std::pow(h, p);
        f.meta_.dist = [a, h, p](double t) {
            double cut = std::max(a, std::pow(t, 1.0 / p));
            return std::max(0.0, h - cut);
        };
        f.meta_.ess_sup = emax;
        for (int q : {1, 2, 3}) {
            double pq = p * q;
            f.meta_.lp[q] = std::pow((std::pow(h, pq + 1) - std::pow(a, pq + 1)) / (pq + 1), 1.0 / q);
        }
    } else {
        f.meta_.ess_sup = std::pow(std::max(std::fabs(a), std::fabs(h)), p);
    }
    return f;
}

FuncExpr FuncExpr::linear(const Box& domain) { return power(1.0, domain); }

FuncExpr FuncExpr::constant(double c, const Box& domain) {
    FuncExpr f;
    auto b = std::make_shared<Body>();
    b->tag = Body::Tag::Constant;
    b->c = c;
    f.body_ = std::move(b);
    f.domain_ = domain;
    f.name_ = "constant(" + fmt_num(c) + ")";

    double vol = domain.volume();
    double ac = std::fabs(c);
    f.meta_.integral = c * vol;
    if (c != 0.0 && vol > 0.0) {
        f.meta_.dist = [vol, ac](double t) { return t < ac ? vol : 0.0; };
        f.meta_.dist_jumps = {ac};
    } else {
        f.meta_.dist = [](double) { return 0.0; };
    }
    f.meta_.ess_sup = vol > 0.0 ? ac : 0.0;
    for (int q : {1, 2, 3}) f.meta_.lp[q] = ac * std::pow(vol, 1.0 / q);
    return f;
}

FuncExpr FuncExpr::osc_deriv(const Box& domain) {
    if (domain.dim() != 1) throw SpecError("osc_deriv builtin is 1-D");
    FuncExpr f;
    auto b = std::make_shared<Body>();
    b->tag = Body::Tag::OscDeriv;
    f.body_ = std::move(b);
    f.domain_ = domain;
    f.name_ = "osc_deriv";
    f.meta_.integral = osc_antiderivative(domain.hi(0)) - osc_antiderivative(domain.lo(0));
    if (domain.lo(0) <= 0.0 && domain.hi(0) >= 0.0)
        f.singular_ = {SingularPoint{{0.0}, 0.0}};
    return f;
}

FuncExpr FuncExpr::piecewise_const(std::vector<std::pair<Box, double>> pieces, const Box& domain) {
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (!domain.contains(pieces[i].first))
            throw SpecError("piecewise_const piece " + std::to_string(i + 1) + " outside the domain");
        for (std::size_t j = 0; j < i; ++j)
            if (pieces[i].first.overlaps_interior(pieces[j].first))
                throw SpecError("piecewise_const pieces overlap");
    }
    FuncExpr f;
    auto b = std::make_shared<Body>();
    b->tag = Body::Tag::Piecewise;
    b->pieces = pieces;
    f.body_ = std::move(b);
    f.domain_ = domain;
    f.name_ = "piecewise_const";

    double integral = 0.0, ess = 0.0;
    for (const auto& [piece, v] : pieces) {
        integral += v * piece.volume();
        if (piece.volume() > 0.0) ess = std::max(ess, std::fabs(v));
    }
    f.meta_.integral = integral;
    f.meta_.ess_sup = ess;
    auto shared = std::make_shared<std::vector<std::pair<double, double>>>(); // (|v|, vol)
    for (const auto& [piece, v] : pieces)
        if (piece.volume() > 0.0 && v != 0.0) shared->push_back({std::fabs(v), piece.volume()});
    f.meta_.dist = [shared](double t) {
        double m = 0.0;
        for (const auto& [av, vol] : *shared)
            if (av > t) m += vol;
        return m;
    };
    for (const auto& [av, vol] : *shared) f.meta_.dist_jumps.push_back(av);
    std::sort(f.meta_.dist_jumps.begin(), f.meta_.dist_jumps.end());
    f.meta_.dist_jumps.erase(std::unique(f.meta_.dist_jumps.begin(), f.meta_.dist_jumps.end()),
                             f.meta_.dist_jumps.end());
    for (int q : {1, 2, 3}) {
        double s = 0.0;
        for (const auto& [av, vol] : *shared) s += std::pow(av, q) * vol;
        f.meta_.lp[q] = std::pow(s, 1.0 / q);
    }
    return f;
}

namespace {

std::vector<SingularPoint> merge_singular(const std::vector<SingularPoint>& a,
                                          const std::vector<SingularPoint>& b) {
    std::vector<SingularPoint> out = a;
    for (const auto& s : b) {
        bool seen = false;
        for (auto& t : out)
            if (t.point == s.point) {
                // combined value is unknown unless both agree; drop it otherwise
                if (!(t.value && s.value && *t.value == *s.value)) t.value.reset();
                seen = true;
            }
        if (!seen) out.push_back(s);
    }
    return out;
}

} // namespace

FuncExpr FuncExpr::sum(const FuncExpr& a, const FuncExpr& b) {
    if (!(a.domain_ == b.domain_)) throw SpecError("sum requires identical domains");
    FuncExpr f;
    auto body = std::make_shared<Body>();
    body->tag = Body::Tag::Sum;
    body->a = a.body_;
    body->b = b.body_;
    f.body_ = std::move(body);
    f.domain_ = a.domain_;
    f.singular_ = merge_singular(a.singular_, b.singular_);
    for (auto& s : f.singular_) s.value.reset();
    if (a.meta_.integral && b.meta_.integral) f.meta_.integral = *a.meta_.integral + *b.meta_.integral;
    f.name_ = "(" + a.name_ + "+" + b.name_ + ")";
    return f;
}

FuncExpr FuncExpr::product(const FuncExpr& a, const FuncExpr& b) {
    if (!(a.domain_ == b.domain_)) throw SpecError("product requires identical domains");
    FuncExpr f;
    auto body = std::make_shared<Body>();
    body->tag = Body::Tag::Product;
    body->a = a.body_;
    body->b = b.body_;
    f.body_ = std::move(body);
    f.domain_ = a.domain_;
    f.singular_ = merge_singular(a.singular_, b.singular_);
    for (auto& s : f.singular_) s.value.reset();
    f.name_ = "(" + a.name_ + "*" + b.name_ + ")";
    return f;
}

FuncExpr FuncExpr::scaled(const FuncExpr& a, double c) {
    if (!std::isfinite(c)) throw SpecError("scale factor must be finite");
    FuncExpr f;
    auto body = std::make_shared<Body>();
    body->tag = Body::Tag::Scaled;
    body->a = a.body_;
    body->c = c;
    f.body_ = std::move(body);
    f.domain_ = a.domain_;
    f.singular_ = a.singular_;
    for (auto& s : f.singular_)
        if (s.value) s.value = c * *s.value;
    double ac = std::fabs(c);
    if (c == 0.0) {
        f.meta_.integral = 0.0;
        f.meta_.dist = [](double) { return 0.0; };
        f.meta_.ess_sup = 0.0;
        for (int q : {1, 2, 3}) f.meta_.lp[q] = 0.0;
    } else {
        if (a.meta_.integral) f.meta_.integral = c * *a.meta_.integral;
        if (a.meta_.dist) {
            auto ad = a.meta_.dist;
            f.meta_.dist = [ad, ac](double t) { return ad(t / ac); };
            for (double j : a.meta_.dist_jumps) f.meta_.dist_jumps.push_back(j * ac);
        }
        if (a.meta_.ess_sup) f.meta_.ess_sup = ac * *a.meta_.ess_sup;
        for (const auto& [q, v] : a.meta_.lp) f.meta_.lp[q] = ac * v;
    }
    f.name_ = fmt_num(c) + "*" + a.name_;
    return f;
}

FuncExpr FuncExpr::abs_of(const FuncExpr& a) {
    FuncExpr f;
    auto body = std::make_shared<Body>();
    body->tag = Body::Tag::Abs;
    body->a = a.body_;
    f.body_ = std::move(body);
    f.domain_ = a.domain_;
    f.singular_ = a.singular_;
    for (auto& s : f.singular_)
        if (s.value) s.value = std::fabs(*s.value);
    f.meta_.dist = a.meta_.dist;
    f.meta_.dist_jumps = a.meta_.dist_jumps;
    f.meta_.ess_sup = a.meta_.ess_sup;
    f.meta_.lp = a.meta_.lp;
    f.name_ = "|" + a.name_ + "|";
    return f;
}

double FuncExpr::eval(std::span<const double> x) const {
    if (!domain_.contains(x)) throw EvalError("evaluation point outside the domain");
    if (is_singular_point(x)) throw EvalError("evaluation at a singular point");
    double v = body_->eval(x);
    if (!std::isfinite(v)) throw EvalError("non-finite function value");
    return v;
}

bool FuncExpr::is_singular_point(std::span<const double> x) const {
    for (const auto& s : singular_) {
        if (s.point.size() != x.size()) continue;
        bool same = true;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] != s.point[i]) {
                same = false;
                break;
            }
        if (same) return true;
    }
    return false;
}

FuncExpr FuncExpr::named(std::string n) const {
    FuncExpr f = *this;
    f.name_ = std::move(n);
    return f;
}

FuncExpr FuncExpr::with_meta(Metadata m) const {
    FuncExpr f = *this;
    f.meta_ = std::move(m);
    return f;
}

} // namespace hko
