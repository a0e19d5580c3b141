#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hko/box.hpp"
#include "hko/expr.hpp"

namespace hko {

// A point where the function is undefined. `value` is the value a Riemann
// sum may use if the point ends up as a tag; absent means tagging there is
// an error (the integrator always pins such tags to contribution 0).
struct SingularPoint {
    std::vector<double> point;
    std::optional<double> value;
};

// Optional exact facts about a function, used as oracles and by the exact
// distribution-function path. Everything refers to the function restricted
// to its domain box.
struct Metadata {
    std::optional<double> integral;              // exact integral over the domain
    std::function<double(double)> dist;          // t >= 0 -> |{ |f| > t }|, exact
    std::vector<double> dist_jumps;              // discontinuity locations of dist
    std::optional<double> ess_sup;               // exact essential sup of |f|
    std::map<int, double> lp;                    // exact L^p norms, keyed by p
};

// An evaluable function on a box: either a parsed expression, a named
// builtin, or a pointwise combination of other functions. Immutable.
class FuncExpr {
  public:
    FuncExpr(ExprPtr body, Box domain, std::vector<SingularPoint> singular = {});

    // builtins (all carry whatever exact metadata their shape admits)
    static FuncExpr indicator(const Box& support, const Box& domain, double value = 1.0);
    static FuncExpr power(double p, const Box& domain);     // |x1|^p, 1-D
    static FuncExpr linear(const Box& domain);              // x1, 1-D
    static FuncExpr constant(double c, const Box& domain);
    static FuncExpr osc_deriv(const Box& domain);           // d/dx [x^2 sin(1/x^2)], 1-D
    static FuncExpr piecewise_const(std::vector<std::pair<Box, double>> pieces, const Box& domain);

    // pointwise combinators (domains must match exactly)
    static FuncExpr sum(const FuncExpr& a, const FuncExpr& b);
    static FuncExpr product(const FuncExpr& a, const FuncExpr& b);
    static FuncExpr scaled(const FuncExpr& a, double c);
    static FuncExpr abs_of(const FuncExpr& a);

    // Evaluate at a point of the domain; throws EvalError outside the
    // domain, at singular points, and on non-finite results.
    double eval(std::span<const double> x) const;

    const Box& domain() const { return domain_; }
    const std::vector<SingularPoint>& singular() const { return singular_; }
    const Metadata& meta() const { return meta_; }

    const std::string& name() const { return name_; }
    FuncExpr named(std::string n) const;       // copy with a new display name

    // Copy with the given exact facts attached. The caller asserts their
    // consistency with the body (the test suite cross-checks by sampling).
    FuncExpr with_meta(Metadata m) const;

    // true if x equals one of the singular points
    bool is_singular_point(std::span<const double> x) const;

  private:
    struct Body;
    FuncExpr() = default;

    std::shared_ptr<const Body> body_;
    Box domain_;
    std::vector<SingularPoint> singular_;
    Metadata meta_;
    std::string name_ = "f";
};

// Exact antiderivative of osc_deriv: F(x) = x^2 sin(1/x^2), F(0) = 0.
double osc_antiderivative(double x);

} // namespace hko
