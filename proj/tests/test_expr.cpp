#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "hko/errors.hpp"
#include "hko/expr.hpp"
#include "hko/funcspec.hpp"

using namespace hko;

namespace {

double ev(const std::string& s, std::vector<double> x, int dim = -1) {
    // parse_expr rejects dim < 1, so constant expressions parse as 1-D
    if (dim < 0) dim = std::max(1, static_cast<int>(x.size()));
    return eval_expr(*parse_expr(s, dim), x);
}

} // namespace

TEST_CASE("arithmetic and precedence") {
    CHECK(ev("1+2*3", {}) == doctest::Approx(7.0).epsilon(1e-15));
    CHECK(ev("2-3-4", {}) == doctest::Approx(-5.0).epsilon(1e-15));
    CHECK(ev("12/4/3", {}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(ev("2^3^2", {}) == doctest::Approx(512.0).epsilon(1e-15)); // right associative
    CHECK(ev("2^-1", {}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ev("(1+2)*3", {}) == doctest::Approx(9.0).epsilon(1e-15));
    CHECK(ev("min(3, max(1, 2))", {}) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(ev("abs(0-2.5)", {}) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(ev("1.5e2", {}) == doctest::Approx(150.0).epsilon(1e-15));
}

TEST_CASE("variables") {
    CHECK(ev("x1", {3.0}) == 3.0);
    CHECK(ev("x1*x2", {3.0, 4.0}) == 12.0);
    CHECK_THROWS_AS(parse_expr("x3", 2), ParseError);
    CHECK_THROWS_AS(parse_expr("x0", 2), ParseError);
    CHECK_THROWS_AS(parse_expr("y1", 2), ParseError);
}

TEST_CASE("oscillatory derivative values") {
    // x^2*sin(1/x^2) has derivative 2x*sin(1/x^2) - (2/x)*cos(1/x^2)
    CHECK(ev("x1^2*sin(1/x1^2)", {1.0}) == doctest::Approx(std::sin(1.0)).epsilon(1e-15));

    FuncExpr osc = FuncExpr::osc_deriv(Box({0.1}, {1.0}));
    std::vector<double> at{1.0};
    CHECK(osc.eval(at) == doctest::Approx(0.6023373578795136).epsilon(1e-14));

    // finite-difference cross-check of the derivative identity
    auto F = [](double x) { return x * x * std::sin(1.0 / (x * x)); };
    for (double x : {0.2, 0.5, 0.9}) {
        double h = 1e-6;
        double fd = (F(x + h) - F(x - h)) / (2.0 * h);
        std::vector<double> pt{x};
        CHECK(osc.eval(pt) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("parse errors carry offsets") {
    try {
        parse_expr("1+", 1);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("offset 2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_expr("", 1), ParseError);
    CHECK_THROWS_AS(parse_expr("sin()", 1), ParseError);
    CHECK_THROWS_AS(parse_expr("sin(1,2)", 1), ParseError);
    CHECK_THROWS_AS(parse_expr("min(1)", 1), ParseError);
    CHECK_THROWS_AS(parse_expr("bogus(1)", 1), ParseError);
    CHECK_THROWS_AS(parse_expr("1 2", 1), ParseError);
    CHECK_THROWS_AS(parse_expr("(1", 1), ParseError);
    CHECK_THROWS_AS(parse_expr("1..2", 1), ParseError);
}

TEST_CASE("evaluation domain errors") {
    CHECK_THROWS_AS(ev("1/x1", {0.0}), EvalError);
    CHECK_THROWS_AS(ev("log(x1)", {0.0}), EvalError);
    CHECK_THROWS_AS(ev("log(0-1)", {}), EvalError);
    CHECK_THROWS_AS(ev("(0-1)^0.5", {}), EvalError);
    CHECK_THROWS_AS(ev("exp(x1)", {1e6}), EvalError); // overflows to non-finite
}

TEST_CASE("print/parse round trip is evaluation-exact") {
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);

    std::vector<std::string> exprs = {
        "x1^2*sin(1/x1^2)",
        "1+2*x1-x2/3",
        "-x1^2",
        "(x1+x2)*(x1-x2)",
        "2^x1^2",
        "min(x1, max(x2, 0.5))*abs(x1-0.25)",
        "exp(x1)*log(x2+3)",
        "0.1234567890123456789*x1",
        "x1/x2/x1*x2",
        "-(x1+1)*-(x2+1)",
    };
    for (const std::string& s : exprs) {
        ExprPtr a = parse_expr(s, 2);
        std::string printed = print_expr(a);
        ExprPtr b = parse_expr(printed, 2);
        CHECK(print_expr(b) == printed); // printing is a fixed point
        for (int i = 0; i < 100; ++i) {
            std::vector<double> x{coord(rng), coord(rng)};
            double va, vb;
            bool ta = false, tb = false;
            try {
                va = eval_expr(*a, x);
            } catch (const EvalError&) {
                ta = true;
                va = 0;
            }
            try {
                vb = eval_expr(*b, x);
            } catch (const EvalError&) {
                tb = true;
                vb = 0;
            }
            REQUIRE(ta == tb);
            if (!ta) REQUIRE(va == vb); // bit-exact
        }
    }
}

TEST_CASE("random expression fuzz round trip") {
    std::mt19937 rng(987654321);
    std::uniform_int_distribution<int> pick(0, 9);
    std::uniform_real_distribution<double> num(-3.0, 3.0);
    std::uniform_real_distribution<double> coord(-1.5, 1.5);

    // random tree builder over the full grammar
    std::function<ExprPtr(int)> gen = [&](int depth) -> ExprPtr {
        auto node = std::make_shared<ExprNode>();
        int k = depth <= 0 ? pick(rng) % 2 : pick(rng);
        switch (k) {
        case 0:
            node->kind = ExprNode::Kind::Number;
            node->number = num(rng);
            break;
        case 1:
            node->kind = ExprNode::Kind::Var;
            node->var = pick(rng) % 2;
            break;
        case 2:
            node->kind = ExprNode::Kind::Neg;
            node->kids = {gen(depth - 1)};
            break;
        case 3:
            node->kind = ExprNode::Kind::Add;
            node->kids = {gen(depth - 1), gen(depth - 1)};
            break;
        case 4:
            node->kind = ExprNode::Kind::Sub;
            node->kids = {gen(depth - 1), gen(depth - 1)};
            break;
        case 5:
            node->kind = ExprNode::Kind::Mul;
            node->kids = {gen(depth - 1), gen(depth - 1)};
            break;
        case 6:
            node->kind = ExprNode::Kind::Div;
            node->kids = {gen(depth - 1), gen(depth - 1)};
            break;
        case 7:
            node->kind = ExprNode::Kind::Pow;
            node->kids = {gen(depth - 1), gen(depth - 1)};
            break;
        case 8: {
            node->kind = ExprNode::Kind::Call;
            const char* fns[] = {"sin", "cos", "exp", "abs"};
            node->call = fns[pick(rng) % 4];
            node->kids = {gen(depth - 1)};
            break;
        }
        default: {
            node->kind = ExprNode::Kind::Call;
            node->call = pick(rng) % 2 ? "min" : "max";
            node->kids = {gen(depth - 1), gen(depth - 1)};
            break;
        }
        }
        return node;
    };

    for (int t = 0; t < 120; ++t) {
        ExprPtr e = gen(3);
        std::string printed = print_expr(e);
        ExprPtr back;
        try {
            back = parse_expr(printed, 2);
        } catch (const ParseError&) {
            CAPTURE(printed);
            FAIL("printer produced unparseable text");
            continue;
        }
        for (int i = 0; i < 20; ++i) {
            std::vector<double> x{coord(rng), coord(rng)};
            double va, vb;
            bool ta = false, tb = false;
            try {
                va = eval_expr(*e, x);
            } catch (const EvalError&) {
                ta = true;
                va = 0;
            }
            try {
                vb = eval_expr(*back, x);
            } catch (const EvalError&) {
                tb = true;
                vb = 0;
            }
            CAPTURE(printed);
            REQUIRE(ta == tb);
            if (!ta) REQUIRE(va == vb);
        }
    }
}

TEST_CASE("function wrapper guards domain and singular points") {
    Box dom({0.0}, {1.0});
    FuncExpr f(parse_expr("1/x1", 1), dom, {SingularPoint{{0.0}, 5.0}});
    std::vector<double> inside{0.5};
    CHECK(f.eval(inside) == doctest::Approx(2.0));

    // eval always refuses singular points; the declared value is metadata
    // for the integrator, which reads it off singular() when a tag lands
    // there (covered by the Riemann sum tests).
    std::vector<double> at_sing{0.0};
    CHECK(f.is_singular_point(at_sing));
    CHECK_THROWS_AS(f.eval(at_sing), EvalError);
    REQUIRE(f.singular().size() == 1);
    CHECK(f.singular()[0].value == 5.0);

    std::vector<double> outside{2.0};
    CHECK_THROWS_AS(f.eval(outside), EvalError);

    FuncExpr g(parse_expr("1/x1", 1), dom); // no declared value at the pole
    CHECK_FALSE(g.is_singular_point(at_sing));
    CHECK_THROWS_AS(g.eval(at_sing), EvalError);
}
