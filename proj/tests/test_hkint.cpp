#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hko/corpus.hpp"
#include "hko/hkint.hpp"

using hko::Box;
using hko::FuncExpr;
using hko::Gauge;
using hko::IntegrateOptions;
using hko::TaggedCell;
using hko::TaggedPartition;

namespace {

TaggedPartition two_cell_unit() {
    TaggedPartition p;
    p.parent = Box::interval(0.0, 1.0);
    p.cells.push_back({Box::interval(0.0, 0.5), {0.25}});
    p.cells.push_back({Box::interval(0.5, 1.0), {0.75}});
    return p;
}

} // namespace

TEST_CASE("gauges evaluate as declared") {
    auto gc = Gauge::constant(0.3);
    double x0[] = {0.123};
    CHECK(gc(x0) == 0.3);

    auto gr = Gauge::radial({0.5}, 2.0, 1e-3);
    double x1[] = {0.75};
    double x2[] = {0.5};
    CHECK(gr(x1) == 0.5);
    CHECK(gr(x2) == 1e-3);

    auto gt = Gauge::tabulated(Box::interval(0.0, 1.0), 1, {0.1, 0.2});
    double x3[] = {0.25};
    double x4[] = {0.75};
    CHECK(gt(x3) == 0.1);
    CHECK(gt(x4) == 0.2);

    CHECK_THROWS_AS(Gauge::constant(0.0), hko::SpecError);
    CHECK_THROWS_AS(Gauge::radial({0.0}, 1.0, 0.0), hko::SpecError);
    CHECK_THROWS_AS(Gauge::tabulated(Box::interval(0.0, 1.0), 1, {0.1}), hko::SpecError);
    CHECK_THROWS_AS(Gauge::tabulated(Box::interval(0.0, 1.0), 1, {0.1, -0.2}), hko::SpecError);
}

TEST_CASE("fineness is a per-axis reach test at the tag") {
    auto p = two_cell_unit();
    p.validate();
    CHECK(is_delta_fine(p, Gauge::constant(0.25)));
    CHECK(is_delta_fine(p, Gauge::constant(0.3)));
    CHECK_FALSE(is_delta_fine(p, Gauge::constant(0.2)));

    // an edge tag needs to reach across the whole cell
    TaggedPartition q;
    q.parent = Box::interval(0.0, 1.0);
    q.cells.push_back({Box::interval(0.0, 0.5), {0.0}});
    q.cells.push_back({Box::interval(0.5, 1.0), {1.0}});
    q.validate();
    CHECK(is_delta_fine(q, Gauge::constant(0.5)));
    CHECK_FALSE(is_delta_fine(q, Gauge::constant(0.49)));
}

TEST_CASE("partition validation rejects malformed inputs") {
    auto ok = two_cell_unit();
    CHECK_NOTHROW(ok.validate());

    auto outside = two_cell_unit();
    outside.cells[1].tag = {0.25}; // not in [0.5, 1]
    CHECK_THROWS_AS(outside.validate(), hko::SpecError);

    auto overlapping = two_cell_unit();
    overlapping.cells[1].cell = Box::interval(0.25, 1.0);
    CHECK_THROWS_AS(overlapping.validate(), hko::SpecError);

    auto gap = two_cell_unit();
    gap.cells[1].cell = Box::interval(0.6, 1.0);
    gap.cells[1].tag = {0.7};
    CHECK_THROWS_AS(gap.validate(), hko::SpecError);
}

TEST_CASE("cousin construction is fine for assorted gauges") {
    std::mt19937 rng(20240817u);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    auto check_box = [&](const Box& box) {
        int n = box.dim();
        for (int rep = 0; rep < 4; ++rep) {
            auto part = cousin_partition(box, Gauge::constant(0.05 + 0.45 * u01(rng)));
            part.validate();
            CHECK(is_delta_fine(part, Gauge::constant(0.5)));

            std::vector<double> c(static_cast<std::size_t>(n));
            for (auto& ci : c) ci = u01(rng);
            auto gr = Gauge::radial(c, 0.5 + 1.5 * u01(rng), 1e-3 + 1e-2 * u01(rng));
            part = cousin_partition(box, gr);
            part.validate();
            CHECK(is_delta_fine(part, gr));

            int level = 2;
            std::size_t cells = 1;
            for (int i = 0; i < n; ++i) cells *= 4;
            std::vector<double> vals(cells);
            for (auto& v : vals) v = 0.05 + 0.55 * u01(rng);
            auto gt = Gauge::tabulated(box, level, vals);
            part = cousin_partition(box, gt);
            part.validate();
            CHECK(is_delta_fine(part, gt));
        }
    };
    check_box(Box::interval(0.0, 1.0));
    check_box(Box({0.0, 0.0}, {2.0, 1.0}));
}

TEST_CASE("cousin construction survives a gauge pinching toward a point") {
    // scale < 1 defeats far-corner tags, forcing geometric rings around the
    // center down to the floor
    auto g = Gauge::radial({0.5}, 0.25, 1e-6);
    auto part = cousin_partition(Box::interval(0.0, 1.0), g);
    part.validate();
    CHECK(is_delta_fine(part, g));
    CHECK(part.cells.size() >= 20);
    CHECK(part.cells.size() < 4000);
}

TEST_CASE("cousin construction reports an exhausted depth budget") {
    CHECK_THROWS_AS(cousin_partition(Box::interval(0.0, 1.0), Gauge::constant(1e-20)),
                    hko::IntegrationError);
}

TEST_CASE("riemann sums use tags, volumes and declared singular values") {
    auto lin = FuncExpr::linear(Box::interval(0.0, 1.0));
    CHECK(riemann_sum(lin, two_cell_unit()) == 0.5);

    auto one = FuncExpr::constant(1.0, Box::interval(0.0, 1.0));
    CHECK(riemann_sum(one, two_cell_unit()) == 1.0);

    // tag sitting exactly on a declared singular point uses the declared value
    auto body = hko::parse_expr("1/x1", 1);
    FuncExpr f(std::move(body), Box::interval(-1.0, 1.0),
               {hko::SingularPoint{{0.0}, 7.0}});
    TaggedPartition p;
    p.parent = Box::interval(-1.0, 1.0);
    p.cells.push_back({Box::interval(-1.0, 0.5), {0.0}});
    p.cells.push_back({Box::interval(0.5, 1.0), {1.0}});
    CHECK(riemann_sum(f, p) == doctest::Approx(7.0 * 1.5 + 1.0 * 0.5));

    // without a declared value the same tag is an evaluation error
    FuncExpr g(hko::parse_expr("1/x1", 1), Box::interval(-1.0, 1.0),
               {hko::SingularPoint{{0.0}, std::nullopt}});
    CHECK_THROWS_AS(riemann_sum(g, p), hko::EvalError);
}

TEST_CASE("integration reproduces simple closed forms") {
    auto U = Box::interval(0.0, 1.0);
    auto lin = FuncExpr::linear(U);
    auto r = hk_integrate(lin, U, 1e-6);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(r.cells >= 1);

    Box U2({0.0, 0.0}, {2.0, 2.0});
    auto chi = FuncExpr::indicator(Box({0.0, 0.0}, {1.0, 1.0}), U2);
    auto r2 = hk_integrate(chi, U2, 1e-4);
    CHECK(r2.value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("integration of the oscillatory derivative hits its antiderivative") {
    auto f = FuncExpr::osc_deriv(Box::interval(0.0, 1.0));
    auto r = hk_integrate(f, Box::interval(0.0, 1.0), 1e-3);
    CHECK(std::fabs(r.value - 0.8414709848078965) <= 1e-3);
    CHECK(r.error_estimate <= 2e-3);

    // same integrand away from the singular point, tighter tolerance
    auto g = FuncExpr::osc_deriv(Box::interval(0.1, 1.0));
    double exact = hko::osc_antiderivative(1.0) - hko::osc_antiderivative(0.1);
    auto r2 = hk_integrate(g, Box::interval(0.1, 1.0), 1e-5);
    CHECK(std::fabs(r2.value - exact) <= 1e-4);
}

TEST_CASE("integration is linear within tolerance") {
    auto U = Box::interval(0.0, 1.0);
    auto f = FuncExpr::linear(U);
    auto g = FuncExpr::power(2.0, U);
    auto combo = FuncExpr::sum(FuncExpr::scaled(f, 2.0), FuncExpr::scaled(g, 3.0));
    double tol = 1e-5;
    double lhs = hk_integrate(combo, U, tol).value;
    double rhs = 2.0 * hk_integrate(f, U, tol).value + 3.0 * hk_integrate(g, U, tol).value;
    CHECK(std::fabs(lhs - rhs) <= 6.0 * tol);
}

TEST_CASE("integration is additive across a split of the box") {
    auto U = Box::interval(0.0, 1.0);
    auto g = FuncExpr::power(2.0, U);
    double tol = 1e-5;
    double whole = hk_integrate(g, U, tol).value;
    double left = hk_integrate(g, Box::interval(0.0, 0.5), tol).value;
    double right = hk_integrate(g, Box::interval(0.5, 1.0), tol).value;
    CHECK(std::fabs(whole - left - right) <= 3.0 * tol);
    CHECK(whole == doctest::Approx(1.0 / 3.0).epsilon(1e-4));
}

TEST_CASE("integration agrees with exact values across the default corpus") {
    auto corpus = hko::default_corpus();
    int checked = 0;
    for (const auto& nf : corpus.functions) {
        if (!nf.fn.meta().integral) continue;
        auto r = hk_integrate(nf.fn, nf.fn.domain(), 1e-3);
        INFO("function ", nf.key);
        CHECK(std::fabs(r.value - *nf.fn.meta().integral) <= r.error_estimate + 1e-9);
        CHECK(r.error_estimate <= 2e-3);
        ++checked;
    }
    CHECK(checked >= 10);
}

TEST_CASE("a tiny cell budget aborts instead of returning a bad value") {
    auto U = Box::interval(0.0, 1.0);
    auto g = FuncExpr::power(2.0, U);
    IntegrateOptions opt;
    opt.cell_budget = 4;
    CHECK_THROWS_AS(hk_integrate(g, U, 1e-10, opt), hko::IntegrationError);
}

TEST_CASE("partial-integral sup norm on showcase integrands") {
    auto U = Box::interval(0.0, 1.0);
    CHECK(hko::alexiewicz_norm(FuncExpr::linear(U), U, 1e-4) ==
          doctest::Approx(0.5).epsilon(1e-3));
    FuncExpr s(hko::parse_expr("sin(6.283185307179586*x1)", 1), U);
    CHECK(hko::alexiewicz_norm(s, U, 1e-3) ==
          doctest::Approx(0.3183098861837907).epsilon(5e-3));
    CHECK(hko::alexiewicz_norm(FuncExpr::constant(0.0, U), U, 1e-4) ==
          doctest::Approx(0.0).scale(1.0));
}
