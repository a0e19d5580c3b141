#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "hko/young.hpp"

using hko::ConjugateGrid;
using hko::SpecError;
using hko::YoungFn;

namespace {

YoungFn quartic_table() {
    // samples of t^2 + t^4 on a tenth-of-a-decade grid, same shape the
    // default corpus uses
    std::vector<std::pair<double, double>> nodes;
    for (int i = 0; i <= 160; ++i) {
        double t = std::pow(10.0, -9.0 + 0.1 * i);
        nodes.push_back({t, t * t + t * t * t * t});
    }
    return YoungFn::table(std::move(nodes), true);
}

} // namespace

TEST_CASE("closed-form families evaluate exactly and are even") {
    auto p1 = YoungFn::power(1);
    auto p2 = YoungFn::power(2);
    auto p3 = YoungFn::power(3);
    auto p15 = YoungFn::power(1.5);
    auto sp = YoungFn::scaled_power(2, 0.5);
    auto em = YoungFn::expm();
    auto lg = YoungFn::log1p_fn();

    CHECK(p1(5.0) == 5.0);
    CHECK(p2(3.0) == 9.0);
    CHECK(p2(-3.0) == 9.0);
    CHECK(p3(2.0) == 8.0);
    CHECK(p15(4.0) == 8.0);
    CHECK(sp(2.0) == 2.0);
    CHECK(sp(-2.0) == 2.0);

    CHECK(p1(0.0) == 0.0);
    CHECK(p2(0.0) == 0.0);
    CHECK(em(0.0) == 0.0);
    CHECK(lg(0.0) == 0.0);

    CHECK(em(0.6931471805599453) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(em(1.0) == doctest::Approx(1.718281828459045).epsilon(1e-14));
    CHECK(em(-1.0) == em(1.0));
    CHECK(lg(1.718281828459045) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lg(1.0) == doctest::Approx(0.6931471805599453).epsilon(1e-14));
    CHECK(lg(-1.0) == lg(1.0));

    CHECK(p2.convex());
    CHECK(sp.convex());
    CHECK(em.convex());
    CHECK_FALSE(lg.convex());
}

TEST_CASE("table family interpolates chords and extrapolates the last slope") {
    auto tab = YoungFn::table({{1.0, 1.0}, {2.0, 4.0}}, true);
    CHECK(tab(0.0) == 0.0);
    CHECK(tab(0.5) == 0.5);   // chord from the implicit (0,0) anchor
    CHECK(tab(1.0) == 1.0);
    CHECK(tab(1.5) == 2.5);
    CHECK(tab(2.0) == 4.0);
    CHECK(tab(3.0) == 7.0);   // last-segment slope 3 continues
    CHECK(tab(-0.5) == 0.5);
    CHECK_FALSE(YoungFn::table({{1.0, 1.0}}, false).convex());

    auto single = YoungFn::table({{2.0, 3.0}}, true);
    CHECK(single(1.0) == 1.5);
    CHECK(single(4.0) == 6.0); // only one node: reuse the origin slope
}

TEST_CASE("family constructors validate their parameters") {
    CHECK_THROWS_AS(YoungFn::power(0.5), SpecError);
    CHECK_THROWS_AS(YoungFn::power(0.0), SpecError);
    CHECK_THROWS_AS(YoungFn::power(std::numeric_limits<double>::quiet_NaN()), SpecError);
    CHECK_THROWS_AS(YoungFn::scaled_power(0.5, 1.0), SpecError);
    CHECK_THROWS_AS(YoungFn::scaled_power(1.0, 0.0), SpecError);
    CHECK_THROWS_AS(YoungFn::scaled_power(1.0, -2.0), SpecError);

    CHECK_THROWS_AS(YoungFn::table({}, true), SpecError);
    CHECK_THROWS_AS(YoungFn::table({{-1.0, 1.0}}, true), SpecError);
    CHECK_THROWS_AS(YoungFn::table({{0.0, 1.0}}, true), SpecError);
    CHECK_THROWS_AS(YoungFn::table({{1.0, 1.0}, {1.0, 2.0}}, true), SpecError);
    CHECK_THROWS_AS(YoungFn::table({{2.0, 1.0}, {1.0, 2.0}}, true), SpecError);
    CHECK_THROWS_AS(YoungFn::table({{1.0, 2.0}, {2.0, 1.0}}, true), SpecError);
    CHECK_THROWS_AS(YoungFn::table({{1.0, 0.0}, {2.0, 0.0}}, true), SpecError);
    CHECK_THROWS_AS(YoungFn::table({{1.0, std::numeric_limits<double>::infinity()}}, true),
                    SpecError);
}

TEST_CASE("describe strings are stable") {
    CHECK(YoungFn::power(2).describe() == "power(2)");
    CHECK(YoungFn::power(1.5).describe() == "power(1.5)");
    CHECK(YoungFn::scaled_power(2, 0.5).describe() == "scaled_power(2,0.5)");
    CHECK(YoungFn::expm().describe() == "expm");
    CHECK(YoungFn::log1p_fn().describe() == "log1p");
    CHECK(YoungFn::table({{1.0, 1.0}, {2.0, 4.0}, {4.0, 20.0}}, true).describe() == "table[3]");
}

TEST_CASE("y_inverse closed forms") {
    CHECK(hko::y_inverse(YoungFn::power(2), 4.0) == 2.0);
    CHECK(hko::y_inverse(YoungFn::power(3), 8.0) == 2.0);
    CHECK(hko::y_inverse(YoungFn::scaled_power(2, 0.5), 2.0) == 2.0);
    CHECK(hko::y_inverse(YoungFn::expm(), 1.0) ==
          doctest::Approx(0.6931471805599453).epsilon(1e-14));
    CHECK(hko::y_inverse(YoungFn::log1p_fn(), 1.0) ==
          doctest::Approx(1.718281828459045).epsilon(1e-14));
    CHECK(hko::y_inverse(YoungFn::power(2), 0.0) == 0.0);
    CHECK_THROWS_AS(hko::y_inverse(YoungFn::power(2), -1.0), SpecError);
}

TEST_CASE("y_inverse round trips through evaluation") {
    auto roundtrip = [](const YoungFn& th, double u_lo, double u_hi, int n) {
        for (int i = 0; i < n; ++i) {
            double u = u_lo * std::pow(u_hi / u_lo, double(i) / (n - 1));
            double t = hko::y_inverse(th, u);
            CHECK(th(t) == doctest::Approx(u).epsilon(1e-9));
        }
    };
    roundtrip(YoungFn::power(1), 1e-8, 1e8, 33);
    roundtrip(YoungFn::power(1.5), 1e-8, 1e8, 33);
    roundtrip(YoungFn::power(2), 1e-8, 1e8, 33);
    roundtrip(YoungFn::power(3), 1e-8, 1e8, 33);
    roundtrip(YoungFn::scaled_power(2, 0.5), 1e-8, 1e8, 33);
    roundtrip(YoungFn::expm(), 1e-8, 1e8, 33);
    roundtrip(YoungFn::log1p_fn(), 1e-3, 300.0, 25);
    roundtrip(quartic_table(), 1e-6, 1e6, 25);
}

TEST_CASE("y_inverse bisects tables through chords and the extrapolated tail") {
    auto tab = YoungFn::table({{1.0, 1.0}, {2.0, 4.0}, {4.0, 20.0}}, true);
    CHECK(hko::y_inverse(tab, 0.5) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(hko::y_inverse(tab, 10.0) == doctest::Approx(2.75).epsilon(1e-9));
    CHECK(hko::y_inverse(tab, 36.0) == doctest::Approx(6.0).epsilon(1e-9));
}

TEST_CASE("complementary of power(2) is s^2/4 on the sampled grid") {
    auto phi = hko::complementary(YoungFn::power(2));
    CHECK(phi(1.0) == doctest::Approx(0.25).epsilon(2e-3));
    CHECK(phi(2.0) == doctest::Approx(1.0).epsilon(2e-3));
    CHECK(phi(0.1) == doctest::Approx(0.0025).epsilon(2e-3));
    CHECK(phi(100.0) == doctest::Approx(2500.0).epsilon(2e-3));
}

TEST_CASE("complementary matches hand-computed conjugates at s=1") {
    auto phi_half = hko::complementary(YoungFn::scaled_power(2, 0.5));
    CHECK(phi_half(1.0) == doctest::Approx(0.5).epsilon(2e-3));

    // sup_x (x - x^3) attained at x = 1/sqrt(3)
    auto phi_cubic = hko::complementary(YoungFn::power(3));
    CHECK(phi_cubic(1.0) == doctest::Approx(0.3849001794597505).epsilon(2e-3));
}

TEST_CASE("complementary satisfies the pointwise product inequality") {
    auto th = YoungFn::power(3);
    auto phi = hko::complementary(th);
    const double xs[] = {0.1, 0.5, 1.0, 2.0, 10.0};
    const double ss[] = {1e-3, 0.1, 1.0, 10.0, 1e3};
    for (double x : xs)
        for (double s : ss) {
            double rhs = th(x) + phi(s);
            CHECK(x * s <= rhs * (1.0 + 1e-6) + 1e-9);
        }
}

TEST_CASE("conjugating twice recovers power(2) to a couple percent") {
    auto phi = hko::complementary(YoungFn::power(2));
    // phi's table is asymptotically linear past s = 1e4, so keep the second
    // conjugation below that slope where the transform is finite
    auto psi = hko::complementary(phi, ConjugateGrid{1e-2, 1e3, 257});
    for (int i = 0; i <= 8; ++i) {
        double x = std::pow(10.0, -2.0 + 0.5 * i);
        CHECK(psi(x) == doctest::Approx(x * x).epsilon(0.02));
    }
}

TEST_CASE("complementary rejects degenerate inputs") {
    // conjugate of t -> |t| is infinite past slope 1
    CHECK_THROWS_AS(hko::complementary(YoungFn::power(1)), SpecError);
    // concave profile is not admissible
    CHECK_THROWS_AS(hko::complementary(YoungFn::log1p_fn()), SpecError);
    CHECK_THROWS_AS(hko::complementary(YoungFn::power(2), ConjugateGrid{1.0, 1.0, 16}), SpecError);
    CHECK_THROWS_AS(hko::complementary(YoungFn::power(2), ConjugateGrid{0.0, 10.0, 16}), SpecError);
    CHECK_THROWS_AS(hko::complementary(YoungFn::power(2), ConjugateGrid{1.0, 10.0, 1}), SpecError);
}

TEST_CASE("doubling classification on power-like families") {
    auto r1 = hko::is_delta2(YoungFn::power(1));
    CHECK(r1.holds);
    CHECK(r1.witness_sup == doctest::Approx(2.0).epsilon(1e-12));

    auto r2 = hko::is_delta2(YoungFn::power(2));
    CHECK(r2.holds);
    CHECK(r2.witness_sup == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(r2.extended_sup <= r2.witness_sup * (1.0 + 1e-6) + 1e-12);

    auto r3 = hko::is_delta2(YoungFn::power(3));
    CHECK(r3.holds);
    CHECK(r3.witness_sup == doctest::Approx(8.0).epsilon(1e-12));

    auto rs = hko::is_delta2(YoungFn::scaled_power(2, 0.5));
    CHECK(rs.holds);
    CHECK(rs.witness_sup == doctest::Approx(4.0).epsilon(1e-12));

    auto rt = hko::is_delta2(quartic_table());
    CHECK(rt.holds);
    CHECK(rt.witness_sup > 4.0);
    CHECK(rt.witness_sup < 16.5);
}

TEST_CASE("doubling fails for the exponential family and holds for log1p") {
    auto re = hko::is_delta2(YoungFn::expm());
    CHECK_FALSE(re.holds);
    CHECK(std::isinf(re.extended_sup));

    // ratio log1p(2x)/log1p(x) peaks at the left end of the witness window
    auto rl = hko::is_delta2(YoungFn::log1p_fn());
    CHECK(rl.holds);
    CHECK(rl.witness_sup == doctest::Approx(1.5849625007211562).epsilon(1e-12));
}

TEST_CASE("shrinking-constant classification") {
    auto rp = hko::is_delta_prime(YoungFn::power(2));
    CHECK(rp.holds);
    REQUIRE(rp.witnesses.size() == 20);
    CHECK(rp.witnesses[0].k == 0.5);
    CHECK(rp.witnesses[0].sup_ratio == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(rp.min_sup < 1e-3);

    auto re = hko::is_delta_prime(YoungFn::expm());
    CHECK(re.holds);
    CHECK(re.min_sup < 1e-3);

    auto rl = hko::is_delta_prime(YoungFn::log1p_fn());
    CHECK_FALSE(rl.holds);
    REQUIRE(rl.witnesses.size() == 20);
    CHECK(rl.witnesses[0].k == 0.5);
    CHECK(rl.max_sup >= 0.99);
    CHECK(rl.min_sup >= 1e-3);
    // the near-1 ratios only show up far beyond the double-precision sweet spot
    CHECK(rl.witnesses[0].argmax_t >= 1e299);
    CHECK(rl.witnesses[0].ratio_at_1e6 == doctest::Approx(0.94983).epsilon(1e-3));
}

TEST_CASE("domination constants on the half-power comparison grid") {
    auto p1 = YoungFn::power(1);
    auto p2 = YoungFn::power(2);
    auto sp12 = YoungFn::scaled_power(1, 2);
    auto sp2h = YoungFn::scaled_power(2, 0.5);
    auto lg = YoungFn::log1p_fn();
    auto t24 = quartic_table();

    auto c = hko::dominates(p1, sp12);
    REQUIRE(c.has_value());
    CHECK(*c == 0.5);

    c = hko::dominates(sp2h, p2);
    REQUIRE(c.has_value());
    CHECK(*c == doctest::Approx(0.7071067811865476).epsilon(1e-12));

    c = hko::dominates(p2, t24);
    REQUIRE(c.has_value());
    CHECK(*c == 1.0);

    c = hko::dominates(p2, p2);
    REQUIRE(c.has_value());
    CHECK(*c == 1.0);

    c = hko::dominates(lg, p1);
    REQUIRE(c.has_value());
    CHECK(*c == 1.0);

    CHECK_FALSE(hko::dominates(p1, p2).has_value());
    CHECK_FALSE(hko::dominates(p2, p1).has_value());
}
