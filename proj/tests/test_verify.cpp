#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "hko/verify.hpp"

namespace {

const hko::Corpus& corpus() {
    static hko::Corpus c = hko::default_corpus();
    return c;
}

void expect_clean(const hko::VerifyReport& rep, std::size_t min_checks) {
    CHECK(rep.checks.size() >= min_checks);
    CHECK(rep.count("error") == 0);
    for (const auto& r : rep.checks) {
        INFO(r.id, " [", r.inputs, "] lhs=", r.lhs, " rhs=", r.rhs, " slack=", r.slack,
             " tol=", r.tolerance, " note=", r.note);
        CHECK(r.verdict == "pass");
    }
}

} // namespace

TEST_CASE("weak norms stay below strong norms across the pair list") {
    auto rep = hko::check_weak_le_strong(corpus());
    expect_clean(rep, 20);
}

TEST_CASE("indicator norms match the inverse-formula values") {
    auto rep = hko::check_indicator_formula(corpus());
    expect_clean(rep, 30);
}

TEST_CASE("product integrals obey the two-norm bound") {
    auto rep = hko::check_holder(corpus());
    expect_clean(rep, 9);

    // the ratio-two pair is genuinely sharp: the integral doubles the
    // factor-free product of norms
    bool found = false;
    for (const auto& r : rep.checks) {
        if (!r.report_only || r.id.find("/sharp") == std::string::npos) continue;
        if (r.inputs.find("h=chi01 m=chi01 ") == std::string::npos) continue;
        if (r.inputs.find("scaled_power(2,0.5)") == std::string::npos) continue;
        found = true;
        CHECK(std::fabs(r.lhs / r.rhs - 2.0) <= 0.02);
    }
    CHECK(found);
}

TEST_CASE("weak norms of sums stay below the quasi-norm bound") {
    auto rep = hko::check_triangle_weak(corpus());
    expect_clean(rep, 8);

    bool found = false;
    for (const auto& r : rep.checks)
        if (r.id == "triangle_weak/max_K" && r.report_only) {
            found = true;
            CHECK(r.lhs <= 2.0 + 1e-9);
            CHECK(r.lhs >= 1.0 - 1e-9);
        }
    CHECK(found);
}

TEST_CASE("dominated young functions give nested weak spaces") {
    auto rep = hko::check_dominance_equivalence(corpus());
    expect_clean(rep, 6);

    bool witness = false;
    for (const auto& r : rep.checks)
        if (r.id.find("/witness") != std::string::npos) witness = true;
    CHECK(witness);
}

TEST_CASE("integrable functions embed into the weak space with constant bounds") {
    auto rep = hko::check_l1_embedding(corpus());
    expect_clean(rep, 10);
}

TEST_CASE("norm-null sequences converge in measure") {
    auto rep = hko::check_convergence_in_measure(corpus());
    expect_clean(rep, 6);
}

TEST_CASE("suite driver expands, deduplicates and rejects unknown names") {
    const auto& names = hko::suite_names();
    REQUIRE(names.size() == 7);

    auto rep = hko::run_suites(corpus(), {"all"});
    CHECK(rep.suite == "all");
    CHECK(rep.all_passed());
    CHECK(rep.count("fail") == 0);
    CHECK(rep.count("error") == 0);
    CHECK(rep.count("pass") == static_cast<int>(rep.checks.size()));

    auto one = hko::run_suites(corpus(), {"holder", "holder"});
    CHECK(one.suite == "holder");
    int holder_checks = 0;
    for (const auto& r : one.checks)
        if (r.id.rfind("holder", 0) == 0) ++holder_checks;
    CHECK(holder_checks == static_cast<int>(one.checks.size()));

    CHECK_THROWS_AS(hko::run_suites(corpus(), {"nope"}), hko::SpecError);
}

TEST_CASE("reports are byte-stable across repeated runs") {
    auto a = hko::run_suites(corpus(), {"weak_le_strong", "indicator_formula"});
    auto b = hko::run_suites(corpus(), {"weak_le_strong", "indicator_formula"});
    CHECK(a.to_json_text() == b.to_json_text());
    CHECK(a.to_json_text().size() > 100);
    CHECK(a.suite == "weak_le_strong,indicator_formula");
}
