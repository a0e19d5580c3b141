#pragma once

#include <string>
#include <vector>

#include "hko/corpus.hpp"

namespace hko {

struct VerifyOptions {
    double integrator_tol = 1e-4;
    double norm_rel_tol = 1e-5;
};

// One property instance. Asserted records pass iff slack = lhs - rhs is at
// most the declared tolerance; report-only records are measurements and
// never fail (though a computation error still surfaces as "error").
struct CheckRecord {
    std::string id;
    std::string inputs;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    double tolerance = 0.0;
    std::string verdict;   // "pass" | "fail" | "error"
    bool report_only = false;
    std::string note;
};

struct VerifyReport {
    std::string suite;
    std::vector<CheckRecord> checks;

    int count(const std::string& verdict) const;
    bool all_passed() const;            // no fail and no error
    std::string to_json_text() const;   // byte-stable across runs
    std::string to_text() const;
};

VerifyReport check_weak_le_strong(const Corpus& c, const VerifyOptions& opt = {});
VerifyReport check_indicator_formula(const Corpus& c, const VerifyOptions& opt = {});
VerifyReport check_holder(const Corpus& c, const VerifyOptions& opt = {});
VerifyReport check_triangle_weak(const Corpus& c, const VerifyOptions& opt = {});
VerifyReport check_dominance_equivalence(const Corpus& c, const VerifyOptions& opt = {});
VerifyReport check_l1_embedding(const Corpus& c, const VerifyOptions& opt = {});
VerifyReport check_convergence_in_measure(const Corpus& c, const VerifyOptions& opt = {});

// Canonical suite order; "all" expands to exactly this list.
const std::vector<std::string>& suite_names();
VerifyReport run_suites(const Corpus& c, const std::vector<std::string>& names,
                        const VerifyOptions& opt = {});

} // namespace hko
