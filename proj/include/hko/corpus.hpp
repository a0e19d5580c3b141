#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hko/box.hpp"
#include "hko/funcspec.hpp"
#include "hko/young.hpp"

namespace hko {

struct NamedFn {
    std::string key;
    FuncExpr fn;
};

struct NamedYoung {
    std::string key;
    YoungFn fn;
    // (r, s) with theta(t) >= r*t - s for all t >= 0; declared only for
    // convex entries and consumed by the L1 embedding check.
    std::optional<std::pair<double, double>> minorant;
};

// The example set the verification suites run over. Pair lists refer to
// entries by key so a corpus loaded from a manifest stays self-describing.
struct Corpus {
    std::vector<NamedFn> functions;
    std::vector<NamedYoung> youngs;

    std::vector<std::pair<std::string, std::string>> norm_pairs;   // (fn, young)
    std::vector<std::array<std::string, 3>> triangle_pairs;        // (f, g, young)
    std::vector<std::array<std::string, 3>> holder_pairs;          // (h, m, young)

    struct DominancePair {
        std::string y1, y2;
        std::optional<double> expect_c;   // absent: dominance expected to fail
    };
    std::vector<DominancePair> dominance_pairs;

    struct IndicatorCase {
        int n;            // ambient dimension
        double radius;    // max-norm ball radius
        std::string young;
    };
    std::vector<IndicatorCase> indicator_cases;

    struct ConvergenceSeq {
        std::string h;    // base function; the sequence is h + (1/n) * chi_ball
        Box ball;
        std::string young;
    };
    std::vector<ConvergenceSeq> convergence_seqs;

    const FuncExpr& fn(const std::string& key) const;
    const NamedYoung& young(const std::string& key) const;
    // Every key referenced by a pair list resolves; throws SpecError if not.
    void validate() const;
};

Corpus default_corpus();

} // namespace hko
