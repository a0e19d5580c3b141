#pragma once

#include <string>

#include "hko/corpus.hpp"
#include "hko/funcspec.hpp"
#include "hko/young.hpp"

namespace hko {

// Loaders for the on-disk JSON formats. All validation errors surface as
// SpecError with the offending path in the message.
//
// Function spec:
//   { "kind": "expr" | "builtin",
//     "expr": "sin(x1*x2)",                          (kind = expr)
//     "builtin": { "name": "...", "params": {...} }, (kind = builtin)
//     "domain": [[lo, hi], ...],
//     "singular": [[coords], ...] }                  (optional, kind = expr)
//
// Young spec:
//   { "family": "power" | "scaled_power" | "expm" | "log1p" | "table",
//     "params": {...} }
FuncExpr load_function_spec(const std::string& path);
YoungFn load_young_spec(const std::string& path);

// Corpus manifest: named function and Young specs plus optional pair lists
// (norm_pairs defaults to the full cross product when omitted).
Corpus load_corpus(const std::string& path);

} // namespace hko
