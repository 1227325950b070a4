#pragma once

#include <optional>
#include <string>
#include <vector>

#include "es/exact_arith.hpp"

namespace es {

enum class Rule { Even, Mult3, Mod3Is2, Mod4Is3, Mod24Is13, CompositeScale, Tame, ExhaustiveFallback };

const char* rule_name(Rule r);

// detail per rule:
//   Even/Mult3/Mod3Is2/Mod4Is3/Mod24Is13: {k}
//   CompositeScale: {p}
//   Tame: {m, k, im1, im2}
//   ExhaustiveFallback: {n, n1, n2}
struct TraceStep {
    Rule rule;
    std::vector<u64> detail;
};

struct DerivationTrace {
    std::vector<TraceStep> steps;  // scale steps first, terminal rule last
};

struct SolveResult {
    bool resolved = false;
    SolutionTriple triple;
    DerivationTrace trace;
};

// n < 3 -> std::domain_error; results beyond 64 bits -> std::overflow_error
SolveResult solve(u64 n, const SpfTable* spf = nullptr);

// lexicographically smallest (n1, n2) with n1 in (n/4, 3n/4]
std::optional<SolutionTriple> exhaustive_fallback(u64 n);

// rebuilds the triple from the trace alone; throws std::invalid_argument on an inconsistent trace
SolutionTriple replay(u64 n, const DerivationTrace& trace);

SolutionTriple scale_triple(const SolutionTriple& t, u64 p);

}  // namespace es
