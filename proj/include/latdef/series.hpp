#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "latdef/corner.hpp"

namespace latdef {

enum class SumMode {
    ExactRemainder,       // remainder is the exact tail (closed subtree sums)
    BoundedTail,          // remainder is a proven upper bound on the tail
    Heuristic,            // remainder is an extrapolation, no guarantee
    DivergenceSuspected,  // partial increments refuse to decay; no finite total claimed
};

const char* to_string(SumMode m);

// Outcome of one summation run. In exact-remainder mode total equals the
// limit up to accumulated floating error; in bounded-tail mode the limit
// lies inside [partial, total]; heuristic totals carry no guarantee.
struct SumReport {
    double power = 1.0;  // exponent alpha applied to each defect
    double partial = 0.0;
    double remainder = 0.0;  // NaN when no remainder statement is available
    double total = 0.0;
    std::uint64_t terms = 0;
    std::uint64_t frontier_size = 0;
    SumMode mode = SumMode::ExactRemainder;
    bool budget_exhausted = false;
};

// Frontier policies for the exact engine: a uniform depth cut (partial sums
// everything above the cut, remainder sums the closed forms on the cut) or a
// best-first expansion keyed on the subtree remainders.
struct DepthPolicy {
    int depth = 8;
};
struct BestFirstPolicy {
    std::uint64_t budget = 1000000;
};
using ExactPolicy = std::variant<DepthPolicy, BestFirstPolicy>;

// Sum of f^power (power 1 or 2) over the first-quadrant tree with exact
// remainder. The identity partial + remainder = 2 (power 1) or 2 - pi/2
// (power 2) holds at every frontier and is the engine's core self-check.
// threads > 1 parallelizes the depth policy over disjoint subtrees with a
// fixed merge order; results agree with serial mode to ~1e-15.
SumReport exact_partial_sum(int power, const ExactPolicy& policy, int threads = 1);

// Sum of f^alpha for arbitrary alpha > 0 via threshold enumeration.
// alpha >= 1: bounded-tail (remainder = below-threshold visited terms plus
// the frontier bound sum of subtree-sum^alpha). alpha < 1: three-rung
// threshold ladder 64t, 8t, t with power-law extrapolation in t^(1/3);
// increments that refuse to decay flag DivergenceSuspected (expected at and
// below alpha = 2/3, where the tail exponent alpha - 2/3 loses positivity).
// Pass threshold = NaN to derive it from max_nodes.
SumReport truncated_sum(double alpha, double threshold, std::uint64_t max_nodes);

// One row per alpha over a single best-first enumeration, plus the companion
// sum of (|v||w||v+w|)^(-alpha) over the same pairs. The companion tail obeys
// (|v||w||v+w|)^-1 <= 3 f, so for alpha >= 1 its remainder bound is 3^alpha
// times the f-bound.
struct ZetaRow {
    SumReport report;
    double companion_partial = 0.0;
    double companion_remainder = 0.0;
};

std::vector<ZetaRow> zeta_scan(const std::vector<double>& alphas, std::uint64_t budget);

// Exploratory sum of the extended defect over all determinant +1 integer
// matrices with entries bounded by entry_bound in absolute value. Exhaustive
// within the box; no limit statement exists, so the mode is heuristic.
SumReport extended_sum(std::int64_t entry_bound, int threads = 1);

}  // namespace latdef
