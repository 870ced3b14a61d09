#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "skewlab/periodic.hpp"
#include "skewlab/stage.hpp"

namespace skewlab {

// Closeness at scale delta = 2^-m is window-m agreement of the shift
// coordinates, so every match problem is parametrized by an integer window.
struct MatchProblem {
    PeriodicPoint u;
    PeriodicPoint v;
    std::int64_t horizon = 1;  // n
    std::int64_t window = 0;   // m
    std::int64_t dp_cap = 20000;
};

struct MatchResult {
    std::uint64_t fit = 0;
    // matched index pairs, strictly increasing in both coordinates;
    // filled only when requested
    std::optional<std::vector<std::pair<std::int64_t, std::int64_t>>> alignment;
};

// Exact maximal fit over order-preserving partial bijections between the
// first n coordinates, by the LCS-style recurrence. Throws LimitError above
// the DP cap.
MatchResult max_fit(const MatchProblem& p, bool want_alignment = false);

// 1 - fit/n
double gap(const MatchProblem& p);

struct FbarProfile {
    std::vector<std::int64_t> horizons;
    std::vector<double> gaps;
    double estimate = 1.0;  // gap at the deepest horizon (every finite horizon
                            // bounds the limit along multiples from above)
};

// Gap at horizons q*N for q in multiples, N = period(u)*period(v). The limit
// along multiples of a common period exists and every finite value bounds it
// from above (fits are superadditive).
FbarProfile fbar_delta(const PeriodicPoint& u, const PeriodicPoint& v,
                       std::int64_t window,
                       const std::vector<std::int64_t>& multiples,
                       std::int64_t dp_cap);

struct FkDistanceResult {
    double value = 1.0;
    bool exact_zero = false;  // phased sequences verified equal
};

// inf{delta : fbar_delta < delta} over dyadic scales delta = 2^-m,
// m = 0..m_max; 1 if no scale qualifies.
FkDistanceResult fk_distance(const PeriodicPoint& u, const PeriodicPoint& v,
                             std::int64_t m_max,
                             const std::vector<std::int64_t>& multiples,
                             std::int64_t dp_cap);

struct BlockMatchBound {
    std::uint64_t fit_per_block = 0;  // k*pi_n - 2m
    std::uint64_t blocks = 0;         // pi_n blocks over horizon pi_n*pi_{n+1}
    std::uint64_t total_fit = 0;
    double gap_upper = 1.0;  // (R_{n+1} + 2m) / pi_{n+1}
    bool certified = false;
    std::uint64_t pairs_checked = 0;
};

// The constructive block-aligned match between consecutive stage orbits:
// inside each repetition run the claimed pairs have constant offset, so the
// whole run is certified by contiguous symbol equality over the run plus a
// deterministic sample of direct window checks. Throws CheckError if any
// claimed pair fails.
BlockMatchBound block_match_bound(const Stage& stage_n, const Stage& stage_n1,
                                  std::int64_t window);

// lambda_{n+1} + (n+1) * 2^-n for the pair (stage_n, stage_{n+1})
double cauchy_bound(const Stage& stage_n1_with_lambda, int n);

// Exact maximum by explicit enumeration of all order-preserving partial
// bijections; oracle for max_fit, horizons <= 10.
std::uint64_t brute_force_fit(const PeriodicPoint& u, const PeriodicPoint& v,
                              std::int64_t horizon, std::int64_t window);

}  // namespace skewlab
