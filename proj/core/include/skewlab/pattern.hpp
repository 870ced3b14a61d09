#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skewlab/stage.hpp"

namespace skewlab {

// Declared asymptotics for the ratio sequence beyond the built prefix:
// lambda_n <= C * ratio^n for n > after_stage. Finitely many stages cannot
// witness summability, so the tail is a declared model checked against the
// built prefix and folded into lambda_hat below.
struct TailModel {
    double C = 1.0;
    double ratio = 0.5;
    int after_stage = 0;
};

struct CheckRow {
    std::string name;
    int stage = -1;
    bool pass = false;
    std::string detail;
};

struct PatternCertificate {
    bool valid = false;
    std::vector<CheckRow> rows;
    double lambda_partial_sum = 0.0;
    double lambda_hat = 0.0;  // partial sum + declared tail
    double rho_last = 1.0;
    double rho_lower_bound = 1.0;  // exp(-lambda_hat)
};

struct NoiseStrategy {
    enum class Kind { Exhaustive, Sampled } kind = Kind::Exhaustive;
    std::uint64_t samples = 0;  // for Sampled
};

Stage init_stage0(const MapFamily& fam, const Word& omega0, const Arc& J0,
                  const StageOptions& opts);

Stage build_next_stage(const MapFamily& fam, const Stage& prev, int k_n,
                       const Word& alpha, const StageOptions& opts);

// Lexicographically first (exhaustive) or first sampled noise word alpha of
// length R_n for which build_next_stage succeeds.
Word search_noise_word(const MapFamily& fam, const Stage& prev, int k_n,
                       std::uint64_t R_n, const NoiseStrategy& strategy,
                       const StageOptions& opts, std::uint64_t seed);

struct SearchOutcome {
    Word alpha;
    Stage stage;
    std::uint64_t attempts = 0;
};

// Same search but returns the built stage, avoiding a rebuild.
SearchOutcome build_with_noise_search(const MapFamily& fam, const Stage& prev,
                                      int k_n, std::uint64_t R_n,
                                      const NoiseStrategy& strategy,
                                      const StageOptions& opts,
                                      std::uint64_t seed);

// Re-checks every stage invariant from scratch: interval nesting and
// shrinking, prefix-image disjointness at level 0, fixed points and
// contraction, word factorization, period and ratio recursions, and the
// declared tail model.
PatternCertificate validate(const MapFamily& fam,
                            const std::vector<Stage>& stages,
                            const TailModel& tail, const StageOptions& opts);

struct TrendRow {
    int n = 0;
    double lyapunov = 0.0;   // (1/pi_n) log|g_n'(q_n)|
    bool halving = false;    // lyapunov_n >= lyapunov_{n-1} / 2 (level >= 1)
    double gamma_log10 = 0.0;  // pi_n log10(max_j sup|f_j'|) + log10|J_n|
};

struct TrendReport {
    std::vector<TrendRow> rows;
    bool gamma_trend_decreasing = false;
};

// Informational side checks; no pass/fail verdict.
TrendReport contraction_trend_report(const std::vector<Stage>& stages,
                            const MapFamily& fam);

}  // namespace skewlab
