#include "skewlab/fk.hpp"

#include <algorithm>
#include <cmath>

#include "skewlab/errors.hpp"

namespace skewlab {

namespace {

// Agreement of the symbols in the window around positions i of u and j of v,
// on flattened periods.
inline bool flat_window_agree(const std::vector<Symbol>& fu,
                              const std::vector<Symbol>& fv, std::int64_t i,
                              std::int64_t j, std::int64_t m) {
    const std::int64_t pu = static_cast<std::int64_t>(fu.size());
    const std::int64_t pv = static_cast<std::int64_t>(fv.size());
    for (std::int64_t l = -m; l <= m; ++l) {
        std::int64_t a = (i + l) % pu;
        if (a < 0) a += pu;
        std::int64_t b = (j + l) % pv;
        if (b < 0) b += pv;
        if (fu[static_cast<std::size_t>(a)] != fv[static_cast<std::size_t>(b)])
            return false;
    }
    return true;
}

}  // namespace

MatchResult max_fit(const MatchProblem& p, bool want_alignment) {
    const std::int64_t n = p.horizon;
    if (n < 1) throw Error("match horizon must be >= 1");
    if (n > p.dp_cap)
        throw LimitError("dp-horizon", "horizon " + std::to_string(n) +
                                           " exceeds the DP cap " +
                                           std::to_string(p.dp_cap));
    const std::vector<Symbol>& fu = p.u.flat();
    const std::vector<Symbol>& fv = p.v.flat();
    const std::int64_t pu = static_cast<std::int64_t>(fu.size());
    const std::int64_t pv = static_cast<std::int64_t>(fv.size());

    // agreement by residue pair when the table is small, else on the fly
    std::vector<std::uint8_t> table;
    bool have_table = pu <= (1 << 22) / std::max<std::int64_t>(pv, 1);
    if (have_table) {
        table.assign(static_cast<std::size_t>(pu * pv), 0);
        for (std::int64_t a = 0; a < pu; ++a)
            for (std::int64_t b = 0; b < pv; ++b)
                table[static_cast<std::size_t>(a * pv + b)] =
                    flat_window_agree(fu, fv, a, b, p.window) ? 1 : 0;
    }
    auto agree = [&](std::int64_t i, std::int64_t j) -> bool {
        if (have_table)
            return table[static_cast<std::size_t>((i % pu) * pv + (j % pv))] !=
                   0;
        return flat_window_agree(fu, fv, i, j, p.window);
    };

    if (want_alignment) {
        if (n > 2048)
            throw LimitError("alignment-horizon",
                             "alignment reconstruction capped at 2048");
        std::vector<std::uint32_t> T(
            static_cast<std::size_t>((n + 1) * (n + 1)), 0);
        auto at = [&](std::int64_t i, std::int64_t j) -> std::uint32_t& {
            return T[static_cast<std::size_t>(i * (n + 1) + j)];
        };
        for (std::int64_t i = 1; i <= n; ++i)
            for (std::int64_t j = 1; j <= n; ++j)
                at(i, j) = std::max(
                    {at(i - 1, j), at(i, j - 1),
                     at(i - 1, j - 1) + (agree(i - 1, j - 1) ? 1u : 0u)});
        MatchResult r;
        r.fit = at(n, n);
        std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
        std::int64_t i = n, j = n;
        while (i > 0 && j > 0) {
            if (agree(i - 1, j - 1) && at(i, j) == at(i - 1, j - 1) + 1) {
                pairs.emplace_back(i - 1, j - 1);
                --i;
                --j;
            } else if (at(i, j) == at(i - 1, j)) {
                --i;
            } else {
                --j;
            }
        }
        std::reverse(pairs.begin(), pairs.end());
        r.alignment = std::move(pairs);
        return r;
    }

    std::vector<std::uint32_t> prev(static_cast<std::size_t>(n + 1), 0);
    std::vector<std::uint32_t> cur(static_cast<std::size_t>(n + 1), 0);
    for (std::int64_t i = 1; i <= n; ++i) {
        cur[0] = 0;
        const bool row_table = have_table;
        const std::uint8_t* trow =
            row_table ? &table[static_cast<std::size_t>(((i - 1) % pu) * pv)]
                      : nullptr;
        for (std::int64_t j = 1; j <= n; ++j) {
            std::uint32_t best = std::max(prev[j], cur[j - 1]);
            bool ag = row_table
                          ? trow[static_cast<std::size_t>((j - 1) % pv)] != 0
                          : agree(i - 1, j - 1);
            std::uint32_t diag = prev[j - 1] + (ag ? 1u : 0u);
            cur[j] = std::max(best, diag);
        }
        std::swap(prev, cur);
    }
    MatchResult r;
    r.fit = prev[static_cast<std::size_t>(n)];
    return r;
}

double gap(const MatchProblem& p) {
    MatchResult r = max_fit(p);
    return 1.0 - double(r.fit) / double(p.horizon);
}

FbarProfile fbar_delta(const PeriodicPoint& u, const PeriodicPoint& v,
                       std::int64_t window,
                       const std::vector<std::int64_t>& multiples,
                       std::int64_t dp_cap) {
    if (multiples.empty()) throw Error("fbar_delta needs at least one multiple");
    std::uint64_t N64 = u.period() * v.period();
    FbarProfile prof;
    for (std::int64_t q : multiples) {
        if (q < 1) throw Error("multiples must be >= 1");
        std::int64_t N = static_cast<std::int64_t>(N64) * q;
        MatchProblem p{u, v, N, window, dp_cap};
        prof.horizons.push_back(N);
        prof.gaps.push_back(gap(p));
    }
    prof.estimate = prof.gaps.back();
    return prof;
}

FkDistanceResult fk_distance(const PeriodicPoint& u, const PeriodicPoint& v,
                             std::int64_t m_max,
                             const std::vector<std::int64_t>& multiples,
                             std::int64_t dp_cap) {
    FkDistanceResult out;
    if (same_phased_sequence(u, 0, v, 0)) {
        out.value = 0.0;
        out.exact_zero = true;
        return out;
    }
    if (m_max < 1) throw Error("m_max must be >= 1");
    double best = 1.0;
    for (std::int64_t m = 0; m <= m_max; ++m) {
        double gamma = fbar_delta(u, v, m + 1, multiples, dp_cap).estimate;
        double scale = std::ldexp(1.0, static_cast<int>(-m));
        if (gamma < scale)
            best = std::min(best, std::max(gamma, 0.5 * scale));
    }
    out.value = best;
    return out;
}

BlockMatchBound block_match_bound(const Stage& stage_n, const Stage& stage_n1,
                                  std::int64_t window) {
    if (stage_n1.n != stage_n.n + 1 || stage_n1.k < 2)
        throw Error("block bound needs consecutive stages");
    const std::int64_t pin = static_cast<std::int64_t>(stage_n.pi);
    const std::int64_t pin1 = static_cast<std::int64_t>(stage_n1.pi);
    const std::int64_t k = stage_n1.k;
    const std::int64_t R = static_cast<std::int64_t>(stage_n1.R);
    const std::int64_t body = k * pin;
    const std::int64_t m = window;

    BlockMatchBound out;
    out.blocks = static_cast<std::uint64_t>(pin);
    out.gap_upper = std::min(1.0, double(R + 2 * m) / double(pin1));
    if (body - 2 * m <= 0) {
        out.fit_per_block = 0;
        out.total_fit = 0;
        out.certified = true;  // vacuous: no pairs claimed
        return out;
    }
    out.fit_per_block = static_cast<std::uint64_t>(body - 2 * m);
    out.total_fit = out.blocks * out.fit_per_block;

    PeriodicPoint u(stage_n.xi), v(stage_n1.xi);
    const std::vector<Symbol>& fu = u.flat();
    const std::vector<Symbol>& fv = v.flat();

    // Every claimed pair inside a repetition run has constant offset b*R, and
    // its window stays inside the run, so contiguous symbol equality over
    // s in [0, k*pi_n) certifies all of them at once.
    for (std::int64_t s = 0; s < body; ++s) {
        if (fv[static_cast<std::size_t>(s)] !=
            fu[static_cast<std::size_t>(s % pin)])
            throw CheckError(
                "block-certification",
                "claimed match pair fails symbol equality at offset " +
                    std::to_string(s));
    }
    out.pairs_checked = out.total_fit;

    // deterministic sampled cross-check through the generic window predicate
    std::uint64_t state = 0x9e3779b97f4a7c15ull ^ (std::uint64_t(pin) << 32) ^
                          std::uint64_t(pin1);
    auto next = [&state]() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    };
    for (int t = 0; t < 64; ++t) {
        std::int64_t b = static_cast<std::int64_t>(next() % out.blocks);
        std::int64_t s =
            m + static_cast<std::int64_t>(next() %
                                          static_cast<std::uint64_t>(body - 2 * m));
        std::int64_t tpos = b * pin1 + s;
        if (!window_agree(u, tpos - b * R, v, tpos, m))
            throw CheckError("block-certification",
                             "sampled pair failed the window check at block " +
                                 std::to_string(b) + " offset " +
                                 std::to_string(s));
    }
    out.certified = true;
    return out;
}

double cauchy_bound(const Stage& stage_n1, int n) {
    return stage_n1.lambda + double(n + 1) * std::ldexp(1.0, -n);
}

namespace {

// next k-combination of {0..n-1} in lexicographic order; false when done
bool next_combination(std::vector<std::int64_t>& c, std::int64_t n) {
    std::int64_t k = static_cast<std::int64_t>(c.size());
    for (std::int64_t i = k - 1; i >= 0; --i) {
        if (c[static_cast<std::size_t>(i)] < n - (k - i)) {
            ++c[static_cast<std::size_t>(i)];
            for (std::int64_t j = i + 1; j < k; ++j)
                c[static_cast<std::size_t>(j)] =
                    c[static_cast<std::size_t>(j - 1)] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

std::uint64_t brute_force_fit(const PeriodicPoint& u, const PeriodicPoint& v,
                              std::int64_t horizon, std::int64_t window) {
    if (horizon < 1) throw Error("horizon must be >= 1");
    if (horizon > 10)
        throw LimitError("brute-force-horizon",
                         "explicit enumeration capped at horizon 10");
    for (std::int64_t s = horizon; s >= 1; --s) {
        std::vector<std::int64_t> D(static_cast<std::size_t>(s));
        for (std::int64_t i = 0; i < s; ++i) D[static_cast<std::size_t>(i)] = i;
        do {
            std::vector<std::int64_t> Rg(static_cast<std::size_t>(s));
            for (std::int64_t i = 0; i < s; ++i)
                Rg[static_cast<std::size_t>(i)] = i;
            do {
                bool all = true;
                for (std::int64_t i = 0; i < s && all; ++i)
                    all = window_agree(u, D[static_cast<std::size_t>(i)], v,
                                       Rg[static_cast<std::size_t>(i)], window);
                if (all) return static_cast<std::uint64_t>(s);
            } while (next_combination(Rg, horizon));
        } while (next_combination(D, horizon));
    }
    return 0;
}

}  // namespace skewlab
